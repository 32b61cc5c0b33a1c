#pragma once

#include <algorithm>
#include <functional>
#include <vector>

namespace pagsearch {

/// Visits subsets of `base` in ascending size, lexicographic within a size
/// (base is taken in its given order). Stops early when fn returns true;
/// returns whether a call returned true. max_size < 0 means |base|.
template <typename Fn>
bool for_each_subset_ascending(const std::vector<int> &base, int max_size, Fn &&fn) {
    int n = static_cast<int>(base.size());
    int cap = max_size < 0 ? n : std::min(max_size, n);
    std::vector<int> pick;
    for (int k = 0; k <= cap; ++k) {
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            pick.clear();
            for (int i : idx) pick.push_back(base[i]);
            if (fn(pick)) return true;
            if (k == 0) break;
            int i = k - 1;
            while (i >= 0 && idx[i] == n - k + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return false;
}

inline std::vector<int> sorted_intersection(std::vector<int> a, std::vector<int> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::vector<int> sorted_difference(std::vector<int> a, const std::vector<int> &b) {
    std::sort(a.begin(), a.end());
    std::vector<int> bs(b);
    std::sort(bs.begin(), bs.end());
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), bs.begin(), bs.end(), std::back_inserter(out));
    return out;
}

}  // namespace pagsearch
