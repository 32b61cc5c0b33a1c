#include "pagsearch/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pagsearch {

namespace {

constexpr double kPivotEps = 1e-10;

double std_normal_two_sided_p(double z) {
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

}  // namespace

Dataset read_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open csv: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    Dataset data;
    {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) data.names.push_back(tok);
    }
    int p = static_cast<int>(data.names.size());
    if (p == 0) throw std::runtime_error("csv has no columns: " + path);
    std::vector<double> flat;
    long rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const char *ptr = line.data();
        const char *end = ptr + line.size();
        for (int j = 0; j < p; ++j) {
            double v = 0.0;
            auto res = std::from_chars(ptr, end, v);
            if (res.ec != std::errc()) throw std::runtime_error("bad numeric cell in " + path);
            flat.push_back(v);
            ptr = res.ptr;
            if (j + 1 < p) {
                if (ptr >= end || *ptr != ',') throw std::runtime_error("bad csv row in " + path);
                ++ptr;
            }
        }
        ++rows;
    }
    data.values.resize(rows, p);
    for (long i = 0; i < rows; ++i)
        for (int j = 0; j < p; ++j) data.values(i, j) = flat[i * p + j];
    return data;
}

void write_csv(const Dataset &data, const std::string &path) {
    std::FILE *f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write csv: " + path);
    for (size_t j = 0; j < data.names.size(); ++j)
        std::fprintf(f, "%s%s", data.names[j].c_str(), j + 1 < data.names.size() ? "," : "\n");
    for (long i = 0; i < data.n(); ++i)
        for (int j = 0; j < data.p(); ++j)
            std::fprintf(f, "%.17g%s", data.values(i, j), j + 1 < data.p() ? "," : "\n");
    std::fclose(f);
}

CovarianceModel covariance(const Dataset &data) {
    long n = data.n();
    int p = data.p();
    if (n < 2) throw std::invalid_argument("covariance: need at least two rows");
    Eigen::MatrixXd centered = data.values.rowwise() - data.values.colwise().mean();
    CovarianceModel cm;
    cm.names = data.names;
    cm.cov = (centered.adjoint() * centered) / static_cast<double>(n - 1);
    cm.n = n;
    for (int j = 0; j < p; ++j)
        if (cm.cov(j, j) <= 0.0)
            throw std::invalid_argument("covariance: degenerate column " + data.names[j]);
    return cm;
}

CiDecision fisher_z(const CovarianceModel &cm, int x, int y, std::span<const int> z,
                    double alpha) {
    CiDecision d;
    d.set.assign(z.begin(), z.end());
    if (x == y) {
        d.independent = false;
        d.p_value = 0.0;
        return d;
    }
    int k = static_cast<int>(z.size());
    Eigen::MatrixXd sub(k + 2, k + 2);
    std::vector<int> idx{x, y};
    idx.insert(idx.end(), z.begin(), z.end());
    for (int i = 0; i < k + 2; ++i)
        for (int j = 0; j < k + 2; ++j) sub(i, j) = cm.cov(idx[i], idx[j]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    lu.setThreshold(kPivotEps);
    if (!lu.isInvertible()) {
        d.independent = false;
        d.p_value = 0.0;
        d.degenerate = true;
        return d;
    }
    Eigen::MatrixXd prec = lu.inverse();
    double r = -prec(0, 1) / std::sqrt(prec(0, 0) * prec(1, 1));
    r = std::clamp(r, -1.0 + 1e-15, 1.0 - 1e-15);
    double dof = static_cast<double>(cm.n) - k - 3;
    if (dof <= 0) {
        d.independent = false;
        d.p_value = 0.0;
        d.degenerate = true;
        return d;
    }
    double stat = std::sqrt(dof) * std::atanh(r);
    d.p_value = std_normal_two_sided_p(stat);
    d.independent = d.p_value > alpha;
    return d;
}

FisherZTester::FisherZTester(CovarianceModel cm, double alpha)
    : cm_(std::move(cm)), alpha_(alpha) {}

CiDecision FisherZTester::test(int x, int y, std::span<const int> z) const {
    return fisher_z(cm_, x, y, z, alpha_);
}

MsepOracleTester::MsepOracleTester(const MixedGraph &true_graph,
                                   const std::vector<std::string> &variable_names)
    : ctx_(true_graph) {
    for (const auto &nm : variable_names) {
        int idx = true_graph.index_of(nm);
        if (idx < 0) throw std::invalid_argument("oracle: variable not in true graph: " + nm);
        to_graph_.push_back(idx);
    }
}

CiDecision MsepOracleTester::test(int x, int y, std::span<const int> z) const {
    std::vector<int> cond;
    cond.reserve(z.size());
    for (int v : z) cond.push_back(to_graph_.at(v));
    CiDecision d;
    d.set.assign(z.begin(), z.end());
    bool connected = ctx_.m_connected(to_graph_.at(x), to_graph_.at(y), cond);
    d.independent = !connected;
    d.p_value = d.independent ? 1.0 : 0.0;
    return d;
}

CiDecision GraphMsepTester::test(int x, int y, std::span<const int> z) const {
    CiDecision d;
    d.set.assign(z.begin(), z.end());
    d.independent = ctx_.m_separated(x, y, z);
    d.p_value = d.independent ? 1.0 : 0.0;
    return d;
}

double Score::gain(int x, int v, std::span<const int> parents) const {
    std::vector<int> with(parents.begin(), parents.end());
    with.push_back(x);
    return local(v, with) - local(v, parents);
}

BicScore::BicScore(CovarianceModel cm, ScoreParams params)
    : cm_(std::move(cm)), params_(params) {}

double bic_local(const CovarianceModel &cm, int node, std::span<const int> parents,
                 const ScoreParams &params) {
    double n = static_cast<double>(cm.n);
    double resid;
    int k = static_cast<int>(parents.size());
    if (k == 0) {
        resid = cm.cov(node, node);
    } else {
        Eigen::MatrixXd cpp(k, k);
        Eigen::VectorXd cpx(k);
        for (int i = 0; i < k; ++i) {
            cpx(i) = cm.cov(parents[i], node);
            for (int j = 0; j < k; ++j) cpp(i, j) = cm.cov(parents[i], parents[j]);
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(cpp);
        if (ldlt.info() != Eigen::Success ||
            (ldlt.vectorD().array().abs() < kPivotEps).any()) {
            return -std::numeric_limits<double>::infinity();
        }
        resid = cm.cov(node, node) - cpx.dot(ldlt.solve(cpx));
    }
    if (!(resid > kPivotEps)) return -std::numeric_limits<double>::infinity();
    return -n * std::log(resid) - params.penalty_discount * (k + 1) * std::log(n);
}

double BicScore::local(int v, std::span<const int> parents) const {
    std::vector<int> key(parents.begin(), parents.end());
    std::sort(key.begin(), key.end());
    key.push_back(v);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    key.pop_back();
    double value = bic_local(cm_, v, key, params_);
    key.push_back(v);
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(std::move(key), value);
    return value;
}

GraphScore::GraphScore(const MixedGraph &true_graph,
                       const std::vector<std::string> &variable_names)
    : ctx_(true_graph) {
    for (const auto &nm : variable_names) {
        int idx = true_graph.index_of(nm);
        if (idx < 0) throw std::invalid_argument("graph score: unknown variable " + nm);
        to_graph_.push_back(idx);
    }
}

double GraphScore::local(int v, std::span<const int> parents) const {
    (void)v;
    return -static_cast<double>(parents.size());
}

double GraphScore::gain(int x, int v, std::span<const int> parents) const {
    std::vector<int> cond;
    cond.reserve(parents.size());
    for (int p : parents) cond.push_back(to_graph_.at(p));
    bool connected = ctx_.m_connected(to_graph_.at(x), to_graph_.at(v), cond);
    return connected ? 1.0 : -1.0;
}

}  // namespace pagsearch
