#pragma once

#include <Eigen/Dense>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "pagsearch/graph.hpp"
#include "pagsearch/separation.hpp"

namespace pagsearch {

struct Dataset {
    std::vector<std::string> names;
    Eigen::MatrixXd values;  // n x p

    long n() const { return values.rows(); }
    int p() const { return static_cast<int>(values.cols()); }
};

Dataset read_csv(const std::string &path);
void write_csv(const Dataset &data, const std::string &path);

struct CovarianceModel {
    std::vector<std::string> names;
    Eigen::MatrixXd cov;  // p x p, symmetric
    long n = 0;
};

/// Sample covariance with 1/(n-1) normalization. Throws on a zero-variance
/// column.
CovarianceModel covariance(const Dataset &data);

struct CiDecision {
    bool independent = false;
    double p_value = 0.0;
    std::vector<int> set;
    bool degenerate = false;  // singular evidence, dependent by convention
};

/// Conditional-independence decisions behind one interface so the Fisher-Z
/// test and the m-separation oracle are interchangeable. Implementations are
/// immutable after construction and safe to call from multiple threads.
class CiTester {
public:
    virtual ~CiTester() = default;
    virtual CiDecision test(int x, int y, std::span<const int> z) const = 0;
    virtual int variable_count() const = 0;
};

class FisherZTester : public CiTester {
public:
    FisherZTester(CovarianceModel cm, double alpha);
    CiDecision test(int x, int y, std::span<const int> z) const override;
    int variable_count() const override { return static_cast<int>(cm_.cov.rows()); }
    double alpha() const { return alpha_; }

private:
    CovarianceModel cm_;
    double alpha_;
};

CiDecision fisher_z(const CovarianceModel &cm, int x, int y, std::span<const int> z, double alpha);

/// m-separation oracle over a true graph with latents. Search-side variable
/// indices are mapped to graph nodes by name.
class MsepOracleTester : public CiTester {
public:
    MsepOracleTester(const MixedGraph &true_graph, const std::vector<std::string> &variable_names);
    CiDecision test(int x, int y, std::span<const int> z) const override;
    int variable_count() const override { return static_cast<int>(to_graph_.size()); }

private:
    MsepContext ctx_;
    std::vector<int> to_graph_;
};

/// m-separation "tester" over the working graph itself; used when the
/// orientation rules need separation facts of a reference MAG rather than a
/// data test.
class GraphMsepTester : public CiTester {
public:
    explicit GraphMsepTester(const MixedGraph &g) : ctx_(g) {}
    CiDecision test(int x, int y, std::span<const int> z) const override;
    int variable_count() const override { return ctx_.graph().num_nodes(); }

private:
    MsepContext ctx_;
};

struct ScoreParams {
    double penalty_discount = 2.0;
};

/// Decomposable local score. gain() is the improvement from adding x as a
/// parent of v; the default derives it from local(), concrete scores may
/// override.
class Score {
public:
    virtual ~Score() = default;
    virtual double local(int v, std::span<const int> parents) const = 0;
    virtual double gain(int x, int v, std::span<const int> parents) const;
    virtual int variable_count() const = 0;
};

struct IntVecHash {
    size_t operator()(const std::vector<int> &v) const {
        size_t h = 1469598103934665603ull;
        for (int x : v) {
            h ^= static_cast<size_t>(x) + 0x9e3779b9;
            h *= 1099511628211ull;
        }
        return h;
    }
};

/// -n*ln(residual variance) - c*k*ln(n) with k = |parents| + 1; higher is
/// better. Memoized per (node, parent-set) behind a mutex.
class BicScore : public Score {
public:
    BicScore(CovarianceModel cm, ScoreParams params);
    double local(int v, std::span<const int> parents) const override;
    int variable_count() const override { return static_cast<int>(cm_.cov.rows()); }

private:
    CovarianceModel cm_;
    ScoreParams params_;
    mutable std::mutex mu_;
    mutable std::unordered_map<std::vector<int>, double, IntVecHash> cache_;
};

double bic_local(const CovarianceModel &cm, int node, std::span<const int> parents,
                 const ScoreParams &params);

/// d-separation oracle score: the gain of adding parent x is +1 when x is
/// still dependent on v given the other parents, else -1; totals count edges
/// so order search minimizes edge count.
class GraphScore : public Score {
public:
    GraphScore(const MixedGraph &true_graph, const std::vector<std::string> &variable_names);
    double local(int v, std::span<const int> parents) const override;
    double gain(int x, int v, std::span<const int> parents) const override;
    int variable_count() const override { return static_cast<int>(to_graph_.size()); }

private:
    MsepContext ctx_;
    std::vector<int> to_graph_;
};

}  // namespace pagsearch
