#pragma once

// Exact analytics for absorbing Markov chains over K transient nodes.
//
// Node ids are 0-based. The absorbing node is not stored in M; its
// transition probabilities are the row deficits m_i* = 1 - sum_j m_ij.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class InvalidInstance : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ValidationReport {
    bool nonnegative = true;
    bool norm_ok = true;        // ||M||_inf <= rho < 1
    bool primitive = true;
    bool primitivity_waived = false;
    double inf_norm = 0.0;
    double rho = 0.0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

// Checks nonnegativity, the row-sum bound and primitivity (positivity of some
// power M^k with k <= K^2). Never throws.
ValidationReport validate(const Matrix& transitions, double rho, bool allow_non_primitive = false);

// K x (K+1) edge lengths for one epoch; column K is the edge to the absorbing node.
class EdgeLengths {
public:
    EdgeLengths() = default;
    explicit EdgeLengths(Matrix lengths);

    static EdgeLengths constant(int K, double value);
    static EdgeLengths unit(int K) { return constant(K, 1.0); }

    int size() const { return static_cast<int>(values_.rows()); }
    double operator()(int from, int to) const { return values_(from, to); }
    double to_absorbing(int from) const { return values_(from, values_.cols() - 1); }
    const Matrix& matrix() const { return values_; }

private:
    Matrix values_;
};

class ChainInstance {
public:
    // Throws InvalidInstance when validation fails. A negative rho means
    // "use ||M||_inf".
    ChainInstance(Matrix transitions, double rho = -1.0, bool allow_non_primitive = false);

    int size() const { return static_cast<int>(transitions_.rows()); }
    const Matrix& transitions() const { return transitions_; }
    double transition(int from, int to) const { return transitions_(from, to); }
    double absorb(int from) const { return absorb_(from); }
    const Vector& absorb() const { return absorb_; }
    double rho() const { return rho_; }
    bool allows_non_primitive() const { return allow_non_primitive_; }

    // Cumulative row distribution over (0..K-1, absorbing) for sampling.
    const std::vector<double>& cumulative_row(int from) const { return cumulative_[from]; }

    ValidationReport validate() const;

    // Optional lengths carried by serialized instances.
    const std::optional<EdgeLengths>& fixed_lengths() const { return fixed_lengths_; }
    void set_fixed_lengths(EdgeLengths lengths);

private:
    Matrix transitions_;
    Vector absorb_;
    double rho_;
    bool allow_non_primitive_;
    std::vector<std::vector<double>> cumulative_;
    std::optional<EdgeLengths> fixed_lengths_;
};

// Expected one-step reward c_i = sum_j m_ij l_ij + m_i* l_i*.
Vector step_reward(const ChainInstance& chain, const EdgeLengths& lengths);

// Factorizes (I - M) once; solves (I - M) mu = c for many right-hand sides.
class HittingTimeSolver {
public:
    explicit HittingTimeSolver(const ChainInstance& chain);

    Vector solve(const Vector& step_reward) const;
    Vector hitting_times(const EdgeLengths& lengths) const;

private:
    Matrix transitions_;
    Vector absorb_;
    Eigen::PartialPivLU<Matrix> lu_;
};

// mu_i = E[length of a walk started at i].
Vector expected_hitting_times(const ChainInstance& chain, const EdgeLengths& lengths);
Vector expected_hitting_times(const ChainInstance& chain);  // unit lengths

// r_u = Pr(walk from u visits target before absorption); r_target = 1.
Vector first_passage_probs(const ChainInstance& chain, int target);

// Coverage matrix q(i, j) = Pr(j on a trajectory started at i), q(i, i) = 1.
Matrix coverage_probs(const ChainInstance& chain);

struct Centrality {
    Vector per_node;     // alpha_v
    double min = 1.0;    // alpha
    bool single_node = false;
};

Centrality hitting_centrality(const ChainInstance& chain);

// (1 - sqrt(x)) / (1 + sqrt(x)); throws std::domain_error outside [0, 1].
double f_curve(double x);

double kappa(const Vector& centralities);
double kappa(const ChainInstance& chain);

// rho^B / (1 - rho): tail bound on Pr(Z > B).
double tail_bound(double rho, std::int64_t B);

// Smallest B with K T rho^B / (1 - rho) <= eps_prob (at least 1).
std::int64_t b_param(int K, std::int64_t T, double rho, double eps_prob);

}  // namespace rwb
