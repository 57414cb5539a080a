#include "rwbandit/markov.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rwb {

namespace {

// Boolean reachability: is some power M^k, 1 <= k <= K^2, entrywise positive?
bool is_primitive(const Matrix& m)
{
    const int K = static_cast<int>(m.rows());
    using BoolMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
    BoolMatrix pattern = (m.array() > 0.0).cast<int>();
    BoolMatrix power = pattern;
    const long limit = static_cast<long>(K) * K;
    for (long k = 1; k <= limit; ++k) {
        if ((power.array() > 0).all())
            return true;
        BoolMatrix next = (power * pattern).unaryExpr([](int v) { return v > 0 ? 1 : 0; });
        if (next == power)
            return false;
        power = std::move(next);
    }
    return (power.array() > 0).all();
}

}  // namespace

ValidationReport validate(const Matrix& transitions, double rho, bool allow_non_primitive)
{
    ValidationReport report;
    report.rho = rho;
    const int K = static_cast<int>(transitions.rows());
    if (K < 1 || transitions.cols() != K) {
        report.failures.push_back(fmt::format("transition matrix must be square with K >= 1 (got {}x{})",
                                              transitions.rows(), transitions.cols()));
        report.norm_ok = false;
        report.primitive = false;
        return report;
    }
    if (!transitions.allFinite()) {
        report.nonnegative = false;
        report.failures.push_back("transition matrix has non-finite entries");
    } else if ((transitions.array() < 0.0).any()) {
        report.nonnegative = false;
        report.failures.push_back("transition matrix has negative entries");
    }

    report.inf_norm = transitions.cwiseAbs().rowwise().sum().maxCoeff();
    if (!(rho < 1.0)) {
        report.norm_ok = false;
        report.failures.push_back(fmt::format("rho = {} must be < 1", rho));
    }
    if (!(report.inf_norm <= rho)) {
        report.norm_ok = false;
        report.failures.push_back(fmt::format("||M||_inf = {} exceeds rho = {}", report.inf_norm, rho));
    }

    report.primitive = is_primitive(transitions);
    if (!report.primitive) {
        if (allow_non_primitive)
            report.primitivity_waived = true;
        else
            report.failures.push_back("transition matrix is not primitive");
    }
    return report;
}

EdgeLengths::EdgeLengths(Matrix lengths) : values_(std::move(lengths))
{
    if (values_.cols() != values_.rows() + 1)
        throw std::invalid_argument(
            fmt::format("edge lengths must be K x (K+1), got {}x{}", values_.rows(), values_.cols()));
    if (!values_.allFinite() || (values_.array() < 0.0).any() || (values_.array() > 1.0).any())
        throw std::invalid_argument("edge lengths must lie in [0, 1]");
}

EdgeLengths EdgeLengths::constant(int K, double value)
{
    return EdgeLengths(Matrix::Constant(K, K + 1, value));
}

ChainInstance::ChainInstance(Matrix transitions, double rho, bool allow_non_primitive)
    : transitions_(std::move(transitions)), allow_non_primitive_(allow_non_primitive)
{
    if (rho < 0.0 && transitions_.rows() > 0)
        rho = transitions_.cwiseAbs().rowwise().sum().maxCoeff();
    rho_ = rho;
    const ValidationReport report = rwb::validate(transitions_, rho_, allow_non_primitive_);
    if (!report.ok()) {
        std::string msg = "invalid chain instance:";
        for (const auto& f : report.failures)
            msg += " " + f + ";";
        throw InvalidInstance(msg);
    }
    const int K = size();
    absorb_ = Vector::Ones(K) - transitions_.rowwise().sum();
    cumulative_.resize(K);
    for (int i = 0; i < K; ++i) {
        auto& row = cumulative_[i];
        row.resize(K + 1);
        double acc = 0.0;
        for (int j = 0; j < K; ++j) {
            acc += transitions_(i, j);
            row[j] = acc;
        }
        row[K] = 1.0;
    }
}

ValidationReport ChainInstance::validate() const
{
    return rwb::validate(transitions_, rho_, allow_non_primitive_);
}

void ChainInstance::set_fixed_lengths(EdgeLengths lengths)
{
    if (lengths.size() != size())
        throw std::invalid_argument("fixed lengths do not match the chain size");
    fixed_lengths_ = std::move(lengths);
}

Vector step_reward(const ChainInstance& chain, const EdgeLengths& lengths)
{
    const int K = chain.size();
    if (lengths.size() != K)
        throw std::invalid_argument("edge lengths do not match the chain size");
    const Matrix& L = lengths.matrix();
    Vector c = chain.transitions().cwiseProduct(L.leftCols(K)).rowwise().sum();
    c += chain.absorb().cwiseProduct(L.col(K));
    return c;
}

HittingTimeSolver::HittingTimeSolver(const ChainInstance& chain)
    : transitions_(chain.transitions()), absorb_(chain.absorb())
{
    const int K = chain.size();
    lu_.compute(Matrix::Identity(K, K) - transitions_);
    const Vector pivots = lu_.matrixLU().diagonal().cwiseAbs();
    if (!(pivots.minCoeff() > 1e-14))
        throw std::logic_error("I - M is singular: the chain violates the row-sum bound");
}

Vector HittingTimeSolver::solve(const Vector& step_reward) const
{
    return lu_.solve(step_reward);
}

Vector HittingTimeSolver::hitting_times(const EdgeLengths& lengths) const
{
    const int K = static_cast<int>(transitions_.rows());
    if (lengths.size() != K)
        throw std::invalid_argument("edge lengths do not match the chain size");
    const Matrix& L = lengths.matrix();
    Vector c = transitions_.cwiseProduct(L.leftCols(K)).rowwise().sum();
    c += absorb_.cwiseProduct(L.col(K));
    return lu_.solve(c);
}

Vector expected_hitting_times(const ChainInstance& chain, const EdgeLengths& lengths)
{
    return HittingTimeSolver(chain).hitting_times(lengths);
}

Vector expected_hitting_times(const ChainInstance& chain)
{
    return HittingTimeSolver(chain).solve(Vector::Ones(chain.size()));
}

Vector first_passage_probs(const ChainInstance& chain, int target)
{
    const int K = chain.size();
    if (target < 0 || target >= K)
        throw std::out_of_range("target node out of range");
    Vector r = Vector::Zero(K);
    r(target) = 1.0;
    if (K == 1)
        return r;

    // Reduced system over the K-1 nodes other than the target.
    std::vector<int> others;
    others.reserve(K - 1);
    for (int u = 0; u < K; ++u)
        if (u != target)
            others.push_back(u);
    const int n = K - 1;
    Matrix A(n, n);
    Vector b(n);
    for (int a = 0; a < n; ++a) {
        for (int c = 0; c < n; ++c)
            A(a, c) = (a == c ? 1.0 : 0.0) - chain.transition(others[a], others[c]);
        b(a) = chain.transition(others[a], target);
    }
    const Vector x = A.partialPivLu().solve(b);
    for (int a = 0; a < n; ++a)
        r(others[a]) = std::clamp(x(a), 0.0, 1.0);
    return r;
}

Matrix coverage_probs(const ChainInstance& chain)
{
    const int K = chain.size();
    Matrix q(K, K);
    for (int j = 0; j < K; ++j)
        q.col(j) = first_passage_probs(chain, j);
    return q;
}

Centrality hitting_centrality(const ChainInstance& chain)
{
    const int K = chain.size();
    Centrality out;
    out.per_node = Vector::Ones(K);
    if (K == 1) {
        out.single_node = true;
        out.min = 1.0;
        return out;
    }
    for (int v = 0; v < K; ++v) {
        const Vector r = first_passage_probs(chain, v);
        double lo = std::numeric_limits<double>::infinity();
        for (int u = 0; u < K; ++u)
            if (u != v)
                lo = std::min(lo, r(u));
        out.per_node(v) = lo;
    }
    out.min = out.per_node.minCoeff();
    return out;
}

double f_curve(double x)
{
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error(fmt::format("f_curve argument {} outside [0, 1]", x));
    const double s = std::sqrt(x);
    return (1.0 - s) / (1.0 + s);
}

double kappa(const Vector& centralities)
{
    double k = 1.0;
    for (double a : centralities)
        k += f_curve(std::clamp(a, 0.0, 1.0));
    return k;
}

double kappa(const ChainInstance& chain)
{
    return kappa(hitting_centrality(chain).per_node);
}

double tail_bound(double rho, std::int64_t B)
{
    if (!(rho > 0.0 && rho < 1.0))
        throw std::domain_error("tail_bound requires 0 < rho < 1");
    return std::pow(rho, static_cast<double>(B)) / (1.0 - rho);
}

std::int64_t b_param(int K, std::int64_t T, double rho, double eps_prob)
{
    if (!(eps_prob > 0.0 && eps_prob < 1.0))
        throw std::domain_error("b_param requires eps_prob in (0, 1)");
    if (!(rho > 0.0 && rho < 1.0))
        throw std::domain_error("b_param requires 0 < rho < 1");
    const double KT = static_cast<double>(K) * static_cast<double>(T);
    const double raw = std::log(KT / ((1.0 - rho) * eps_prob)) / std::log(1.0 / rho);
    auto B = static_cast<std::int64_t>(std::ceil(raw));
    B = std::max<std::int64_t>(B, 1);
    // Guard the postcondition against rounding in the logarithms.
    while (KT * tail_bound(rho, B) > eps_prob)
        ++B;
    while (B > 1 && KT * tail_bound(rho, B - 1) <= eps_prob)
        --B;
    return B;
}

}  // namespace rwb
