#include "rwbandit/lower_bounds.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace rwb {

namespace {

void check_two_node_eps(double eps)
{
    if (!(eps >= 0.0 && eps < 0.25))
        throw std::domain_error(fmt::format("two-node gap parameter {} outside [0, 1/4)", eps));
}

Matrix two_node_matrix(double eps, bool swapped)
{
    Matrix m(2, 2);
    m << 0.5, 0.125, 0.125, 0.5;
    if (swapped)
        m(0, 0) += eps;
    else
        m(1, 1) += eps;
    return m;
}

// (m_i0, m_i1, m_i*) for node i.
std::array<double, 3> first_step_law(const Matrix& m, int i)
{
    return {m(i, 0), m(i, 1), 1.0 - m(i, 0) - m(i, 1)};
}

}  // namespace

TwoNodePair make_two_node_pair(double eps)
{
    check_two_node_eps(eps);
    return TwoNodePair{eps, ChainInstance(two_node_matrix(eps, false)), ChainInstance(two_node_matrix(eps, true))};
}

double two_node_gap(double eps)
{
    const TwoNodePair pair = make_two_node_pair(eps);
    const Vector mu = expected_hitting_times(pair.base);
    return std::abs(mu(0) - mu(1));
}

double two_node_gap_closed_form(double eps)
{
    check_two_node_eps(eps);
    return 64.0 * eps / (15.0 - 32.0 * eps);
}

double categorical_kl(std::span<const double> p, std::span<const double> q)
{
    if (p.size() != q.size())
        throw std::invalid_argument("KL arguments differ in support size");
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0)
            continue;
        if (q[i] <= 0.0)
            return std::numeric_limits<double>::infinity();
        kl += p[i] * std::log(p[i] / q[i]);
    }
    return kl;
}

double per_step_kl(double eps, int node)
{
    check_two_node_eps(eps);
    if (node < 0 || node > 1)
        throw std::out_of_range("two-node instance has nodes 0 and 1");
    const auto p = first_step_law(two_node_matrix(eps, false), node);
    const auto q = first_step_law(two_node_matrix(eps, true), node);
    return categorical_kl(p, q);
}

std::pair<double, double> trajectory_kl(double eps)
{
    check_two_node_eps(eps);
    const Matrix m = two_node_matrix(eps, false);
    Vector c(2);
    c << per_step_kl(eps, 0), per_step_kl(eps, 1);
    const Matrix A = Matrix::Identity(2, 2) - m;
    const Vector d = A.partialPivLu().solve(c);
    return {d(0), d(1)};
}

double regret_lb_value(double eps, double T)
{
    return (32.0 / 15.0) * eps * T * std::exp(-(112.0 / 9.0) * T * eps * eps);
}

MinimaxChoice minimax_choice(double T)
{
    if (!(T >= 1.0))
        throw std::domain_error("horizon must be >= 1");
    const double eps = 0.25 / std::sqrt(T);
    return {eps, regret_lb_value(eps, T)};
}

double knode_eps(int K, double T)
{
    return (1.0 / (4.0 * std::sqrt(2.0))) * (static_cast<double>(K - 1) / K) * std::sqrt(K / T);
}

KNodeFamily make_knode_family(int K, double T)
{
    return make_knode_family(K, T, knode_eps(K, T));
}

KNodeFamily make_knode_family(int K, double T, double eps)
{
    if (K < 1)
        throw std::invalid_argument("K-node family needs K >= 1");
    if (!(T >= 1.0))
        throw std::invalid_argument("K-node family needs T >= 1");
    const double p = 1.0 / (2.0 * K);
    if (!(eps >= 0.0) || eps / (1.0 - K * p) > 0.5)
        throw std::invalid_argument(fmt::format("lifted Bernoulli mean 1/2 + {} leaves [0, 1]", eps / (1.0 - K * p)));
    return KNodeFamily{K, T, p, eps, ChainInstance(Matrix::Constant(K, K, p))};
}

Matrix KNodeFamily::length_means(int k) const
{
    Matrix means = Matrix::Constant(K, K + 1, 0.5);
    if (k >= 0) {
        if (k >= K)
            throw std::out_of_range("instance index out of range");
        means(k, K) = lifted_mean();
    }
    return means;
}

Vector knode_hitting_times(const KNodeFamily& family, int k)
{
    return expected_hitting_times(family.chain, EdgeLengths(family.length_means(k)));
}

double k_node_gap(const KNodeFamily& family, int k)
{
    const Vector H = knode_hitting_times(family, k);
    double first = -std::numeric_limits<double>::infinity();
    double second = -std::numeric_limits<double>::infinity();
    for (double h : H) {
        if (h > first) {
            second = first;
            first = h;
        } else if (h > second) {
            second = h;
        }
    }
    return H.size() < 2 ? 0.0 : first - second;
}

double k_node_bound(int K, double T)
{
    return std::sqrt(static_cast<double>(K) * T) / (8.0 * std::sqrt(2.0));
}

double per_step_kl_knode(const KNodeFamily& family, int i, int k)
{
    const int K = family.K;
    if (i < 0 || i >= K || k < 0 || k >= K)
        throw std::out_of_range("node index out of range");
    const Matrix base = family.length_means(-1);
    const Matrix lifted = family.length_means(k);
    // Outcomes (X_1 = j, L_1 = l) for j in 0..K (K = absorbing), l in {0, 1}.
    std::vector<double> p, q;
    p.reserve(2 * (K + 1));
    q.reserve(2 * (K + 1));
    for (int j = 0; j <= K; ++j) {
        const double move = j < K ? family.chain.transition(i, j) : family.chain.absorb(i);
        p.push_back(move * base(i, j));
        p.push_back(move * (1.0 - base(i, j)));
        q.push_back(move * lifted(i, j));
        q.push_back(move * (1.0 - lifted(i, j)));
    }
    return categorical_kl(p, q);
}

double per_step_kl_knode_stated_bound(const KNodeFamily& family)
{
    return family.eps * family.eps / (1.0 - family.K * family.p);
}

void write_lowerbound_report(std::ostream& out, std::span<const double> eps_grid, double T)
{
    out << "eps,gap_exact,gap_leading,step_kl_over_eps2,traj_kl_over_eps2,lb_value\n";
    for (double eps : eps_grid) {
        const double gap = two_node_gap(eps);
        const double step = per_step_kl(eps, 0);
        const double traj = trajectory_kl(eps).first;
        const double e2 = eps * eps;
        out << fmt::format("{},{},{},{},{},{}\n", eps, gap, 64.0 * eps / 15.0, e2 > 0 ? step / e2 : 0.0,
                           e2 > 0 ? traj / e2 : 0.0, regret_lb_value(eps, T));
    }
}

}  // namespace rwb
