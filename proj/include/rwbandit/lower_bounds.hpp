#pragma once

// Hard instances behind the minimax lower bounds, with exact evaluation of
// every closed-form quantity used to argue them.

#include "rwbandit/markov.hpp"
#include "rwbandit/trajectory.hpp"

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace rwb {

// Two transient nodes, unit lengths:
//   M  = [[1/2, 1/8], [1/8, 1/2 + eps]]   (node 1 optimal)
//   M' = [[1/2 + eps, 1/8], [1/8, 1/2]]   (node 0 optimal)
struct TwoNodePair {
    double eps;
    ChainInstance base;
    ChainInstance swapped;
};

TwoNodePair make_two_node_pair(double eps);

// |mu_0 - mu_1| from the linear solve. eps must lie in [0, 1/4).
double two_node_gap(double eps);
double two_node_gap_closed_form(double eps);  // 64 eps / (15 - 32 eps)

// KL(P || Q) of two categorical laws; infinite if Q misses mass of P.
double categorical_kl(std::span<const double> p, std::span<const double> q);

// KL between the first-step laws from `node` under M and M'.
double per_step_kl(double eps, int node = 0);

// Per-trajectory KLs (d_0, d_1): d = c + M d with c the per-step KLs.
std::pair<double, double> trajectory_kl(double eps);

// (32/15) eps T exp(-(112/9) T eps^2).
double regret_lb_value(double eps, double T);

struct MinimaxChoice {
    double eps;
    double value;
};
// eps* = T^{-1/2} / 4.
MinimaxChoice minimax_choice(double T);

// K transient nodes, every transition probability p = 1/(2K), Bernoulli
// lengths with mean 1/2 except edge (k, *) of instance k whose mean is
// 1/2 + eps/(1 - Kp).
struct KNodeFamily {
    int K;
    double T;
    double p;
    double eps;
    ChainInstance chain;

    double lifted_mean() const { return 0.5 + eps / (1.0 - K * p); }
    // Mean-length matrix of instance k (k = -1 for the base instance).
    Matrix length_means(int k) const;
    LengthProcess lengths(int k) const { return bernoulli_length_process(length_means(k)); }
};

double knode_eps(int K, double T);
// Throws std::invalid_argument when eps / (1 - Kp) > 1/2.
KNodeFamily make_knode_family(int K, double T);
KNodeFamily make_knode_family(int K, double T, double eps);

// Expected hitting times H_k of instance k.
Vector knode_hitting_times(const KNodeFamily& family, int k);
// Largest minus second-largest component of H_k.
double k_node_gap(const KNodeFamily& family, int k = 0);
// sqrt(K T) / (8 sqrt 2).
double k_node_bound(int K, double T);

// Exact KL of the (X_1, L_1) law from node i between the base instance and instance k.
double per_step_kl_knode(const KNodeFamily& family, int i, int k);
// eps^2 / (1 - Kp), the per-step bound quoted for i = k.
double per_step_kl_knode_stated_bound(const KNodeFamily& family);

// CSV: eps, gap_exact, gap_leading, step_kl_ratio, traj_kl_ratio, lb_value.
void write_lowerbound_report(std::ostream& out, std::span<const double> eps_grid, double T);

}  // namespace rwb
