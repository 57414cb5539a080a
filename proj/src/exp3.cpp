#include "rwbandit/exp3.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rwb {

Exp3Params default_params(const ChainInstance& chain, std::int64_t T, double eps_prob)
{
    if (T < 1)
        throw std::invalid_argument("horizon T must be >= 1");
    if (!(eps_prob > 0.0) || eps_prob > 1.0 / static_cast<double>(T))
        throw std::invalid_argument(fmt::format("eps_prob = {} must lie in (0, 1/T]", eps_prob));
    Exp3Params p;
    p.eps_prob = eps_prob;
    const double eps = std::min(eps_prob, std::nextafter(1.0, 0.0));
    p.B = static_cast<double>(b_param(chain.size(), T, chain.rho(), eps));
    const Centrality alpha = hitting_centrality(chain);
    const double rate = 1.0 / std::sqrt(kappa(alpha.per_node) * static_cast<double>(T));
    p.eta = rate;
    p.beta = rate;
    p.beta_exceeds_alpha = p.beta > alpha.min;
    return p;
}

std::vector<double> softmax(std::span<const double> scores, double eta)
{
    const std::size_t K = scores.size();
    std::vector<double> p(K);
    double top = -std::numeric_limits<double>::infinity();
    for (double s : scores)
        top = std::max(top, eta * s);
    double total = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
        p[i] = std::exp(eta * scores[i] - top);
        total += p[i];
    }
    for (double& v : p)
        v /= total;
    return p;
}

std::vector<double> shifted_estimate(const Coverage& cov, std::span<const double> denominators, double B,
                                     double beta)
{
    const std::size_t K = denominators.size();
    std::vector<double> z(K);
    for (std::size_t i = 0; i < K; ++i) {
        const int v = static_cast<int>(i);
        const double shifted = cov.covered(v) ? (cov.sample[i] - B) / B : 0.0;
        z[i] = (shifted + beta) / denominators[i];
    }
    return z;
}

TrajectoryExp3::TrajectoryExp3(int K, Exp3Params params, Exp3Estimator estimator)
    : K_(K), params_(params), estimator_(estimator), ledger_(K), scores_(K, 0.0)
{
    if (!(params_.B > 0.0))
        throw std::invalid_argument("shift level B must be positive");
    if (params_.eta < 0.0 || params_.beta < 0.0)
        throw std::invalid_argument("eta and beta must be nonnegative");
}

std::vector<double> TrajectoryExp3::probs() const
{
    if (ledger_.epoch() == 1)
        return std::vector<double>(K_, 1.0 / K_);
    return softmax(scores_, params_.eta);
}

int TrajectoryExp3::sample(Rng& rng) const
{
    return rng.categorical(probs());
}

std::vector<double> TrajectoryExp3::loss_estimate(const Trajectory& traj) const
{
    const std::vector<double> p = probs();
    const Coverage cov = extract_all(traj, K_);
    switch (estimator_) {
    case Exp3Estimator::Shifted:
        return shifted_estimate(cov, ledger_.p_hat(p), params_.B, params_.beta);
    case Exp3Estimator::Covered: {
        const std::vector<double> denom = ledger_.p_hat(p);
        std::vector<double> z(K_, 0.0);
        for (int i = 0; i < K_; ++i)
            if (cov.covered(i))
                z[i] = cov.sample[i] / denom[i];
        return z;
    }
    case Exp3Estimator::Standard:
        break;
    }
    std::vector<double> z(K_, 0.0);
    const int J = traj.played();
    z[J] = trajectory_length(traj) / p[J];
    return z;
}

std::vector<double> TrajectoryExp3::update(const Trajectory& traj)
{
    std::vector<double> z = loss_estimate(traj);
    ledger_.record(traj);
    last_touched_ = 0;
    for (int i = 0; i < K_; ++i) {
        // The standard estimator touches only the played node.
        if (estimator_ == Exp3Estimator::Standard && i != traj.played())
            continue;
        scores_[i] += z[i];
        ++last_touched_;
    }
    return z;
}

}  // namespace rwb
