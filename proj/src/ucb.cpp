#include "rwbandit/ucb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rwb {

long truncation_level(long t, double rho)
{
    if (!(rho > 0.0 && rho < 1.0))
        throw std::domain_error("truncation level requires 0 < rho < 1");
    const double raw = 3.0 * std::log(static_cast<double>(t) + 1.0) / std::log(1.0 / rho);
    // 3 ln 2 / ln 2 must give 3, not 3 + 1 ulp.
    return static_cast<long>(std::ceil(raw - 1e-9)) + 1;
}

double confidence(long n, long t, int K, double rho)
{
    if (n < 1 || t < 1)
        throw std::domain_error("confidence requires n >= 1 and t >= 1");
    const double xi = static_cast<double>(truncation_level(t, rho));
    const double tt = static_cast<double>(t);
    const double width = xi * std::sqrt(2.0 * std::log(2.0 * K * tt * tt) / static_cast<double>(n));
    return width + std::pow(rho, xi) / ((1.0 - rho) * (1.0 - rho));
}

TrajectoryUcb::TrajectoryUcb(int K, double rho, UcbVariant variant)
    : K_(K), rho_(rho), variant_(variant), ledger_(K), samples_(K), raw_sum_(K, 0.0), clipped_sum_(K, 0.0)
{
    if (!(rho > 0.0 && rho < 1.0))
        throw std::domain_error("UCB requires 0 < rho < 1");
}

int TrajectoryUcb::select() const
{
    if (warming_up())
        return static_cast<int>(ledger_.epoch() - 1);
    int best = 0;
    double best_index = index(0);
    for (int v = 1; v < K_; ++v) {
        const double I = index(v);
        if (I > best_index) {
            best = v;
            best_index = I;
        }
    }
    return best;
}

void TrajectoryUcb::step(const Trajectory& traj)
{
    const Coverage cov = ledger_.record(traj);
    const auto add = [this](int v, double y) {
        samples_[v].push_back(y);
        raw_sum_[v] += y;
        if (level_ >= 0)
            clipped_sum_[v] += std::min(y, static_cast<double>(level_));
    };
    if (variant_ == UcbVariant::Trajectory) {
        for (int v = 0; v < K_; ++v)
            if (cov.covered(v))
                add(v, cov.sample[v]);
    } else {
        add(traj.played(), trajectory_length(traj));
    }
}

long TrajectoryUcb::sample_count(int v) const
{
    return static_cast<long>(samples_[v].size());
}

void TrajectoryUcb::retruncate(long level) const
{
    if (level == level_)
        return;
    level_ = level;
    const double cap = static_cast<double>(level);
    for (int v = 0; v < K_; ++v) {
        double s = 0.0;
        for (double y : samples_[v])
            s += std::min(y, cap);
        clipped_sum_[v] = s;
    }
}

double TrajectoryUcb::estimate(int v) const
{
    const long n = sample_count(v);
    if (n == 0)
        return 0.0;
    retruncate(truncation_level(epoch(), rho_));
    return clipped_sum_[v] / static_cast<double>(n);
}

double TrajectoryUcb::raw_estimate(int v) const
{
    const long n = sample_count(v);
    return n == 0 ? 0.0 : raw_sum_[v] / static_cast<double>(n);
}

double TrajectoryUcb::index(int v) const
{
    const long n = std::max<long>(1, sample_count(v));
    return estimate(v) + confidence(n, epoch(), K_, rho_);
}

std::vector<double> TrajectoryUcb::indices() const
{
    std::vector<double> out(K_);
    for (int v = 0; v < K_; ++v)
        out[v] = index(v);
    return out;
}

}  // namespace rwb
