#include "rwbandit/feedback.hpp"

#include <fmt/format.h>

#include <cassert>
#include <ostream>

namespace rwb {

Coverage extract_all(const Trajectory& traj, int K)
{
    Coverage cov;
    cov.first_position.assign(K, -1);
    cov.sample.assign(K, 0.0);
    const int H = traj.steps();
    // suffix[i] = L_{i+1} + ... + L_H
    std::vector<double> suffix(H + 1, 0.0);
    for (int i = H - 1; i >= 0; --i)
        suffix[i] = suffix[i + 1] + traj.lengths[i];
    for (int i = 0; i < H; ++i) {
        const int v = traj.nodes[i];
        if (v < 0 || v >= K)
            throw std::out_of_range(fmt::format("trajectory node {} outside [0, {})", v, K));
        if (cov.first_position[v] < 0) {
            cov.first_position[v] = i;
            cov.sample[v] = suffix[i];
        }
    }
    return cov;
}

std::optional<double> extract_sample(const Trajectory& traj, int v)
{
    double suffix = 0.0;
    std::optional<double> found;
    // Walk backwards so the last hit is the first occurrence.
    for (int i = traj.steps() - 1; i >= 0; --i) {
        suffix += traj.lengths[i];
        if (traj.nodes[i] == v)
            found = suffix;
    }
    return found;
}

FeedbackLedger::FeedbackLedger(int K)
    : K_(K), plays_(K, 0), covers_(K, 0), pairs_(static_cast<std::size_t>(K) * K, 0), sample_sum_(K, 0.0)
{
    if (K < 1)
        throw std::invalid_argument("ledger needs K >= 1");
}

Coverage FeedbackLedger::record(const Trajectory& traj)
{
    if (traj.epoch != epoch_)
        throw SequencingError(fmt::format("trajectory from epoch {} recorded at ledger epoch {}", traj.epoch, epoch_));
    Coverage cov = extract_all(traj, K_);
    // j counts for i when it is visited anywhere after i's first occurrence,
    // i.e. by the walk that restarts at i. Comparing first occurrences of both
    // would miss walks that visit j, then i, then j again.
    std::vector<int> last(K_, -1);
    for (int k = 0; k < traj.steps(); ++k)
        last[traj.nodes[k]] = k;
    ++plays_[traj.played()];
    for (int i = 0; i < K_; ++i) {
        if (!cov.covered(i))
            continue;
        ++covers_[i];
        sample_sum_[i] += cov.sample[i];
        for (int j = 0; j < K_; ++j)
            if (j != i && last[j] > cov.first_position[i])
                ++pairs_[static_cast<std::size_t>(i) * K_ + j];
    }
    assert(covers_[traj.played()] >= plays_[traj.played()]);
    ++epoch_;
    return cov;
}

double FeedbackLedger::sample_mean(int v) const
{
    return covers_[v] > 0 ? sample_sum_[v] / static_cast<double>(covers_[v]) : 0.0;
}

Matrix FeedbackLedger::q_hat() const
{
    Matrix q(K_, K_);
    for (int i = 0; i < K_; ++i) {
        const double n = static_cast<double>(cover_count(i));
        for (int j = 0; j < K_; ++j)
            q(i, j) = i == j ? 1.0 : static_cast<double>(pair_count(i, j)) / n;
    }
    return q;
}

std::vector<double> FeedbackLedger::p_hat(std::span<const double> p) const
{
    return p_tilde(q_hat(), p);
}

void FeedbackLedger::write_snapshot(std::ostream& out) const
{
    out << "v,N,N_plus,mean_Y";
    for (int j = 0; j < K_; ++j)
        out << ",q_hat_" << j;
    out << '\n';
    const Matrix q = q_hat();
    for (int v = 0; v < K_; ++v) {
        out << fmt::format("{},{},{},{}", v, play_count(v), cover_count(v), sample_mean(v));
        for (int j = 0; j < K_; ++j)
            out << ',' << fmt::format("{}", q(v, j));
        out << '\n';
    }
}

std::vector<double> p_tilde(const Matrix& coverage, std::span<const double> p)
{
    const int K = static_cast<int>(coverage.rows());
    if (static_cast<int>(p.size()) != K)
        throw std::invalid_argument("probability vector does not match K");
    std::vector<double> out(K);
    for (int j = 0; j < K; ++j) {
        double s = p[j];
        for (int i = 0; i < K; ++i)
            if (i != j)
                s += coverage(i, j) * p[i];
        out[j] = s;
    }
    return out;
}

std::vector<double> p_tilde(const ChainInstance& chain, std::span<const double> p)
{
    return p_tilde(coverage_probs(chain), p);
}

}  // namespace rwb
