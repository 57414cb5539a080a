#pragma once

#include "rwbandit/markov.hpp"
#include "rwbandit/trajectory.hpp"

#include <algorithm>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace rwb {

class SequencingError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Suffix length from the first occurrence of v to absorption, or nullopt when
// v is not on the trajectory. One sample per node per trajectory.
std::optional<double> extract_sample(const Trajectory& traj, int v);

// Per-node view of one trajectory: first-occurrence position (-1 if absent)
// and the extracted sample.
struct Coverage {
    std::vector<int> first_position;
    std::vector<double> sample;

    bool covered(int v) const { return first_position[v] >= 0; }
};

Coverage extract_all(const Trajectory& traj, int K);

// Counters N_t, N_t^+, pair tallies and sample sums over epochs 1..t-1.
class FeedbackLedger {
public:
    explicit FeedbackLedger(int K);

    int size() const { return K_; }
    // Epoch of the next trajectory to record (starts at 1).
    long epoch() const { return epoch_; }

    // Records the epoch-t trajectory; throws SequencingError if traj.epoch != epoch().
    Coverage record(const Trajectory& traj);

    // Floored at 1.
    long play_count(int v) const { return std::max<long>(1, plays_[v]); }
    long cover_count(int v) const { return std::max<long>(1, covers_[v]); }
    long raw_play_count(int v) const { return plays_[v]; }
    long raw_cover_count(int v) const { return covers_[v]; }
    long pair_count(int i, int j) const { return pairs_[static_cast<std::size_t>(i) * K_ + j]; }

    double sample_sum(int v) const { return sample_sum_[v]; }
    // Mean of extracted samples; 0 when none.
    double sample_mean(int v) const;

    // q_hat(i, j) = #{s < t : j visited after the first i on P_s} / N_t^+(i); diagonal is 1.
    Matrix q_hat() const;

    // p_hat_j = p_j + sum_{i != j} q_hat(i, j) p_i.
    std::vector<double> p_hat(std::span<const double> p) const;

    void write_snapshot(std::ostream& out) const;

private:
    int K_;
    long epoch_ = 1;
    std::vector<long> plays_;
    std::vector<long> covers_;
    std::vector<long> pairs_;
    std::vector<double> sample_sum_;
};

// Exact coverage-weighted probability p_tilde_j = p_j + sum_{i != j} q_ij p_i.
std::vector<double> p_tilde(const ChainInstance& chain, std::span<const double> p);
std::vector<double> p_tilde(const Matrix& coverage, std::span<const double> p);

}  // namespace rwb
