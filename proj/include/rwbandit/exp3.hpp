#pragma once

#include "rwbandit/feedback.hpp"
#include "rwbandit/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rwb {

struct Exp3Params {
    double eta = 0.0;          // learning rate
    double beta = 0.0;         // implicit exploration
    double B = 1.0;            // shift / truncation level
    double eps_prob = 0.0;     // failure probability behind B
    bool beta_exceeds_alpha = false;
};

// B = b_param(K, T, rho, eps_prob), eta = beta = 1 / sqrt(kappa T).
// Throws std::invalid_argument if eps_prob > 1/T.
Exp3Params default_params(const ChainInstance& chain, std::int64_t T, double eps_prob);

enum class Exp3Estimator {
    Shifted,    // ((Z - B)/B 1[i in P] + beta) / p_hat_i
    Covered,    // Z 1[i in P] / p_hat_i
    Standard,   // Z 1[i = J] / p_i
};

// exp(eta S_i) / sum_j exp(eta S_j), max-subtracted.
std::vector<double> softmax(std::span<const double> scores, double eta);

// The shifted estimator with an arbitrary coverage-weighted denominator
// (p_hat from the ledger, or p_tilde from the true chain).
std::vector<double> shifted_estimate(const Coverage& cov, std::span<const double> denominators, double B,
                                     double beta);

class TrajectoryExp3 {
public:
    TrajectoryExp3(int K, Exp3Params params, Exp3Estimator estimator = Exp3Estimator::Shifted);

    int size() const { return K_; }
    long epoch() const { return ledger_.epoch(); }

    // p_t; uniform at t = 1.
    std::vector<double> probs() const;
    int sample(Rng& rng) const;

    // Z_hat_t for the epoch-t trajectory, computed from p_t and q_hat of epochs < t.
    std::vector<double> loss_estimate(const Trajectory& traj) const;

    // Accumulates Z_hat into every S_hat_j and records the trajectory.
    // Returns the estimates used.
    std::vector<double> update(const Trajectory& traj);

    const std::vector<double>& scores() const { return scores_; }
    const FeedbackLedger& ledger() const { return ledger_; }
    const Exp3Params& params() const { return params_; }
    Exp3Estimator estimator() const { return estimator_; }
    // Number of S_hat entries touched by the last update.
    int last_touched() const { return last_touched_; }

private:
    int K_;
    Exp3Params params_;
    Exp3Estimator estimator_;
    FeedbackLedger ledger_;
    std::vector<double> scores_;
    int last_touched_ = 0;
};

}  // namespace rwb
