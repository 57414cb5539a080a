#pragma once

#include "rwbandit/feedback.hpp"

#include <vector>

namespace rwb {

// Truncation level xi_t = ceil(3 ln(t+1) / ln(1/rho)) + 1.
long truncation_level(long t, double rho);

// C(n, t) = xi_t sqrt(2 ln(2 K t^2) / n) + rho^xi_t / (1 - rho)^2.
double confidence(long n, long t, int K, double rho);

enum class UcbVariant {
    Trajectory,  // samples from every covering trajectory, N_t^+(v) of them
    Standard,    // only L(P) of epochs where v was played, N_t(v) of them
};

// Optimistic index policy. The first K epochs play every node once in id order.
class TrajectoryUcb {
public:
    TrajectoryUcb(int K, double rho, UcbVariant variant = UcbVariant::Trajectory);

    int size() const { return K_; }
    long epoch() const { return ledger_.epoch(); }
    bool warming_up() const { return ledger_.epoch() <= K_; }

    int select() const;
    void step(const Trajectory& traj);

    // Samples behind the index of v.
    long sample_count(int v) const;
    // Mean of samples clipped to [0, xi_t] for the current epoch.
    double estimate(int v) const;
    // Unclipped sample mean.
    double raw_estimate(int v) const;
    double index(int v) const;
    std::vector<double> indices() const;

    const FeedbackLedger& ledger() const { return ledger_; }
    UcbVariant variant() const { return variant_; }
    double rho() const { return rho_; }

private:
    void retruncate(long level) const;

    int K_;
    double rho_;
    UcbVariant variant_;
    FeedbackLedger ledger_;
    std::vector<std::vector<double>> samples_;
    std::vector<double> raw_sum_;
    // Clipped sums are cached per truncation level; xi_t changes O(log t) times.
    mutable long level_ = -1;
    mutable std::vector<double> clipped_sum_;
};

}  // namespace rwb
