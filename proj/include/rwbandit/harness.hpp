#pragma once

#include "rwbandit/exp3.hpp"
#include "rwbandit/markov.hpp"
#include "rwbandit/trajectory.hpp"
#include "rwbandit/ucb.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rwb {

// A bandit policy as seen by the harness.
class Policy {
public:
    virtual ~Policy() = default;

    virtual std::string name() const = 0;
    virtual int choose(Rng& rng) = 0;
    virtual void observe(const Trajectory& traj) = 0;

    // Per-epoch diagnostics: what the choice was based on (indices, p_t) and
    // what the observation produced (estimates). Empty by default.
    virtual std::vector<double> pre_play() const { return {}; }
    virtual std::vector<double> post_play() const { return {}; }
    // Current hitting-time estimates, if the policy keeps any.
    virtual std::optional<std::vector<double>> estimates() const { return std::nullopt; }
};

class UcbPolicy final : public Policy {
public:
    UcbPolicy(int K, double rho, UcbVariant variant = UcbVariant::Trajectory);

    std::string name() const override;
    int choose(Rng& rng) override;
    void observe(const Trajectory& traj) override;
    std::vector<double> pre_play() const override { return last_indices_; }
    std::vector<double> post_play() const override;
    std::optional<std::vector<double>> estimates() const override;

    const TrajectoryUcb& state() const { return ucb_; }

private:
    TrajectoryUcb ucb_;
    std::vector<double> last_indices_;
};

class Exp3Policy final : public Policy {
public:
    Exp3Policy(int K, Exp3Params params, Exp3Estimator estimator);

    std::string name() const override;
    int choose(Rng& rng) override;
    void observe(const Trajectory& traj) override;
    std::vector<double> pre_play() const override { return last_probs_; }
    std::vector<double> post_play() const override { return last_estimates_; }

    const TrajectoryExp3& state() const { return exp3_; }

private:
    TrajectoryExp3 exp3_;
    std::vector<double> last_probs_;
    std::vector<double> last_estimates_;
};

// Always plays the same node.
class FixedPolicy final : public Policy {
public:
    explicit FixedPolicy(int node) : node_(node) {}
    std::string name() const override { return "fixed"; }
    int choose(Rng&) override { return node_; }
    void observe(const Trajectory&) override {}

private:
    int node_;
};

class UniformPolicy final : public Policy {
public:
    explicit UniformPolicy(int K) : K_(K) {}
    std::string name() const override { return "uniform"; }
    int choose(Rng& rng) override;
    void observe(const Trajectory&) override {}

private:
    int K_;
};

struct EpochRecord {
    long t = 0;
    int played = 0;
    int steps = 0;
    double length = 0.0;           // realized L(P_t)
    double expected_played = 0.0;  // mu_{J_t} or l_{t,J_t}
    double regret = 0.0;           // cumulative, exact definitional quantity
    double realized_regret = 0.0;  // cumulative, realized lengths in place of l_{t,J_t}
    double estimate_error = 0.0;   // max_v |estimate_v - mu_v|, NaN without estimates
    std::vector<double> pre_play;
    std::vector<double> post_play;
    std::optional<Trajectory> trajectory;
};

struct RunRecord {
    std::string policy;
    std::uint64_t seed = 0;
    long T = 0;
    bool adversarial = false;
    std::vector<EpochRecord> epochs;
    Vector expected;              // mu (stochastic) or sum_t l_{t,.} (adversarial)
    Vector regret_vs_node;        // adversarial: Regadv_i(T) for every i
    double best_fixed_regret = 0.0;
    std::vector<double> final_errors;
    double wall_seconds = 0.0;    // never written to CSV

    double final_regret() const { return epochs.empty() ? 0.0 : epochs.back().regret; }
};

struct RunOptions {
    bool keep_diagnostics = false;
    bool keep_trajectories = false;
};

// Regret increments mu* - mu_{J_t}, mu from the expected lengths of the process.
RunRecord run_stochastic(Policy& policy, const ChainInstance& chain, const LengthProcess& lengths, long T,
                         std::uint64_t seed, const RunOptions& options = {});

// schedule must be a Schedule-kind process with exactly T epochs.
RunRecord run_adversarial(Policy& policy, const ChainInstance& chain, const LengthProcess& schedule, long T,
                          std::uint64_t seed, const RunOptions& options = {});

// Recomputes the cumulative stochastic regret from the logged J_t sequence.
std::vector<double> replay_stochastic_regret(const RunRecord& record, const ChainInstance& chain,
                                             const LengthProcess& lengths);

// Runs fn(seed) for every seed on up to `workers` threads; results keep seed order.
std::vector<RunRecord> fan_out(const std::vector<std::uint64_t>& seeds, int workers,
                               const std::function<RunRecord(std::uint64_t)>& fn);

struct Curve {
    std::vector<double> mean;
    std::vector<double> stddev;  // sample standard deviation across runs
};

Curve aggregate(const std::vector<RunRecord>& runs, const std::function<double(const EpochRecord&)>& field);

double mean_of(const std::vector<double>& xs);
double stddev_of(const std::vector<double>& xs);

// Builtin instances.
ChainInstance fig1_chain(double eps = 0.0);
// m_ii = 0.3, m_{i,i+-1 mod K} = 0.1.
ChainInstance exp9_chain(int K = 9);

inline constexpr double kFigAdvLearningRate = 0.001;

struct FigAdvResult {
    long T = 0;
    std::vector<RunRecord> trajectory_runs;
    std::vector<RunRecord> standard_runs;
    Curve trajectory_curve;
    Curve standard_curve;
};

FigAdvResult reproduce_fig_adv(const std::vector<std::uint64_t>& seeds, long T, int workers = 1);
void write_fig_adv_csv(std::ostream& out, const FigAdvResult& result);

struct FigStoResult {
    long T = 0;
    std::vector<RunRecord> runs;
    Curve regret;
    Curve error;
};

FigStoResult reproduce_fig_sto(const std::vector<std::uint64_t>& seeds, long T, int workers = 1);
void write_fig_sto_csv(std::ostream& out, const FigStoResult& result);

// Per-epoch CSVs of single runs.
void write_ucb_csv(std::ostream& out, const RunRecord& record, int K);
void write_exp3_csv(std::ostream& out, const RunRecord& record, int K);

std::vector<std::uint64_t> seed_range(std::uint64_t first, int count);

}  // namespace rwb
