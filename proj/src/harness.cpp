#include "rwbandit/harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

namespace rwb {

UcbPolicy::UcbPolicy(int K, double rho, UcbVariant variant) : ucb_(K, rho, variant) {}

std::string UcbPolicy::name() const
{
    return ucb_.variant() == UcbVariant::Trajectory ? "ucb-trajectory" : "ucb-standard";
}

int UcbPolicy::choose(Rng&)
{
    last_indices_ = ucb_.warming_up() ? std::vector<double>(ucb_.size(), std::nan("")) : ucb_.indices();
    return ucb_.select();
}

void UcbPolicy::observe(const Trajectory& traj)
{
    ucb_.step(traj);
}

std::vector<double> UcbPolicy::post_play() const
{
    std::vector<double> z(ucb_.size());
    for (int v = 0; v < ucb_.size(); ++v)
        z[v] = ucb_.estimate(v);
    return z;
}

std::optional<std::vector<double>> UcbPolicy::estimates() const
{
    std::vector<double> z(ucb_.size());
    for (int v = 0; v < ucb_.size(); ++v)
        z[v] = ucb_.raw_estimate(v);
    return z;
}

Exp3Policy::Exp3Policy(int K, Exp3Params params, Exp3Estimator estimator) : exp3_(K, params, estimator) {}

std::string Exp3Policy::name() const
{
    switch (exp3_.estimator()) {
    case Exp3Estimator::Shifted:
        return "exp3-trajectory";
    case Exp3Estimator::Covered:
        return "exp3-trajectory-covered";
    case Exp3Estimator::Standard:
        break;
    }
    return "exp3-standard";
}

int Exp3Policy::choose(Rng& rng)
{
    last_probs_ = exp3_.probs();
    return rng.categorical(last_probs_);
}

void Exp3Policy::observe(const Trajectory& traj)
{
    last_estimates_ = exp3_.update(traj);
}

int UniformPolicy::choose(Rng& rng)
{
    return std::min(K_ - 1, static_cast<int>(rng.uniform() * K_));
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void fill_diagnostics(EpochRecord& row, const Policy& policy, const Trajectory& traj, const RunOptions& options)
{
    if (options.keep_diagnostics) {
        row.pre_play = policy.pre_play();
        row.post_play = policy.post_play();
    }
    if (options.keep_trajectories)
        row.trajectory = traj;
}

}  // namespace

RunRecord run_stochastic(Policy& policy, const ChainInstance& chain, const LengthProcess& lengths, long T,
                         std::uint64_t seed, const RunOptions& options)
{
    if (lengths.kind() == LengthProcess::Kind::Schedule)
        throw std::invalid_argument("stochastic runs need fixed or i.i.d. lengths; use run_adversarial");
    if (lengths.size() != chain.size())
        throw std::invalid_argument("length process does not match the chain size");
    const auto start = Clock::now();
    const int K = chain.size();

    RunRecord rec;
    rec.policy = policy.name();
    rec.seed = seed;
    rec.T = T;
    rec.expected = expected_hitting_times(chain, lengths.expected(1));
    const double best = rec.expected.maxCoeff();

    Rng policy_rng = Rng::stream(seed, 0, Stream::Policy);
    Rng walk_rng = Rng::stream(seed, 0, Stream::Walk);
    Rng length_rng = Rng::stream(seed, 0, Stream::Lengths);

    rec.epochs.reserve(static_cast<std::size_t>(T));
    double regret = 0.0;
    double realized = 0.0;
    for (long t = 1; t <= T; ++t) {
        const int J = policy.choose(policy_rng);
        const EdgeLengths realized_lengths = lengths.realize(t, length_rng);
        Trajectory traj = sample_trajectory(chain, realized_lengths, J, walk_rng, t);
        policy.observe(traj);

        EpochRecord row;
        row.t = t;
        row.played = J;
        row.steps = traj.steps();
        row.length = trajectory_length(traj);
        row.expected_played = rec.expected(J);
        regret += best - rec.expected(J);
        realized += best - row.length;
        row.regret = regret;
        row.realized_regret = realized;
        row.estimate_error = std::nan("");
        if (const auto est = policy.estimates()) {
            double err = 0.0;
            for (int v = 0; v < K; ++v)
                err = std::max(err, std::abs((*est)[v] - rec.expected(v)));
            row.estimate_error = err;
        }
        fill_diagnostics(row, policy, traj, options);
        rec.epochs.push_back(std::move(row));
    }

    if (const auto est = policy.estimates()) {
        rec.final_errors.resize(K);
        for (int v = 0; v < K; ++v)
            rec.final_errors[v] = std::abs((*est)[v] - rec.expected(v));
    }
    rec.regret_vs_node = Vector::Constant(K, regret) - (best - rec.expected.array()).matrix() * static_cast<double>(T);
    rec.best_fixed_regret = regret;
    rec.wall_seconds = seconds_since(start);
    return rec;
}

RunRecord run_adversarial(Policy& policy, const ChainInstance& chain, const LengthProcess& schedule, long T,
                          std::uint64_t seed, const RunOptions& options)
{
    if (schedule.kind() != LengthProcess::Kind::Schedule)
        throw std::invalid_argument("adversarial runs need a schedule fixed before the run");
    if (schedule.horizon() != T)
        throw std::invalid_argument(fmt::format("schedule has {} epochs, run needs {}", schedule.horizon(), T));
    if (schedule.size() != chain.size())
        throw std::invalid_argument("schedule does not match the chain size");
    const auto start = Clock::now();
    const int K = chain.size();
    const HittingTimeSolver solver(chain);

    RunRecord rec;
    rec.policy = policy.name();
    rec.seed = seed;
    rec.T = T;
    rec.adversarial = true;
    rec.expected = Vector::Zero(K);

    Rng policy_rng = Rng::stream(seed, 0, Stream::Policy);
    Rng walk_rng = Rng::stream(seed, 0, Stream::Walk);

    rec.epochs.reserve(static_cast<std::size_t>(T));
    double collected = 0.0;
    double realized = 0.0;
    for (long t = 1; t <= T; ++t) {
        const EdgeLengths& lengths = schedule.expected(t);
        const Vector l = solver.hitting_times(lengths);
        const int J = policy.choose(policy_rng);
        Trajectory traj = sample_trajectory(chain, lengths, J, walk_rng, t);
        policy.observe(traj);

        rec.expected += l;
        collected += l(J);
        EpochRecord row;
        row.t = t;
        row.played = J;
        row.steps = traj.steps();
        row.length = trajectory_length(traj);
        realized += row.length;
        row.expected_played = l(J);
        row.regret = rec.expected.maxCoeff() - collected;
        row.realized_regret = rec.expected.maxCoeff() - realized;
        row.estimate_error = std::nan("");
        fill_diagnostics(row, policy, traj, options);
        rec.epochs.push_back(std::move(row));
    }
    rec.regret_vs_node = rec.expected.array() - collected;
    rec.best_fixed_regret = rec.regret_vs_node.maxCoeff();
    rec.wall_seconds = seconds_since(start);
    return rec;
}

std::vector<double> replay_stochastic_regret(const RunRecord& record, const ChainInstance& chain,
                                             const LengthProcess& lengths)
{
    const Vector mu = expected_hitting_times(chain, lengths.expected(1));
    const double best = mu.maxCoeff();
    std::vector<double> out;
    out.reserve(record.epochs.size());
    double regret = 0.0;
    for (const auto& row : record.epochs) {
        regret += best - mu(row.played);
        out.push_back(regret);
    }
    return out;
}

std::vector<RunRecord> fan_out(const std::vector<std::uint64_t>& seeds, int workers,
                               const std::function<RunRecord(std::uint64_t)>& fn)
{
    std::vector<RunRecord> out(seeds.size());
    const int n = std::clamp(workers, 1, std::max(1, static_cast<int>(seeds.size())));
    if (n == 1) {
        for (std::size_t i = 0; i < seeds.size(); ++i)
            out[i] = fn(seeds[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(seeds.size());
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (int w = 0; w < n; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < seeds.size(); i = next++) {
                try {
                    out[i] = fn(seeds[i]);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

double mean_of(const std::vector<double>& xs)
{
    if (xs.empty())
        return std::nan("");
    double s = 0.0;
    for (double x : xs)
        s += x;
    return s / static_cast<double>(xs.size());
}

double stddev_of(const std::vector<double>& xs)
{
    if (xs.size() < 2)
        return 0.0;
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs)
        s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

Curve aggregate(const std::vector<RunRecord>& runs, const std::function<double(const EpochRecord&)>& field)
{
    Curve c;
    if (runs.empty())
        return c;
    std::size_t n = runs.front().epochs.size();
    for (const auto& r : runs)
        n = std::min(n, r.epochs.size());
    c.mean.resize(n);
    c.stddev.resize(n);
    std::vector<double> column(runs.size());
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t r = 0; r < runs.size(); ++r)
            column[r] = field(runs[r].epochs[t]);
        c.mean[t] = mean_of(column);
        c.stddev[t] = stddev_of(column);
    }
    return c;
}

ChainInstance fig1_chain(double eps)
{
    Matrix m(2, 2);
    m << 0.5, 0.125, 0.125, 0.5 + eps;
    return ChainInstance(std::move(m));
}

ChainInstance exp9_chain(int K)
{
    if (K < 3)
        throw std::invalid_argument("the ring instance needs K >= 3");
    Matrix m = Matrix::Zero(K, K);
    for (int i = 0; i < K; ++i) {
        m(i, i) = 0.3;
        m(i, (i + 1) % K) = 0.1;
        m(i, (i + K - 1) % K) = 0.1;
    }
    return ChainInstance(std::move(m));
}

FigAdvResult reproduce_fig_adv(const std::vector<std::uint64_t>& seeds, long T, int workers)
{
    const ChainInstance chain = exp9_chain();
    const int K = chain.size();
    Exp3Params params;
    params.eta = kFigAdvLearningRate;
    params.beta = 0.0;
    params.B = 1.0;

    FigAdvResult res;
    res.T = T;
    const auto schedule_for = [&](std::uint64_t seed) {
        Rng rng = Rng::stream(seed, 0, Stream::Schedule);
        return exp_adv_schedule(K, T, rng);
    };
    res.trajectory_runs = fan_out(seeds, workers, [&](std::uint64_t seed) {
        Exp3Policy policy(K, params, Exp3Estimator::Covered);
        return run_adversarial(policy, chain, schedule_for(seed), T, seed);
    });
    res.standard_runs = fan_out(seeds, workers, [&](std::uint64_t seed) {
        Exp3Policy policy(K, params, Exp3Estimator::Standard);
        return run_adversarial(policy, chain, schedule_for(seed), T, seed);
    });
    const auto regret = [](const EpochRecord& e) { return e.regret; };
    res.trajectory_curve = aggregate(res.trajectory_runs, regret);
    res.standard_curve = aggregate(res.standard_runs, regret);
    return res;
}

void write_fig_adv_csv(std::ostream& out, const FigAdvResult& result)
{
    out << "t,trajectory_mean,trajectory_std,standard_mean,standard_std\n";
    for (std::size_t i = 0; i < result.trajectory_curve.mean.size(); ++i)
        out << fmt::format("{},{},{},{},{}\n", i + 1, result.trajectory_curve.mean[i], result.trajectory_curve.stddev[i],
                           result.standard_curve.mean[i], result.standard_curve.stddev[i]);
}

FigStoResult reproduce_fig_sto(const std::vector<std::uint64_t>& seeds, long T, int workers)
{
    const ChainInstance chain = exp9_chain();
    const LengthProcess lengths = exp_adv_length_process(chain.size());
    FigStoResult res;
    res.T = T;
    res.runs = fan_out(seeds, workers, [&](std::uint64_t seed) {
        UcbPolicy policy(chain.size(), chain.rho(), UcbVariant::Trajectory);
        return run_stochastic(policy, chain, lengths, T, seed);
    });
    res.regret = aggregate(res.runs, [](const EpochRecord& e) { return e.regret; });
    res.error = aggregate(res.runs, [](const EpochRecord& e) { return e.estimate_error; });
    return res;
}

void write_fig_sto_csv(std::ostream& out, const FigStoResult& result)
{
    out << "t,regret_mean,regret_std,error_mean,error_std\n";
    for (std::size_t i = 0; i < result.regret.mean.size(); ++i)
        out << fmt::format("{},{},{},{},{}\n", i + 1, result.regret.mean[i], result.regret.stddev[i],
                           result.error.mean[i], result.error.stddev[i]);
}

namespace {

void write_vector_header(std::ostream& out, const char* prefix, int K)
{
    for (int v = 0; v < K; ++v)
        out << ',' << prefix << v;
}

void write_vector(std::ostream& out, const std::vector<double>& xs, int K)
{
    for (int v = 0; v < K; ++v)
        out << ',' << (v < static_cast<int>(xs.size()) ? fmt::format("{}", xs[v]) : std::string());
}

}  // namespace

void write_ucb_csv(std::ostream& out, const RunRecord& record, int K)
{
    out << "t,J_t";
    write_vector_header(out, "index_", K);
    write_vector_header(out, "z_", K);
    out << ",regret\n";
    for (const auto& row : record.epochs) {
        out << row.t << ',' << row.played;
        write_vector(out, row.pre_play, K);
        write_vector(out, row.post_play, K);
        out << ',' << fmt::format("{}", row.regret) << '\n';
    }
}

void write_exp3_csv(std::ostream& out, const RunRecord& record, int K)
{
    out << "t,J_t";
    write_vector_header(out, "p_", K);
    write_vector_header(out, "zhat_", K);
    out << ",regret\n";
    for (const auto& row : record.epochs) {
        out << row.t << ',' << row.played;
        write_vector(out, row.pre_play, K);
        write_vector(out, row.post_play, K);
        out << ',' << fmt::format("{}", row.regret) << '\n';
    }
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, int count)
{
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(std::max(0, count)));
    for (std::size_t i = 0; i < seeds.size(); ++i)
        seeds[i] = first + i;
    return seeds;
}

}  // namespace rwb
