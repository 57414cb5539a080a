#include "oracles.hpp"
#include "support.hpp"

#include "rwbandit/harness.hpp"
#include "rwbandit/lower_bounds.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace rwb;

namespace {

std::vector<double> csv_column(const std::string& text, int col)
{
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::vector<double> out;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string cell;
        for (int c = 0; c <= col; ++c)
            std::getline(row, cell, ',');
        out.push_back(std::stod(cell));
    }
    return out;
}

std::vector<double> moving_average(const std::vector<double>& xs, std::size_t w)
{
    std::vector<double> out;
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s += xs[i];
        if (i >= w)
            s -= xs[i - w];
        if (i + 1 >= w)
            out.push_back(s / w);
    }
    return out;
}

}  // namespace

TEST_SUITE("experiment_harness")
{

TEST_CASE("stochastic regret of simple policies")
{
    const ChainInstance chain = fig1_chain(0.1);
    const LengthProcess unit = LengthProcess::fixed(EdgeLengths::unit(2));
    const auto mu = oracle::hitting_times(support::rows(chain.transitions()), oracle::unit_lengths(2));
    const int best = mu[1] > mu[0] ? 1 : 0;

    FixedPolicy oracle_policy(best);
    const RunRecord rec = run_stochastic(oracle_policy, chain, unit, 1000, 1);
    CHECK(rec.final_regret() == 0.0);

    // Uniform play loses half the gap per epoch in expectation.
    const long T = 1000;
    const double gap = two_node_gap(0.1);
    std::vector<double> finals;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        UniformPolicy uniform(2);
        finals.push_back(run_stochastic(uniform, chain, unit, T, seed).final_regret());
    }
    const double se = oracle::stddev(finals) / std::sqrt(50.0);
    CHECK(std::abs(oracle::mean(finals) - T * gap / 2) <= 4 * se);

    const ChainInstance one(Matrix::Constant(1, 1, 0.3));
    UcbPolicy solo(1, one.rho());
    const RunRecord r1 = run_stochastic(solo, one, LengthProcess::fixed(EdgeLengths::unit(1)), 200, 3);
    for (const auto& e : r1.epochs)
        CHECK(e.regret == 0.0);
}

TEST_CASE("regret series is monotone in t and replays exactly")
{
    const ChainInstance chain = exp9_chain();
    const LengthProcess lengths = exp_adv_length_process(9);
    UcbPolicy policy(9, chain.rho());
    const RunRecord rec = run_stochastic(policy, chain, lengths, 2000, 21);
    const auto replay = replay_stochastic_regret(rec, chain, lengths);
    REQUIRE(replay.size() == rec.epochs.size());
    for (std::size_t i = 0; i < replay.size(); ++i) {
        CHECK(rec.epochs[i].t == static_cast<long>(i + 1));
        CHECK(replay[i] == rec.epochs[i].regret);
        if (i > 0)
            CHECK(rec.epochs[i].regret >= rec.epochs[i - 1].regret);
    }
}

TEST_CASE("constant schedule reduces to the stochastic run")
{
    const ChainInstance chain = support::skew3();
    Matrix l(3, 4);
    l << 0.2, 0.9, 0.5, 1.0,
         0.7, 0.1, 0.3, 0.6,
         0.4, 0.8, 0.9, 0.2;
    const EdgeLengths lengths(l);
    const long T = 500;
    const LengthProcess sched = LengthProcess::schedule(std::vector<EdgeLengths>(T, lengths));
    const Exp3Params params = default_params(chain, T, 1.0 / T);
    Exp3Policy a(3, params, Exp3Estimator::Shifted), b(3, params, Exp3Estimator::Shifted);
    const RunRecord adv = run_adversarial(a, chain, sched, T, 8);
    const RunRecord sto = run_stochastic(b, chain, LengthProcess::fixed(lengths), T, 8);
    REQUIRE(adv.epochs.size() == sto.epochs.size());
    for (long t = 0; t < T; ++t)
        CHECK(adv.epochs[t].played == sto.epochs[t].played);
    for (int i = 0; i < 3; ++i)
        CHECK(adv.regret_vs_node(i) == doctest::Approx(sto.regret_vs_node(i)).epsilon(1e-9));
    CHECK(adv.best_fixed_regret == doctest::Approx(sto.final_regret()).epsilon(1e-9));
}

TEST_CASE("adversarial accounting")
{
    const ChainInstance chain = exp9_chain();
    Rng rng(5);
    const long T = 300;
    const LengthProcess sched = exp_adv_schedule(9, T, rng);
    Exp3Policy policy(9, Exp3Params{kFigAdvLearningRate, 0.0, 1.0}, Exp3Estimator::Standard);
    const RunRecord rec = run_adversarial(policy, chain, sched, T, 4);
    for (int i = 0; i < 9; ++i)
        CHECK(rec.best_fixed_regret >= rec.regret_vs_node(i));
    CHECK(rec.final_regret() == doctest::Approx(rec.best_fixed_regret).epsilon(1e-12));

    // Per-epoch values from the reused factorisation against fresh solves.
    const auto m = support::rows(chain.transitions());
    for (long t : {1L, 2L, 77L, 150L, 300L}) {
        const auto l = oracle::hitting_times(m, support::rows(sched.expected(t).matrix()));
        const EpochRecord& e = rec.epochs[t - 1];
        CHECK(std::abs(e.expected_played - l[e.played]) <= 1e-10);
    }

    CHECK_THROWS_AS(run_adversarial(policy, chain, exp_adv_schedule(9, T - 1, rng), T, 4), std::invalid_argument);
    CHECK_THROWS_AS(run_adversarial(policy, chain, exp_adv_length_process(9), T, 4), std::invalid_argument);
    CHECK_THROWS_AS(run_stochastic(policy, chain, sched, T, 4), std::invalid_argument);
}

TEST_CASE("node 0 is the best fixed node of the ring experiment")
{
    const ChainInstance chain = exp9_chain();
    Matrix mean = Matrix::Ones(9, 10);
    mean(0, 9) = oracle::clipped_gaussian_mean(1.0, 0.1);
    for (int i = 1; i < 9; ++i)
        mean(i, 9) = oracle::clipped_gaussian_mean(0.5, 0.1);
    const auto l = oracle::hitting_times(support::rows(chain.transitions()), support::rows(mean));
    for (int i = 1; i < 9; ++i)
        CHECK(l[0] > l[i]);

    const Vector mine = expected_hitting_times(chain, exp_adv_length_process(9).expected(1));
    for (int i = 0; i < 9; ++i)
        CHECK(mine(i) == doctest::Approx(l[i]).epsilon(1e-9));
}

TEST_CASE("fan-out keeps seed order and aggregates")
{
    const ChainInstance chain = fig1_chain(0.1);
    const LengthProcess unit = LengthProcess::fixed(EdgeLengths::unit(2));
    const auto job = [&](std::uint64_t seed) {
        UniformPolicy p(2);
        return run_stochastic(p, chain, unit, 100, seed);
    };
    const auto seeds = seed_range(3, 6);
    CHECK(seeds == std::vector<std::uint64_t>{3, 4, 5, 6, 7, 8});
    const auto serial = fan_out(seeds, 1, job);
    const auto parallel = fan_out(seeds, 4, job);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        CHECK(parallel[i].seed == seeds[i]);
        CHECK(parallel[i].final_regret() == serial[i].final_regret());
    }

    const Curve c = aggregate(serial, [](const EpochRecord& e) { return e.regret; });
    REQUIRE(c.mean.size() == 100);
    std::vector<double> last;
    for (const auto& r : serial)
        last.push_back(r.final_regret());
    CHECK(c.mean.back() == doctest::Approx(oracle::mean(last)).epsilon(1e-12));
    CHECK(c.stddev.back() == doctest::Approx(oracle::stddev(last)).epsilon(1e-12));
    CHECK(stddev_of({1.0, 2.0, 3.0, 4.0}) == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(stddev_of({2.0}) == 0.0);

    CHECK_THROWS(fan_out(seeds, 2, [](std::uint64_t s) -> RunRecord {
        if (s == 5)
            throw std::runtime_error("boom");
        return RunRecord{};
    }));
}

TEST_CASE("adversarial figure output")
{
    const long T = 1500;
    const auto seeds = seed_range(1, 3);
    const FigAdvResult res = reproduce_fig_adv(seeds, T);
    std::ostringstream a;
    write_fig_adv_csv(a, res);
    const std::string text = a.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == T + 1);
    CHECK(text.substr(0, text.find('\n')) == "t,trajectory_mean,trajectory_std,standard_mean,standard_std");

    for (int col : {1, 3}) {
        const auto smooth = moving_average(csv_column(text, col), 100);
        // Smoothed cumulative regret against the best fixed node trends upward.
        CHECK(smooth.back() > smooth.front());
        int drops = 0;
        for (std::size_t i = 100; i < smooth.size(); i += 100)
            drops += smooth[i] < smooth[i - 100];
        CHECK(drops <= 1);
    }

    std::ostringstream b;
    write_fig_adv_csv(b, reproduce_fig_adv(seeds, T, 2));
    CHECK(b.str() == text);
}

TEST_CASE("stochastic figure output")
{
    const long T = 4000;
    const FigStoResult res = reproduce_fig_sto(seed_range(1, 4), T);
    REQUIRE(res.error.mean.size() == static_cast<std::size_t>(T));
    CHECK(std::isfinite(res.error.mean[8]));
    CHECK(res.error.mean[T - 1] <= res.error.mean[T / 10 - 1]);
    for (std::size_t i = 1; i < res.regret.mean.size(); ++i)
        CHECK(res.regret.mean[i] >= res.regret.mean[i - 1]);

    std::ostringstream a, b;
    write_fig_sto_csv(a, res);
    write_fig_sto_csv(b, reproduce_fig_sto(seed_range(1, 4), T));
    CHECK(a.str() == b.str());
}

}  // TEST_SUITE
