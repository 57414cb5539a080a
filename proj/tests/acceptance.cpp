// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include "oracles.hpp"
#include "support.hpp"

#include "rwbandit/feedback.hpp"
#include "rwbandit/harness.hpp"
#include "rwbandit/lower_bounds.hpp"

#include <fmt/format.h>

#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

using namespace rwb;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& check)
{
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    fmt::print("{} {} [{}] ({:.1f}s)\n", o.pass ? "PASS" : "FAIL", name, o.detail, secs);
    std::fflush(stdout);
}

EdgeLengths random_lengths(int K, Rng& rng)
{
    Matrix l(K, K + 1);
    for (int i = 0; i < K; ++i)
        for (int j = 0; j <= K; ++j)
            l(i, j) = rng.uniform();
    return EdgeLengths(l);
}

// ---- 1. exact constants ----

Outcome gap_ratio()
{
    const double r = two_node_gap(1e-4) / 1e-4;
    return {std::abs(r - 64.0 / 15.0) <= 1e-3, fmt::format("gap/eps = {:.6f}, 64/15 = {:.6f}", r, 64.0 / 15.0)};
}

Outcome kl_ratios()
{
    const double e = 1e-3;
    const double step = per_step_kl(e) / (e * e);
    const auto [d0, d1] = trajectory_kl(e);
    const bool ok = std::abs(step - 7.0 / 3.0) <= 5e-2 && std::abs(d0 / (e * e) - 56.0 / 9.0) <= 5e-2 &&
                    std::abs(d1 / (e * e) - 56.0 / 9.0) <= 5e-2;
    return {ok, fmt::format("step {:.4f} (7/3), trajectory {:.4f} / {:.4f} (56/9 = {:.4f})", step, d0 / (e * e),
                            d1 / (e * e), 56.0 / 9.0)};
}

Outcome knode_gaps()
{
    double worst = 0.0;
    for (int K : {2, 4, 8, 16})
        for (double T : {100.0, 1e4, 1e6}) {
            const KNodeFamily f = make_knode_family(K, T);
            for (int k = 0; k < K; ++k)
                worst = std::max(worst, std::abs(k_node_gap(f, k) - f.eps));
        }
    return {worst <= 1e-10, fmt::format("max |gap - eps| = {:.2e}", worst)};
}

Outcome unit_hitting_times()
{
    const auto fig1 = expected_hitting_times(fig1_chain(0.0));
    const auto ring = expected_hitting_times(exp9_chain());
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        worst = std::max(worst, std::abs(fig1(i) - 8.0 / 3.0));
    for (int i = 0; i < 9; ++i)
        worst = std::max(worst, std::abs(ring(i) - 2.0));
    return {worst <= 1e-10, fmt::format("max deviation {:.2e}", worst)};
}

Outcome b_param_grid()
{
    const std::array<std::tuple<int, long, double, double>, 10> grid{{{1, 10, 0.5, 0.1},
                                                                      {2, 100, 0.5, 0.01},
                                                                      {9, 10000, 0.5, 1e-4},
                                                                      {9, 40000, 0.5, 2.5e-5},
                                                                      {4, 1024, 0.5, 1e-3},
                                                                      {3, 1000, 0.1, 1e-3},
                                                                      {3, 1000, 0.9, 1e-3},
                                                                      {16, 100000, 0.99, 1e-5},
                                                                      {5, 500, 0.625, 1e-6},
                                                                      {2, 1, 0.3, 0.5}}};
    for (const auto& [K, T, rho, eps] : grid) {
        const auto B = b_param(K, T, rho, eps);
        if (!(K * static_cast<double>(T) * tail_bound(rho, B) <= eps))
            return {false, fmt::format("violated at K={} T={} rho={} eps={}", K, T, rho, eps)};
    }
    return {true, "10 grid points"};
}

// ---- 2. property suites ----

Outcome ks_extraction()
{
    const int N = 10000;
    std::uint64_t seed = 500;
    double worst = 1.0;
    for (const auto& chain : {fig1_chain(0.0), support::skew3(), exp9_chain()}) {
        const int K = chain.size();
        Rng lrng(seed++);
        const EdgeLengths l = random_lengths(K, lrng);
        for (int v = 0; v < K; ++v) {
            Rng rng(seed++);
            std::vector<double> direct, extracted;
            while (static_cast<int>(direct.size()) < N)
                direct.push_back(*extract_sample(sample_trajectory(chain, l, v, rng), v));
            while (static_cast<int>(extracted.size()) < N) {
                int start = static_cast<int>(rng.uniform() * (K - 1));
                start += start >= v;
                if (const auto y = extract_sample(sample_trajectory(chain, l, start, rng), v))
                    extracted.push_back(*y);
            }
            worst = std::min(worst, oracle::ks_pvalue(oracle::ks_statistic(direct, extracted), N, N));
        }
    }
    return {worst >= 1e-3, fmt::format("smallest p-value {:.3g}", worst)};
}

Outcome tail_bound_empirical()
{
    const int N = 1000000;
    std::uint64_t seed = 100;
    double worst_ratio = 0.0;
    for (const auto& chain : support::test_chains())
        for (int i = 0; i < chain.size(); ++i) {
            Rng rng(seed++);
            std::array<int, 4> exceed{};
            const std::array<int, 4> Bs{2, 4, 8, 16};
            for (int n = 0; n < N; ++n) {
                const double Z = trajectory_length(sample_trajectory(chain, EdgeLengths::unit(chain.size()), i, rng));
                for (int b = 0; b < 4; ++b)
                    exceed[b] += Z > Bs[b];
            }
            for (int b = 0; b < 4; ++b)
                worst_ratio = std::max(worst_ratio, exceed[b] / double(N) / tail_bound(chain.rho(), Bs[b]));
        }
    return {worst_ratio <= 1.0, fmt::format("max empirical/bound = {:.3f}", worst_ratio)};
}

Outcome coverage_band()
{
    const long t = 1000;
    const double lambda = std::sqrt(2.0 * t * std::log(20.0));
    const int reps = 200;
    std::uint64_t seed = 900;
    double worst = 0.0;
    for (const auto& chain : {fig1_chain(0.0), support::skew3(), exp9_chain()}) {
        const int K = chain.size();
        const Vector alpha = hitting_centrality(chain).per_node;
        std::vector<int> events(K, 0);
        for (int r = 0; r < reps; ++r) {
            Rng rng(seed++);
            FeedbackLedger ledger(K);
            for (long s = 1; s <= t; ++s)
                ledger.record(sample_trajectory(chain, EdgeLengths::unit(K), static_cast<int>(rng.uniform() * K), rng, s));
            for (int v = 0; v < K; ++v) {
                const double n = static_cast<double>(ledger.raw_play_count(v));
                const double np = static_cast<double>(ledger.raw_cover_count(v));
                events[v] += np - n - alpha(v) * (t - n) < -lambda;
            }
        }
        for (int v = 0; v < K; ++v)
            worst = std::max(worst, static_cast<double>(events[v]) / reps);
    }
    return {worst <= 0.10, fmt::format("largest deviation frequency {:.3f} (allowed 0.10)", worst)};
}

Outcome q_hat_band()
{
    const long T = 5000;
    std::uint64_t seed = 4000;
    double worst = 0.0;
    for (const auto& chain : {fig1_chain(0.0), support::skew3(), support::dense4()}) {
        const int K = chain.size();
        const Matrix q = coverage_probs(chain);
        for (int r = 0; r < 20; ++r) {
            Rng rng(seed++);
            FeedbackLedger ledger(K);
            for (long t = 1; t <= T; ++t) {
                ledger.record(sample_trajectory(chain, EdgeLengths::unit(K), static_cast<int>(rng.uniform() * K), rng, t));
                if (t % 50 == 0 && t >= 100) {
                    const double err = (ledger.q_hat() - q).cwiseAbs().maxCoeff();
                    worst = std::max(worst, err * std::sqrt(t) / std::sqrt(std::log(t)));
                }
            }
        }
    }
    return {worst <= 3.0, fmt::format("max |q_hat - q| sqrt(t / log t) = {:.3f} (allowed 3)", worst)};
}

Outcome quick_bound_identity()
{
    double worst = 0.0;
    for (int k = 1; k <= 40; ++k) {
        const double a = k / 40.0;
        const auto g = [a](double x) { return x / (x + (1 - x) * a) - x; };
        worst = std::max(worst, std::abs(oracle::maximize(g, 0.0, 1.0).second - f_curve(a)));
    }
    return {worst <= 1e-9, fmt::format("max deviation {:.2e}", worst)};
}

Outcome shifted_unbiased()
{
    double worst = 0.0;
    for (const auto& chain : {support::skew3(), fig1_chain(0.0), support::dense4()}) {
        const int K = chain.size();
        Matrix lengths = Matrix::Constant(K, K + 1, 0.6);
        lengths.col(K).setLinSpaced(K, 0.1, 0.9);
        const EdgeLengths l(lengths);
        const auto mu = oracle::hitting_times(support::rows(chain.transitions()), support::rows(lengths));
        std::vector<double> p(K);
        for (int i = 0; i < K; ++i)
            p[i] = (i + 1.0) / (K * (K + 1) / 2.0);
        const auto pt = p_tilde(chain, p);
        const double B = 6.0;
        Rng rng(99);
        const int N = 100000;
        std::vector<std::vector<double>> draws(K);
        for (int n = 0; n < N; ++n) {
            const int J = rng.categorical(p);
            const auto z = shifted_estimate(extract_all(sample_trajectory(chain, l, J, rng), K), pt, B, 0.0);
            for (int i = 0; i < K; ++i)
                draws[i].push_back(z[i]);
        }
        for (int i = 0; i < K; ++i) {
            const double se = oracle::stddev(draws[i]) / std::sqrt(N);
            worst = std::max(worst, std::abs(oracle::mean(draws[i]) - (mu[i] - B) / B) / se);
        }
    }
    return {worst <= 4.0, fmt::format("largest deviation {:.2f} standard errors", worst)};
}

// ---- 3. algorithm behaviour ----

const auto seeds10 = seed_range(1, 10);

Outcome fig_sto()
{
    const long T = 20000;
    const FigStoResult r = reproduce_fig_sto(seeds10, T);
    const double per_T = r.regret.mean[T - 1] / T;
    const double per_quarter = r.regret.mean[T / 4 - 1] / (T / 4);
    const double err_T = r.error.mean[T - 1];
    const double err_tenth = r.error.mean[T / 10 - 1];
    const double regret_ratio = per_T / per_quarter, error_ratio = err_T / err_tenth;
    return {regret_ratio < 0.5 && error_ratio < 0.2,
            fmt::format("Reg(T)/T over Reg(T/4)/(T/4) = {:.3f} (need < 0.5); error(T)/error(T/10) = {:.3f} (need < 0.2)",
                        regret_ratio, error_ratio)};
}

Outcome fig_adv()
{
    const long T = 40000;
    const FigAdvResult r = reproduce_fig_adv(seeds10, T);
    std::vector<double> a, b;
    for (const auto& run : r.trajectory_runs)
        a.push_back(run.best_fixed_regret);
    for (const auto& run : r.standard_runs)
        b.push_back(run.best_fixed_regret);
    const double ma = mean_of(a), mb = mean_of(b);
    const double pooled = std::sqrt((stddev_of(a) * stddev_of(a) + stddev_of(b) * stddev_of(b)) / 2);
    const double margin = (mb - ma) / pooled;
    return {mb >= 50 && margin >= 1.0,
            fmt::format("T={} trajectory {:.0f}, standard {:.0f}, margin {:.2f} pooled sd", T, ma, mb, margin)};
}

Outcome sqrt_t_probe()
{
    std::vector<double> xs, ys;
    std::string detail;
    for (double T : {1e2, 1e3, 1e4}) {
        const TwoNodePair pair = make_two_node_pair(minimax_choice(T).eps);
        const LengthProcess unit = LengthProcess::fixed(EdgeLengths::unit(2));
        std::vector<double> sums;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            double total = 0.0;
            for (const ChainInstance* chain : {&pair.base, &pair.swapped}) {
                UcbPolicy policy(2, chain->rho());
                total += run_stochastic(policy, *chain, unit, static_cast<long>(T), seed).final_regret();
            }
            sums.push_back(total);
        }
        const double m = mean_of(sums);
        xs.push_back(std::log(T));
        ys.push_back(std::log(m));
        detail += fmt::format("T={:g}: {:.3g}; ", T, m);
    }
    const double xm = oracle::mean(xs), ym = oracle::mean(ys);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - xm) * (ys[i] - ym);
        sxx += (xs[i] - xm) * (xs[i] - xm);
    }
    const double slope = sxy / sxx;
    return {slope >= 0.35 && slope <= 0.75, detail + fmt::format("slope {:.3f}", slope)};
}

// ---- 4. determinism ----

Outcome determinism()
{
    const auto outputs = [] {
        std::ostringstream out;
        write_fig_adv_csv(out, reproduce_fig_adv(seed_range(1, 3), 2000, 2));
        write_fig_sto_csv(out, reproduce_fig_sto(seed_range(1, 3), 2000, 2));
        const std::vector<double> grid{0.0, 1e-3, 0.1};
        write_lowerbound_report(out, grid, 1e4);
        const ChainInstance chain = exp9_chain();
        UcbPolicy ucb(9, chain.rho());
        write_ucb_csv(out, run_stochastic(ucb, chain, exp_adv_length_process(9), 1000, 7, {true, false}), 9);
        Rng rng(7);
        Exp3Policy exp3(9, default_params(chain, 1000, 1e-3), Exp3Estimator::Shifted);
        write_exp3_csv(out, run_adversarial(exp3, chain, exp_adv_schedule(9, 1000, rng), 1000, 7, {true, false}), 9);
        return out.str();
    };
    const std::string a = outputs(), b = outputs();
    return {a == b, fmt::format("{} bytes compared", a.size())};
}

}  // namespace

int main()
{
    criterion("gap ratio 64/15", gap_ratio);
    criterion("KL ratios 7/3 and 56/9", kl_ratios);
    criterion("K-node gap equals eps", knode_gaps);
    criterion("unit hitting times 8/3 and 2", unit_hitting_times);
    criterion("B postcondition on grid", b_param_grid);
    criterion("extracted samples follow the direct-play law (KS)", ks_extraction);
    criterion("hitting-time tail under rho^B/(1-rho)", tail_bound_empirical);
    criterion("coverage count concentration band", coverage_band);
    criterion("q_hat convergence band", q_hat_band);
    criterion("quick-bound maximum identity", quick_bound_identity);
    criterion("shifted estimator unbiased with true coverage", shifted_unbiased);
    criterion("stochastic figure: regret flattens and error drops", fig_sto);
    criterion("adversarial figure: trajectory estimator beats standard EXP3", fig_adv);
    criterion("sqrt(T) hardness probe slope", sqrt_t_probe);
    criterion("fixed seeds give identical output", determinism);
    fmt::print("{} criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
