#include "rwbandit/rwbandit.h"

#include "rwbandit/config.hpp"
#include "rwbandit/harness.hpp"
#include "rwbandit/lower_bounds.hpp"
#include "rwbandit/plot.hpp"

#include <fmt/format.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

struct rwb_chain {
    rwb::ChainInstance chain;
};

struct rwb_config {
    rwb::ExperimentConfig config;
};

namespace {

thread_local std::string last_error;

rwb_status fail(rwb_status status, std::string message)
{
    last_error = std::move(message);
    return status;
}

// Maps library exceptions onto status codes.
template <typename F>
rwb_status guarded(F&& body)
{
    try {
        last_error.clear();
        return body();
    } catch (const rwb::InvalidInstance& e) {
        return fail(RWB_ERR_INVALID_INSTANCE, e.what());
    } catch (const rwb::ConfigError& e) {
        return fail(RWB_ERR_CONFIG, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(RWB_ERR_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(RWB_ERR_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(RWB_ERR_ARGUMENT, e.what());
    } catch (const std::ios_base::failure& e) {
        return fail(RWB_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(RWB_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(RWB_ERR_INTERNAL, "unknown error");
    }
}

rwb_validation to_c(const rwb::ValidationReport& r)
{
    rwb_validation v;
    v.ok = r.ok() ? 1 : 0;
    v.nonnegative = r.nonnegative ? 1 : 0;
    v.norm_ok = r.norm_ok ? 1 : 0;
    v.primitive = r.primitive ? 1 : 0;
    v.primitivity_waived = r.primitivity_waived ? 1 : 0;
    v.inf_norm = r.inf_norm;
    v.rho = r.rho;
    return v;
}

std::string joined_failures(const rwb::ValidationReport& r)
{
    std::string msg;
    for (const auto& f : r.failures)
        msg += (msg.empty() ? "" : "; ") + f;
    return msg;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw rwb::ConfigError(fmt::format("cannot write '{}'", path.string()));
    out << text;
}

std::filesystem::path ensure_dir(const char* dir)
{
    std::filesystem::path p = dir && *dir ? dir : ".";
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec)
        throw rwb::ConfigError(fmt::format("cannot create output directory '{}': {}", p.string(), ec.message()));
    return p;
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<rwb::RunRecord>& runs)
{
    const rwb::Curve c = rwb::aggregate(runs, [](const rwb::EpochRecord& e) { return e.regret; });
    std::ostringstream out;
    out << "t,regret_mean,regret_std\n";
    for (std::size_t i = 0; i < c.mean.size(); ++i)
        out << fmt::format("{},{},{}\n", i + 1, c.mean[i], c.stddev[i]);
    write_file(path, out.str());
}

void fill_summary(rwb_run_summary* summary, const std::vector<rwb::RunRecord>& runs)
{
    if (!summary)
        return;
    std::vector<double> finals;
    for (const auto& r : runs)
        finals.push_back(r.final_regret());
    summary->runs = static_cast<int>(runs.size());
    summary->epochs = runs.empty() ? 0 : runs.front().T;
    summary->final_regret_mean = rwb::mean_of(finals);
    summary->final_regret_std = rwb::stddev_of(finals);
}

}  // namespace

extern "C" {

const char* rwb_last_error(void)
{
    return last_error.c_str();
}

const char* rwb_version(void)
{
    return "0.1.0";
}

rwb_status rwb_chain_create(int K, const double* M, double rho, int allow_non_primitive, rwb_chain** out)
{
    return guarded([&] {
        if (!out || !M || K < 1)
            return fail(RWB_ERR_ARGUMENT, "rwb_chain_create: null pointer or K < 1");
        rwb::Matrix m(K, K);
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < K; ++j)
                m(i, j) = M[i * K + j];
        *out = new rwb_chain{rwb::ChainInstance(std::move(m), rho, allow_non_primitive != 0)};
        return RWB_OK;
    });
}

rwb_status rwb_chain_from_json(const char* text, rwb_chain** out)
{
    return guarded([&] {
        if (!text || !out)
            return fail(RWB_ERR_ARGUMENT, "rwb_chain_from_json: null pointer");
        *out = new rwb_chain{rwb::chain_from_json(text)};
        return RWB_OK;
    });
}

rwb_status rwb_chain_load(const char* path, rwb_chain** out)
{
    return guarded([&] {
        if (!path || !out)
            return fail(RWB_ERR_ARGUMENT, "rwb_chain_load: null pointer");
        *out = new rwb_chain{rwb::chain_from_json(rwb::read_text_file(path))};
        return RWB_OK;
    });
}

rwb_status rwb_chain_builtin(const char* name, double eps, int K, long long T, rwb_chain** out)
{
    return guarded([&] {
        if (!name || !out)
            return fail(RWB_ERR_ARGUMENT, "rwb_chain_builtin: null pointer");
        const std::string n = name;
        if (n == "fig1")
            *out = new rwb_chain{rwb::fig1_chain(eps)};
        else if (n == "exp9")
            *out = new rwb_chain{rwb::exp9_chain(K)};
        else if (n == "knode")
            *out = new rwb_chain{rwb::make_knode_family(K, static_cast<double>(T)).chain};
        else
            return fail(RWB_ERR_CONFIG, fmt::format("unknown builtin instance '{}'", n));
        return RWB_OK;
    });
}

void rwb_chain_free(rwb_chain* chain)
{
    delete chain;
}

int rwb_chain_size(const rwb_chain* chain)
{
    return chain ? chain->chain.size() : 0;
}

rwb_status rwb_chain_to_json(const rwb_chain* chain, char* buf, size_t cap, size_t* needed)
{
    return guarded([&] {
        if (!chain)
            return fail(RWB_ERR_ARGUMENT, "rwb_chain_to_json: null chain");
        const std::string text = rwb::chain_to_json(chain->chain);
        if (needed)
            *needed = text.size() + 1;
        if (!buf || cap < text.size() + 1)
            return fail(RWB_ERR_ARGUMENT, "rwb_chain_to_json: buffer too small");
        std::memcpy(buf, text.c_str(), text.size() + 1);
        return RWB_OK;
    });
}

rwb_status rwb_validate_json(const char* text, rwb_validation* out)
{
    return guarded([&] {
        if (!text || !out)
            return fail(RWB_ERR_ARGUMENT, "rwb_validate_json: null pointer");
        const rwb::ValidationReport r = rwb::validate_chain_json(text);
        *out = to_c(r);
        if (!r.ok())
            return fail(RWB_ERR_INVALID_INSTANCE, joined_failures(r));
        return RWB_OK;
    });
}

rwb_status rwb_chain_validate(const rwb_chain* chain, rwb_validation* out)
{
    return guarded([&] {
        if (!chain || !out)
            return fail(RWB_ERR_ARGUMENT, "rwb_chain_validate: null pointer");
        const rwb::ValidationReport r = chain->chain.validate();
        *out = to_c(r);
        if (!r.ok())
            return fail(RWB_ERR_INVALID_INSTANCE, joined_failures(r));
        return RWB_OK;
    });
}

rwb_status rwb_chain_hitting_times(const rwb_chain* chain, const double* lengths, double* out, int K)
{
    return guarded([&] {
        if (!chain || !out || K != chain->chain.size())
            return fail(RWB_ERR_ARGUMENT, "rwb_chain_hitting_times: null pointer or size mismatch");
        rwb::Vector mu;
        if (lengths) {
            rwb::Matrix L(K, K + 1);
            for (int i = 0; i < K; ++i)
                for (int j = 0; j <= K; ++j)
                    L(i, j) = lengths[i * (K + 1) + j];
            mu = rwb::expected_hitting_times(chain->chain, rwb::EdgeLengths(std::move(L)));
        } else {
            mu = rwb::expected_hitting_times(chain->chain);
        }
        for (int i = 0; i < K; ++i)
            out[i] = mu(i);
        return RWB_OK;
    });
}

rwb_status rwb_chain_first_passage(const rwb_chain* chain, int target, double* out, int K)
{
    return guarded([&] {
        if (!chain || !out || K != chain->chain.size())
            return fail(RWB_ERR_ARGUMENT, "rwb_chain_first_passage: null pointer or size mismatch");
        const rwb::Vector r = rwb::first_passage_probs(chain->chain, target);
        for (int i = 0; i < K; ++i)
            out[i] = r(i);
        return RWB_OK;
    });
}

rwb_status rwb_chain_centrality(const rwb_chain* chain, double* alpha, int K, double* alpha_min)
{
    return guarded([&] {
        if (!chain || K != chain->chain.size())
            return fail(RWB_ERR_ARGUMENT, "rwb_chain_centrality: null pointer or size mismatch");
        const rwb::Centrality c = rwb::hitting_centrality(chain->chain);
        if (alpha)
            for (int i = 0; i < K; ++i)
                alpha[i] = c.per_node(i);
        if (alpha_min)
            *alpha_min = c.min;
        return RWB_OK;
    });
}

rwb_status rwb_chain_kappa(const rwb_chain* chain, double* out)
{
    return guarded([&] {
        if (!chain || !out)
            return fail(RWB_ERR_ARGUMENT, "rwb_chain_kappa: null pointer");
        *out = rwb::kappa(chain->chain);
        return RWB_OK;
    });
}

rwb_status rwb_tail_bound(double rho, long long B, double* out)
{
    return guarded([&] {
        if (!out)
            return fail(RWB_ERR_ARGUMENT, "rwb_tail_bound: null pointer");
        *out = rwb::tail_bound(rho, B);
        return RWB_OK;
    });
}

rwb_status rwb_b_param(int K, long long T, double rho, double eps_prob, long long* out)
{
    return guarded([&] {
        if (!out)
            return fail(RWB_ERR_ARGUMENT, "rwb_b_param: null pointer");
        *out = rwb::b_param(K, T, rho, eps_prob);
        return RWB_OK;
    });
}

rwb_status rwb_config_parse(const char* text, rwb_config** out)
{
    return guarded([&] {
        if (!text || !out)
            return fail(RWB_ERR_ARGUMENT, "rwb_config_parse: null pointer");
        *out = new rwb_config{rwb::parse_config(text)};
        return RWB_OK;
    });
}

rwb_status rwb_config_load(const char* path, rwb_config** out)
{
    return guarded([&] {
        if (!path || !out)
            return fail(RWB_ERR_ARGUMENT, "rwb_config_load: null pointer");
        *out = new rwb_config{rwb::load_config(path)};
        return RWB_OK;
    });
}

void rwb_config_free(rwb_config* config)
{
    delete config;
}

rwb_status rwb_config_set_horizon(rwb_config* config, long long T)
{
    if (!config || T < 1)
        return fail(RWB_ERR_ARGUMENT, "rwb_config_set_horizon: null config or T < 1");
    config->config.T = static_cast<long>(T);
    return RWB_OK;
}

rwb_status rwb_config_set_seeds(rwb_config* config, const unsigned long long* seeds, int count)
{
    if (!config || !seeds || count < 1)
        return fail(RWB_ERR_ARGUMENT, "rwb_config_set_seeds: null pointer or empty seed list");
    config->config.seeds.assign(seeds, seeds + count);
    return RWB_OK;
}

rwb_status rwb_run_ucb(const rwb_config* config, const char* out_dir, rwb_run_summary* summary)
{
    return guarded([&] {
        if (!config)
            return fail(RWB_ERR_ARGUMENT, "rwb_run_ucb: null config");
        const rwb::ExperimentConfig& cfg = config->config;
        const rwb::ChainInstance chain = rwb::build_chain(cfg);
        const rwb::LengthProcess lengths = rwb::build_lengths(cfg, chain);
        const double rho = cfg.rho.value_or(chain.rho());
        const auto variant = cfg.variant == "standard" ? rwb::UcbVariant::Standard : rwb::UcbVariant::Trajectory;
        const std::filesystem::path dir = ensure_dir(out_dir);
        rwb::RunOptions options;
        options.keep_diagnostics = true;
        options.keep_trajectories = cfg.log_trajectories;

        const auto runs = rwb::fan_out(cfg.seeds, cfg.workers, [&](std::uint64_t seed) {
            rwb::UcbPolicy policy(chain.size(), rho, variant);
            rwb::RunRecord rec = rwb::run_stochastic(policy, chain, lengths, cfg.T, seed, options);
            std::ostringstream rows, ledger;
            rwb::write_ucb_csv(rows, rec, chain.size());
            policy.state().ledger().write_snapshot(ledger);
            write_file(dir / fmt::format("ucb_seed{}.csv", seed), rows.str());
            write_file(dir / fmt::format("ucb_seed{}_ledger.csv", seed), ledger.str());
            if (cfg.log_trajectories) {
                std::ostringstream traj;
                rwb::write_trajectory_header(traj);
                for (const auto& e : rec.epochs)
                    rwb::write_trajectory_row(traj, *e.trajectory);
                write_file(dir / fmt::format("ucb_seed{}_trajectories.csv", seed), traj.str());
            }
            for (auto& e : rec.epochs) {
                e.pre_play.clear();
                e.post_play.clear();
                e.trajectory.reset();
            }
            return rec;
        });
        write_summary_csv(dir / "ucb_summary.csv", runs);
        fill_summary(summary, runs);
        return RWB_OK;
    });
}

rwb_status rwb_run_exp3(const rwb_config* config, const char* out_dir, rwb_run_summary* summary)
{
    return guarded([&] {
        if (!config)
            return fail(RWB_ERR_ARGUMENT, "rwb_run_exp3: null config");
        const rwb::ExperimentConfig& cfg = config->config;
        const rwb::ChainInstance chain = rwb::build_chain(cfg);
        const rwb::LengthProcess process = rwb::build_lengths(cfg, chain);
        const double eps_prob = cfg.eps_prob > 0.0 ? cfg.eps_prob : 1.0 / static_cast<double>(cfg.T);
        rwb::Exp3Params params = rwb::default_params(chain, cfg.T, eps_prob);
        if (cfg.eta)
            params.eta = *cfg.eta;
        if (cfg.beta)
            params.beta = *cfg.beta;
        if (cfg.B)
            params.B = *cfg.B;
        const auto estimator = cfg.variant == "standard"  ? rwb::Exp3Estimator::Standard
                               : cfg.variant == "covered" ? rwb::Exp3Estimator::Covered
                                                          : rwb::Exp3Estimator::Shifted;
        const std::filesystem::path dir = ensure_dir(out_dir);
        rwb::RunOptions options;
        options.keep_diagnostics = true;
        options.keep_trajectories = cfg.log_trajectories;

        const auto runs = rwb::fan_out(cfg.seeds, cfg.workers, [&](std::uint64_t seed) {
            rwb::Rng schedule_rng = rwb::Rng::stream(seed, 0, rwb::Stream::Schedule);
            const rwb::LengthProcess schedule = process.freeze(cfg.T, schedule_rng);
            rwb::Exp3Policy policy(chain.size(), params, estimator);
            rwb::RunRecord rec = rwb::run_adversarial(policy, chain, schedule, cfg.T, seed, options);
            std::ostringstream rows, ledger;
            rwb::write_exp3_csv(rows, rec, chain.size());
            policy.state().ledger().write_snapshot(ledger);
            write_file(dir / fmt::format("exp3_seed{}.csv", seed), rows.str());
            write_file(dir / fmt::format("exp3_seed{}_ledger.csv", seed), ledger.str());
            if (cfg.log_trajectories) {
                std::ostringstream traj;
                rwb::write_trajectory_header(traj);
                for (const auto& e : rec.epochs)
                    rwb::write_trajectory_row(traj, *e.trajectory);
                write_file(dir / fmt::format("exp3_seed{}_trajectories.csv", seed), traj.str());
            }
            for (auto& e : rec.epochs) {
                e.pre_play.clear();
                e.post_play.clear();
                e.trajectory.reset();
            }
            return rec;
        });
        write_summary_csv(dir / "exp3_summary.csv", runs);
        fill_summary(summary, runs);
        return RWB_OK;
    });
}

rwb_status rwb_lowerbound_report(const double* eps, int count, double T, const char* csv_path)
{
    return guarded([&] {
        if (!eps || count < 1 || !csv_path)
            return fail(RWB_ERR_ARGUMENT, "rwb_lowerbound_report: empty grid or null path");
        std::ostringstream out;
        rwb::write_lowerbound_report(out, std::span<const double>(eps, static_cast<std::size_t>(count)), T);
        write_file(csv_path, out.str());
        return RWB_OK;
    });
}

rwb_status rwb_reproduce(const char* figure, const rwb_config* config, const char* csv_path,
                         rwb_run_summary* summary)
{
    return guarded([&] {
        if (!figure || !csv_path)
            return fail(RWB_ERR_ARGUMENT, "rwb_reproduce: null figure or path");
        const std::string fig = figure;
        std::vector<std::uint64_t> seeds = rwb::seed_range(1, 10);
        int workers = 1;
        std::optional<long> T;
        if (config) {
            seeds = config->config.seeds;
            workers = config->config.workers;
            T = config->config.T;
        }
        std::ostringstream out;
        if (fig == "fig-adv") {
            const auto res = rwb::reproduce_fig_adv(seeds, T.value_or(40000), workers);
            rwb::write_fig_adv_csv(out, res);
            fill_summary(summary, res.trajectory_runs);
        } else if (fig == "fig-sto") {
            const auto res = rwb::reproduce_fig_sto(seeds, T.value_or(20000), workers);
            rwb::write_fig_sto_csv(out, res);
            fill_summary(summary, res.runs);
        } else {
            return fail(RWB_ERR_CONFIG, fmt::format("unknown figure '{}' (expected fig-adv or fig-sto)", fig));
        }
        write_file(csv_path, out.str());
        return RWB_OK;
    });
}

rwb_status rwb_plot(const char* csv_path, const char* svg_path, const char* title)
{
    return guarded([&] {
        if (!csv_path || !svg_path)
            return fail(RWB_ERR_ARGUMENT, "rwb_plot: null path");
        const rwb::CsvTable table = rwb::parse_csv(rwb::read_text_file(csv_path));
        write_file(svg_path, rwb::render_svg(table, title ? title : csv_path));
        return RWB_OK;
    });
}

}  // extern "C"
