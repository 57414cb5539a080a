// Command-line front end. Talks to the library only through rwbandit.h.
//
// Exit codes: 0 ok, 1 config or runtime error, 2 instance validation failure.

#include "rwbandit/rwbandit.h"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

namespace {

std::string output_dir()
{
    const char* env = std::getenv("RWB_OUTPUT_DIR");
    return env && *env ? env : ".";
}

std::string in_output_dir(const std::string& name)
{
    const std::filesystem::path p(name);
    if (p.is_absolute() || p.has_parent_path())
        return name;
    return (std::filesystem::path(output_dir()) / p).string();
}

int exit_code(rwb_status status)
{
    if (status == RWB_OK)
        return 0;
    std::fprintf(stderr, "error: %s\n", rwb_last_error());
    return status == RWB_ERR_INVALID_INSTANCE ? 2 : 1;
}

struct ConfigHandle {
    rwb_config* ptr = nullptr;
    ~ConfigHandle() { rwb_config_free(ptr); }
};

struct ChainHandle {
    rwb_chain* ptr = nullptr;
    ~ChainHandle() { rwb_chain_free(ptr); }
};

int cmd_validate(const std::string& instance, double eps, int K, long long T)
{
    ChainHandle chain;
    rwb_validation report{};
    rwb_status st;
    if (instance == "fig1" || instance == "exp9" || instance == "knode") {
        st = rwb_chain_builtin(instance.c_str(), eps, K, T, &chain.ptr);
        if (st == RWB_OK)
            st = rwb_chain_validate(chain.ptr, &report);
    } else {
        std::FILE* f = std::fopen(instance.c_str(), "rb");
        if (!f) {
            std::fprintf(stderr, "error: cannot open '%s'\n", instance.c_str());
            return 1;
        }
        std::string text;
        char buf[4096];
        for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, f)) > 0;)
            text.append(buf, n);
        std::fclose(f);
        st = rwb_validate_json(text.c_str(), &report);
        if (st == RWB_OK)
            st = rwb_chain_from_json(text.c_str(), &chain.ptr);
    }
    if (st == RWB_OK || st == RWB_ERR_INVALID_INSTANCE) {
        std::printf("check,result\n");
        std::printf("nonnegative,%s\n", report.nonnegative ? "pass" : "fail");
        std::printf("norm,%s\n", report.norm_ok ? "pass" : "fail");
        std::printf("primitive,%s\n", report.primitive ? "pass" : (report.primitivity_waived ? "waived" : "fail"));
        std::printf("inf_norm,%.17g\n", report.inf_norm);
        std::printf("rho,%.17g\n", report.rho);
    }
    if (st == RWB_OK && chain.ptr) {
        const int n = rwb_chain_size(chain.ptr);
        std::vector<double> mu(n), alpha(n);
        double alpha_min = 0.0, kappa = 0.0;
        if (rwb_chain_hitting_times(chain.ptr, nullptr, mu.data(), n) == RWB_OK &&
            rwb_chain_centrality(chain.ptr, alpha.data(), n, &alpha_min) == RWB_OK &&
            rwb_chain_kappa(chain.ptr, &kappa) == RWB_OK) {
            for (int i = 0; i < n; ++i)
                std::printf("mu_%d,%.17g\n", i, mu[i]);
            for (int i = 0; i < n; ++i)
                std::printf("alpha_%d,%.17g\n", i, alpha[i]);
            std::printf("kappa,%.17g\n", kappa);
        }
    }
    return exit_code(st);
}

int cmd_run(bool ucb, const std::string& config_path)
{
    ConfigHandle cfg;
    rwb_status st = rwb_config_load(config_path.c_str(), &cfg.ptr);
    if (st != RWB_OK)
        return exit_code(st);
    rwb_run_summary summary{};
    const std::string dir = output_dir();
    st = ucb ? rwb_run_ucb(cfg.ptr, dir.c_str(), &summary) : rwb_run_exp3(cfg.ptr, dir.c_str(), &summary);
    if (st == RWB_OK)
        std::printf("runs=%d epochs=%lld final_regret_mean=%.6g final_regret_std=%.6g\n", summary.runs,
                    summary.epochs, summary.final_regret_mean, summary.final_regret_std);
    return exit_code(st);
}

int cmd_lowerbound(std::vector<double> eps, double T, const std::string& out)
{
    if (eps.empty())
        eps = {1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.2};
    return exit_code(rwb_lowerbound_report(eps.data(), static_cast<int>(eps.size()), T, in_output_dir(out).c_str()));
}

int cmd_reproduce(const std::string& figure, const std::string& config_path, long long T, int seeds,
                  const std::string& out)
{
    ConfigHandle cfg;
    if (!config_path.empty()) {
        const rwb_status st = rwb_config_load(config_path.c_str(), &cfg.ptr);
        if (st != RWB_OK)
            return exit_code(st);
    } else if (T > 0 || seeds > 0) {
        const rwb_status st = rwb_config_parse("{}", &cfg.ptr);
        if (st != RWB_OK)
            return exit_code(st);
        std::vector<unsigned long long> list;
        for (int s = 1; s <= (seeds > 0 ? seeds : 10); ++s)
            list.push_back(static_cast<unsigned long long>(s));
        rwb_config_set_seeds(cfg.ptr, list.data(), static_cast<int>(list.size()));
        rwb_config_set_horizon(cfg.ptr, T > 0 ? T : (figure == "fig-adv" ? 40000 : 20000));
    }
    const std::string path = in_output_dir(out.empty() ? figure + ".csv" : out);
    rwb_run_summary summary{};
    const rwb_status st = rwb_reproduce(figure.c_str(), cfg.ptr, path.c_str(), &summary);
    if (st == RWB_OK)
        std::printf("wrote %s (runs=%d epochs=%lld)\n", path.c_str(), summary.runs, summary.epochs);
    return exit_code(st);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bandits with random-walk feedback: simulation, algorithms and lower-bound checks"};
    app.require_subcommand(1);

    std::string instance;
    double eps = 0.0;
    int K = 9;
    long long T = 1000;
    auto* validate = app.add_subcommand("validate", "Validate a chain instance and print its analytics");
    validate->add_option("instance", instance, "Instance JSON file or builtin name (fig1, exp9, knode)")->required();
    validate->add_option("--eps", eps, "Gap parameter for fig1");
    validate->add_option("-K", K, "Node count for exp9 / knode");
    validate->add_option("-T", T, "Horizon for knode");

    std::string config_path;
    auto* run_ucb = app.add_subcommand("run-ucb", "Run the optimistic index policy");
    run_ucb->add_option("--config", config_path, "Experiment config (JSON)")->required();
    auto* run_exp3 = app.add_subcommand("run-exp3", "Run the exponential-weights policy against a fixed schedule");
    run_exp3->add_option("--config", config_path, "Experiment config (JSON)")->required();

    std::vector<double> lb_eps;
    double lb_T = 1e4;
    std::string out;
    auto* lowerbound = app.add_subcommand("lowerbound-report", "Two-node lower-bound quantities over an eps grid");
    lowerbound->add_option("--eps", lb_eps, "Gap parameters");
    lowerbound->add_option("-T", lb_T, "Horizon for the bound value");
    lowerbound->add_option("-o,--out", out, "Output CSV")->default_val("lowerbound.csv");

    std::string figure;
    int seeds = 0;
    long long repro_T = 0;
    auto* reproduce = app.add_subcommand("reproduce", "Reproduce an experiment figure as CSV");
    reproduce->add_option("figure", figure, "fig-adv or fig-sto")->required()->check(CLI::IsMember({"fig-adv", "fig-sto"}));
    reproduce->add_option("--config", config_path, "Config supplying T, seeds and workers");
    reproduce->add_option("-T", repro_T, "Horizon");
    reproduce->add_option("--seeds", seeds, "Number of seeds (1..n)");
    reproduce->add_option("-o,--out", out, "Output CSV");

    std::string csv, svg, title;
    auto* plot = app.add_subcommand("plot", "Render a CSV as an SVG line chart");
    plot->add_option("csv", csv, "Input CSV")->required();
    plot->add_option("svg", svg, "Output SVG")->required();
    plot->add_option("--title", title, "Chart title");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (*validate)
        return cmd_validate(instance, eps, K, T);
    if (*run_ucb)
        return cmd_run(true, config_path);
    if (*run_exp3)
        return cmd_run(false, config_path);
    if (*lowerbound)
        return cmd_lowerbound(lb_eps, lb_T, out);
    if (*reproduce)
        return cmd_reproduce(figure, config_path, repro_T, seeds, out);
    if (*plot)
        return exit_code(rwb_plot(in_output_dir(csv).c_str(), in_output_dir(svg).c_str(),
                                  title.empty() ? nullptr : title.c_str()));
    return 1;
}
