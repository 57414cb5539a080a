#include "rwbandit/config.hpp"

#include "rwbandit/harness.hpp"
#include "rwbandit/lower_bounds.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

namespace rwb {

using nlohmann::json;

namespace {

json parse_json(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("malformed JSON: {}", e.what()));
    }
}

Matrix read_matrix(const json& j, const char* key, int rows, int cols)
{
    if (!j.contains(key) || !j[key].is_array())
        throw ConfigError(fmt::format("'{}' must be an array", key));
    const json& a = j[key];
    if (static_cast<int>(a.size()) != rows * cols)
        throw ConfigError(fmt::format("'{}' needs {} entries, got {}", key, rows * cols, a.size()));
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const json& v = a[static_cast<std::size_t>(r * cols + c)];
            if (!v.is_number())
                throw ConfigError(fmt::format("'{}' entries must be numbers", key));
            m(r, c) = v.get<double>();
        }
    return m;
}

json matrix_to_json(const Matrix& m)
{
    json a = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            a.push_back(m(r, c));
    return a;
}

struct ParsedChain {
    Matrix M;
    double rho;
    bool allow_non_primitive;
    std::optional<Matrix> lengths;
};

ParsedChain parse_chain(const std::string& text)
{
    const json j = parse_json(text);
    if (!j.is_object())
        throw ConfigError("chain instance must be a JSON object");
    if (!j.contains("K") || !j["K"].is_number_integer() || j["K"].get<int>() < 1)
        throw ConfigError("'K' must be a positive integer");
    const int K = j["K"].get<int>();
    ParsedChain out;
    out.M = read_matrix(j, "M", K, K);
    out.rho = j.value("rho", -1.0);
    out.allow_non_primitive = j.value("allow_non_primitive", false);
    if (j.contains("lengths"))
        out.lengths = read_matrix(j, "lengths", K, K + 1);
    if (out.rho < 0.0)
        out.rho = out.M.cwiseAbs().rowwise().sum().maxCoeff();
    return out;
}

}  // namespace

std::string chain_to_json(const ChainInstance& chain)
{
    json j;
    j["K"] = chain.size();
    j["rho"] = chain.rho();
    j["M"] = matrix_to_json(chain.transitions());
    if (chain.allows_non_primitive())
        j["allow_non_primitive"] = true;
    if (chain.fixed_lengths())
        j["lengths"] = matrix_to_json(chain.fixed_lengths()->matrix());
    return j.dump(2) + "\n";
}

ChainInstance chain_from_json(const std::string& text)
{
    ParsedChain p = parse_chain(text);
    ChainInstance chain(std::move(p.M), p.rho, p.allow_non_primitive);
    if (p.lengths) {
        try {
            chain.set_fixed_lengths(EdgeLengths(std::move(*p.lengths)));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    return chain;
}

ValidationReport validate_chain_json(const std::string& text)
{
    const ParsedChain p = parse_chain(text);
    return validate(p.M, p.rho, p.allow_non_primitive);
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(fmt::format("cannot open '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError(fmt::format("cannot write '{}'", path));
    out << text;
}

ExperimentConfig parse_config(const std::string& text)
{
    const json j = parse_json(text);
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    ExperimentConfig cfg;
    try {
        const std::string instance = j.value("instance", std::string("fig1"));
        if (instance == "fig1" || instance == "exp9" || instance == "knode") {
            cfg.builtin = instance;
        } else {
            cfg.builtin.clear();
            cfg.instance_path = instance;
        }
        cfg.eps = j.value("eps", cfg.builtin == "knode" ? -1.0 : 0.0);
        cfg.K = j.value("K", cfg.builtin == "knode" ? 4 : 9);
        cfg.knode_instance = j.value("k", -1);
        cfg.T = j.value("T", 1000L);
        if (cfg.T < 1)
            throw ConfigError("'T' must be >= 1");

        if (j.contains("seeds")) {
            const json& s = j["seeds"];
            if (s.is_array()) {
                cfg.seeds = s.get<std::vector<std::uint64_t>>();
            } else if (s.is_number_integer()) {
                cfg.seeds = seed_range(j.value("first_seed", 1ULL), s.get<int>());
            } else {
                throw ConfigError("'seeds' must be a list or a count");
            }
        }
        if (cfg.seeds.empty())
            throw ConfigError("at least one seed is required");
        cfg.workers = j.value("workers", 1);

        std::string lengths;
        if (j.contains("lengths"))
            lengths = j["lengths"].get<std::string>();
        else
            lengths = cfg.builtin == "exp9" ? "exp-adv" : cfg.builtin == "knode" ? "bernoulli" : "unit";
        if (lengths == "unit")
            cfg.lengths = LengthKind::Unit;
        else if (lengths == "fixed")
            cfg.lengths = LengthKind::Fixed;
        else if (lengths == "exp-adv")
            cfg.lengths = LengthKind::ExpAdv;
        else if (lengths == "bernoulli")
            cfg.lengths = LengthKind::Bernoulli;
        else
            throw ConfigError(fmt::format("unknown length process '{}'", lengths));

        cfg.variant = j.value("variant", std::string("trajectory"));
        if (cfg.variant != "trajectory" && cfg.variant != "standard" && cfg.variant != "covered")
            throw ConfigError(fmt::format("unknown variant '{}'", cfg.variant));

        if (j.contains("params")) {
            const json& p = j["params"];
            if (p.is_string()) {
                if (p.get<std::string>() != "auto")
                    throw ConfigError("'params' must be \"auto\" or an object");
            } else if (p.is_object()) {
                cfg.auto_params = p.value("mode", std::string("auto")) == "auto";
                if (p.contains("eta")) cfg.eta = p["eta"].get<double>();
                if (p.contains("beta")) cfg.beta = p["beta"].get<double>();
                if (p.contains("B")) cfg.B = p["B"].get<double>();
                if (p.contains("rho")) cfg.rho = p["rho"].get<double>();
                cfg.eps_prob = p.value("eps", 0.0);
            } else {
                throw ConfigError("'params' must be \"auto\" or an object");
            }
        }
        cfg.log_trajectories = j.value("log_trajectories", false);
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("bad config field: {}", e.what()));
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    return parse_config(read_text_file(path));
}

ChainInstance build_chain(const ExperimentConfig& cfg)
{
    if (cfg.builtin == "fig1")
        return fig1_chain(cfg.eps);
    if (cfg.builtin == "exp9")
        return exp9_chain(cfg.K);
    if (cfg.builtin == "knode") {
        const double eps = cfg.eps < 0.0 ? knode_eps(cfg.K, static_cast<double>(cfg.T)) : cfg.eps;
        return make_knode_family(cfg.K, static_cast<double>(cfg.T), eps).chain;
    }
    return chain_from_json(read_text_file(cfg.instance_path));
}

LengthProcess build_lengths(const ExperimentConfig& cfg, const ChainInstance& chain)
{
    const int K = chain.size();
    switch (cfg.lengths) {
    case LengthKind::Unit:
        return LengthProcess::fixed(EdgeLengths::unit(K));
    case LengthKind::Fixed:
        if (!chain.fixed_lengths())
            throw ConfigError("'fixed' lengths requested but the instance carries none");
        return LengthProcess::fixed(*chain.fixed_lengths());
    case LengthKind::ExpAdv:
        return exp_adv_length_process(K);
    case LengthKind::Bernoulli:
        break;
    }
    if (cfg.builtin == "knode") {
        const double eps = cfg.eps < 0.0 ? knode_eps(cfg.K, static_cast<double>(cfg.T)) : cfg.eps;
        return make_knode_family(cfg.K, static_cast<double>(cfg.T), eps).lengths(cfg.knode_instance);
    }
    return bernoulli_length_process(Matrix::Constant(K, K + 1, 0.5));
}

}  // namespace rwb
