#pragma once

// Structured-text (JSON) formats: chain instances and experiment configs.

#include "rwbandit/markov.hpp"
#include "rwbandit/trajectory.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwb {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// {"K": 2, "rho": 0.625, "M": [row-major K*K], "lengths": [row-major K*(K+1)],
//  "allow_non_primitive": false}. "lengths" is optional.
std::string chain_to_json(const ChainInstance& chain);
// Throws ConfigError for malformed text and InvalidInstance for chains that fail validation.
ChainInstance chain_from_json(const std::string& text);
ValidationReport validate_chain_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

enum class LengthKind { Unit, Fixed, ExpAdv, Bernoulli };

struct ExperimentConfig {
    // Builtin name ("fig1", "exp9", "knode") or empty when `instance_path` is set.
    std::string builtin = "fig1";
    std::string instance_path;
    double eps = 0.0;       // fig1 gap / knode eps (negative: derive from K, T)
    int K = 9;              // exp9 ring size / knode K
    int knode_instance = -1;
    long T = 1000;
    std::vector<std::uint64_t> seeds{1};
    int workers = 1;

    LengthKind lengths = LengthKind::Unit;
    std::string variant;    // "trajectory", "standard", "covered"

    // "auto" derives (B, eta, beta) from the chain; explicit values override.
    bool auto_params = true;
    std::optional<double> eta;
    std::optional<double> beta;
    std::optional<double> B;
    std::optional<double> rho;
    double eps_prob = 0.0;  // 0: 1/T

    bool log_trajectories = false;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

ChainInstance build_chain(const ExperimentConfig& cfg);
LengthProcess build_lengths(const ExperimentConfig& cfg, const ChainInstance& chain);

}  // namespace rwb
