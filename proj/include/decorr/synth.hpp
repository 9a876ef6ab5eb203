#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "decorr/distribution.hpp"
#include "decorr/estimation.hpp"

namespace decorr {

// Row-stochastic matrix stored row-major.
class StochasticTable {
public:
    StochasticTable() = default;
    // Throws InvalidTable unless every row is a distribution within 1e-9.
    StochasticTable(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }
    double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

// Generative chain W -> U -> S over a schema's flattened axes.
struct SynthConfig {
    VariableSchema schema;
    StochasticTable protected_prior;             // 1 x |W|
    StochasticTable unprotected_given_protected; // |W| x |U|, row w
    StochasticTable outcome_given;               // (|U| |W|) x |S|, row u * |W| + w
    std::size_t sample_count = 1;
    std::uint64_t seed = 0;
};

// Throws InvalidTable on shape mismatch or sample_count = 0.
void validate(const SynthConfig& config);

// Pr(s, u, w) = Pr(w) Pr(u | w) Pr(s | u, w).
JointDistribution ground_truth_joint(const SynthConfig& config);

// Ancestral sampling (w, then u | w, then s | u, w) from Rng(config.seed).
Dataset sample(const SynthConfig& config);

// Config document:
//   {"schema": {"variables": [...]},
//    "protected_prior": [Pr(w) for each flattened w],
//    "unprotected_given_protected": [[Pr(u | w) for u] for w],
//    "outcome_given": [[[Pr(s | u, w) for s] for w] for u],
//    "samples": n, "seed": k}
SynthConfig synth_config_from_json(const nlohmann::json& doc);
nlohmann::json synth_config_to_json(const SynthConfig& config);

}  // namespace decorr
