#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "decorr/distribution.hpp"

namespace decorr {

// Allocate to (u, w) iff Pr(target | u, w) >= tau.
struct ThresholdPolicy {
    std::size_t target_outcome = 0;
    double tau = 0.5;
};

// Throws BadPolicy for an unknown outcome label or tau outside [0, 1].
ThresholdPolicy make_policy(const VariableSchema& schema, std::string_view target_label, double tau);
void validate(const ThresholdPolicy& policy, const VariableSchema& schema);

struct AllocationRates {
    // One entry per flattened w; nullopt when Pr(w) = 0 in the population.
    std::vector<std::optional<double>> rate;
    // (u, w) cells with positive population weight whose score conditional
    // is undefined; excluded from the rates.
    std::size_t undefined_cells = 0;
};

// rate(w) = sum_u Pr_population(u | w) * [Pr_scores(target | u, w) >= tau]
AllocationRates allocation_rates(const JointDistribution& scores, const JointDistribution& population,
                                 const ThresholdPolicy& policy);

// Largest pairwise gap between defined group rates, using dist as both the
// score and the population distribution.
double policy_disparity(const JointDistribution& dist, const ThresholdPolicy& policy);

struct PolicyAudit {
    ThresholdPolicy policy;
    AllocationRates original;
    AllocationRates equalized;
    double disparity_original = 0.0;
    double disparity_equalized = 0.0;
};

struct AuditReport {
    double mi_before = 0.0;         // I(S; W) under the original joint
    double mi_after = 0.0;          // I(S; W) under the equalized joint
    double information_cost = 0.0;  // KL(equalized, original)
    std::optional<PolicyAudit> policy;
    std::string chernoff_stein_note;
};

// Throws SchemaMismatch, InfiniteDivergence (equalized support escapes the
// original's), BadPolicy.
AuditReport audit(const JointDistribution& original, const JointDistribution& equalized,
                  const std::optional<ThresholdPolicy>& policy = std::nullopt);

nlohmann::json audit_to_json(const AuditReport& report, const VariableSchema& schema);
std::string render_audit(const AuditReport& report, const VariableSchema& schema);

}  // namespace decorr
