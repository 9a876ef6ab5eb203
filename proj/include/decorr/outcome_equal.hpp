#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "decorr/distribution.hpp"
#include "decorr/error.hpp"

namespace decorr {

inline constexpr double kDefaultVerifyTolerance = 1e-10;
inline constexpr double kOracleAgreementTolerance = 1e-6;
inline constexpr std::size_t kOracleMaxCells = 200;

// Protected variables whose cells are exempt from cross-cell equalization.
// Each combination of their levels (a scope cell) is equalized on its own over
// the remaining protected variables.
struct ScopeSpec {
    std::vector<std::string> scope_variables;
};

// A scope resolved against a schema: every flattened W index mapped to its
// scope cell.
class ScopePartition {
public:
    // Unscoped: a single cell holding all of W.
    explicit ScopePartition(const VariableSchema& schema);
    // Throws BadScope for unknown or non-protected names, EmptyScopeCellSchema
    // when no protected variable is left to equalize.
    ScopePartition(const VariableSchema& schema, const ScopeSpec& scope);

    std::size_t cell_count() const noexcept { return cell_count_; }
    std::size_t cell_of(std::size_t w) const noexcept { return cell_of_w_[w]; }
    const std::string& label(std::size_t g) const { return labels_.at(g); }
    bool scoped() const noexcept { return !names_.empty(); }
    const std::vector<std::string>& names() const noexcept { return names_; }

private:
    std::size_t cell_count_ = 1;
    std::vector<std::size_t> cell_of_w_;
    std::vector<std::string> labels_;
    std::vector<std::string> names_;
};

ScopePartition resolve_scope(const VariableSchema& schema, const std::optional<ScopeSpec>& scope);

struct InfeasiblePair {
    std::size_t s = 0;
    std::size_t w = 0;
    double demanded = 0.0;  // mass the insensitivity constraint requires at (s, w)
    double actual = 0.0;    // Pr(s, w), always 0
};

struct FeasibilityReport {
    std::vector<InfeasiblePair> infeasible_pairs;

    bool feasible() const noexcept { return infeasible_pairs.empty(); }
    std::string render(const VariableSchema& schema) const;
};

class InfeasibleError : public Error {
public:
    InfeasibleError(FeasibilityReport report, const std::string& message)
        : Error(ErrorCode::Infeasible, message), report_(std::move(report)) {}

    const FeasibilityReport& report() const noexcept { return report_; }

private:
    FeasibilityReport report_;
};

// Lists every (s, w) with Pr(s, w) = 0 while Pr(s) > 0 and Pr(w) > 0. When
// scoped, Pr(s) is replaced by Pr(s | scope cell of w).
FeasibilityReport feasibility_check(const JointDistribution& dist);
FeasibilityReport feasibility_check(const JointDistribution& dist, const ScopeSpec& scope);

// KL-minimal distribution whose (S, W) marginal factorizes:
//   Pr_X(s, u, w) = Pr(s, u, w) * Pr(s) / Pr(s | w)
// Scoped: applied within each scope cell g, with Pr(s) replaced by Pr(s | g),
// and recombined with the original scope-cell masses.
// Throws InfeasibleError when a structural zero blocks the constraint.
JointDistribution outcome_equalize(const JointDistribution& dist,
                                   const std::optional<ScopeSpec>& scope = std::nullopt);

struct InsensitivityReport {
    bool pass = false;
    double max_violation = 0.0;
    std::size_t worst_s = 0;
    std::size_t worst_w = 0;
    // Per scope cell maximum residual; a single entry when unscoped.
    std::vector<double> cell_violation;
};

// max over (s, w) of |Pr(s, w) - Pr(s) Pr(w)|. Scoped: the residual of the
// conditional given each positive-mass scope cell. tol must be positive.
InsensitivityReport verify_insensitivity(const JointDistribution& dist, double tol);
InsensitivityReport verify_insensitivity(const JointDistribution& dist, double tol, const ScopeSpec& scope);

// KL(equalized, original): the equalized distribution is the first argument.
double information_cost(const JointDistribution& original, const JointDistribution& equalized);

struct OracleOptions {
    std::size_t iterations = 200;
    std::size_t samples = 64;
    std::uint64_t seed = 0;
};

// Generic numerical minimizer of KL(Q, Pr) over the feasible polytope
// { Q >= 0 : sum_u Q(s, u, w) = Pr(s) Pr(w) }. Used to cross-check
// outcome_equalize; it never evaluates the closed form.
// Throws InfeasibleError, or InstanceTooLarge above kOracleMaxCells cells.
JointDistribution brute_force_project(const JointDistribution& dist, const OracleOptions& options = {});

}  // namespace decorr
