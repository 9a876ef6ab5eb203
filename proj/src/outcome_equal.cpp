#include "decorr/outcome_equal.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace decorr {

ScopePartition::ScopePartition(const VariableSchema& schema)
    : cell_of_w_(schema.w_size(), 0), labels_{"*"} {}

ScopePartition::ScopePartition(const VariableSchema& schema, const ScopeSpec& scope) {
    std::set<std::size_t> scoped;
    for (const auto& name : scope.scope_variables) {
        const auto idx = schema.find(name);
        if (!idx) throw Error(ErrorCode::BadScope, "unknown scope variable '" + name + "'");
        if (schema.variable(*idx).role != Role::Protected)
            throw Error(ErrorCode::BadScope, "scope variable '" + name + "' is not protected");
        if (!scoped.insert(*idx).second) throw Error(ErrorCode::BadScope, "scope variable '" + name + "' repeated");
    }
    const auto& prot = schema.protected_indices();
    if (scoped.size() == prot.size())
        throw Error(ErrorCode::EmptyScopeCellSchema, "scope covers every protected variable; nothing left to equalize");

    // Scope positions within the protected list, schema order.
    std::vector<std::size_t> positions;
    for (std::size_t k = 0; k < prot.size(); ++k)
        if (scoped.count(prot[k])) {
            positions.push_back(k);
            names_.push_back(schema.variable(prot[k]).name);
        }

    cell_count_ = 1;
    for (auto k : positions) cell_count_ *= schema.variable(prot[k]).levels.size();
    labels_.assign(cell_count_, {});
    cell_of_w_.resize(schema.w_size());
    for (std::size_t w = 0; w < schema.w_size(); ++w) {
        const auto levels = schema.decode_w(w);
        std::size_t g = 0;
        std::string label;
        for (auto k : positions) {
            const auto& var = schema.variable(prot[k]);
            g = g * var.levels.size() + levels[k];
            if (!label.empty()) label += ',';
            label += var.name + "=" + var.levels[levels[k]];
        }
        cell_of_w_[w] = g;
        labels_[g] = label;
    }
}

ScopePartition resolve_scope(const VariableSchema& schema, const std::optional<ScopeSpec>& scope) {
    return scope ? ScopePartition(schema, *scope) : ScopePartition(schema);
}

std::string FeasibilityReport::render(const VariableSchema& schema) const {
    std::ostringstream out;
    if (feasible()) {
        out << "feasible: no structural zeros block the insensitivity constraint\n";
        return out.str();
    }
    out << "infeasible: " << infeasible_pairs.size() << " (outcome, protected) pair(s) have zero mass"
        << " but a positive required mass\n";
    out.precision(6);
    for (const auto& p : infeasible_pairs)
        out << "  outcome=" << schema.s_label(p.s) << "  " << schema.w_label(p.w) << "  required=" << p.demanded
            << "  actual=" << p.actual << "\n";
    return out.str();
}

namespace {

// Marginals shared by feasibility, equalization and verification.
struct ScopedMarginals {
    std::size_t s_size;
    std::size_t w_size;
    std::vector<double> sw;          // Pr(s, w), index s * |W| + w
    std::vector<double> w;           // Pr(w)
    std::vector<double> g;           // Pr(g)
    std::vector<double> s_given_g;   // Pr(s | g), index s * |G| + g; 0 when Pr(g) = 0

    double outcome_share(std::size_t s, std::size_t gi) const { return s_given_g[s * g.size() + gi]; }
};

ScopedMarginals scoped_marginals(const JointDistribution& dist, const ScopePartition& part) {
    const auto& schema = dist.schema();
    ScopedMarginals m{schema.s_size(), schema.w_size(), marginal(dist, {Axis::S, Axis::W}).values,
                      marginal(dist, {Axis::W}).values, std::vector<double>(part.cell_count(), 0.0),
                      std::vector<double>(schema.s_size() * part.cell_count(), 0.0)};
    for (std::size_t w = 0; w < m.w_size; ++w) m.g[part.cell_of(w)] += m.w[w];
    const auto gn = part.cell_count();
    for (std::size_t s = 0; s < m.s_size; ++s)
        for (std::size_t w = 0; w < m.w_size; ++w) m.s_given_g[s * gn + part.cell_of(w)] += m.sw[s * m.w_size + w];
    for (std::size_t s = 0; s < m.s_size; ++s)
        for (std::size_t gi = 0; gi < gn; ++gi) {
            auto& v = m.s_given_g[s * gn + gi];
            v = m.g[gi] > 0.0 ? v / m.g[gi] : 0.0;
        }
    return m;
}

FeasibilityReport check(const ScopedMarginals& m, const ScopePartition& part) {
    FeasibilityReport report;
    for (std::size_t s = 0; s < m.s_size; ++s)
        for (std::size_t w = 0; w < m.w_size; ++w) {
            const double share = m.outcome_share(s, part.cell_of(w));
            if (m.sw[s * m.w_size + w] == 0.0 && share > 0.0 && m.w[w] > 0.0)
                report.infeasible_pairs.push_back({s, w, share * m.w[w], 0.0});
        }
    return report;
}

InsensitivityReport verify(const JointDistribution& dist, double tol, const ScopePartition& part) {
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "verification tolerance must be positive");
    const auto m = scoped_marginals(dist, part);
    InsensitivityReport r;
    r.cell_violation.assign(part.cell_count(), 0.0);
    for (std::size_t s = 0; s < m.s_size; ++s)
        for (std::size_t w = 0; w < m.w_size; ++w) {
            const auto gi = part.cell_of(w);
            const double pg = m.g[gi];
            if (pg <= 0.0) continue;
            const double residual = std::abs(m.sw[s * m.w_size + w] / pg - m.outcome_share(s, gi) * (m.w[w] / pg));
            r.cell_violation[gi] = std::max(r.cell_violation[gi], residual);
            if (residual > r.max_violation) {
                r.max_violation = residual;
                r.worst_s = s;
                r.worst_w = w;
            }
        }
    r.pass = r.max_violation <= tol;
    return r;
}

}  // namespace

FeasibilityReport feasibility_check(const JointDistribution& dist) {
    const ScopePartition part(dist.schema());
    return check(scoped_marginals(dist, part), part);
}

FeasibilityReport feasibility_check(const JointDistribution& dist, const ScopeSpec& scope) {
    const ScopePartition part(dist.schema(), scope);
    return check(scoped_marginals(dist, part), part);
}

JointDistribution outcome_equalize(const JointDistribution& dist, const std::optional<ScopeSpec>& scope) {
    const auto& schema = dist.schema();
    const auto part = resolve_scope(schema, scope);
    const auto m = scoped_marginals(dist, part);
    auto report = check(m, part);
    if (!report.feasible())
        throw InfeasibleError(std::move(report), part.scoped()
                                                     ? "structural zeros block equalization inside a scope cell"
                                                     : "structural zeros block equalization; supply a scope");

    std::vector<double> out(dist.mass().begin(), dist.mass().end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] == 0.0) continue;
        const auto c = schema.cell_of(i);
        // Pr(s|g) / Pr(s|w) written as Pr(s|g) Pr(w) / Pr(s, w); Pr(s, w) > 0 here.
        out[i] *= m.outcome_share(c.s, part.cell_of(c.w)) * m.w[c.w] / m.sw[c.s * m.w_size + c.w];
    }
    return JointDistribution(schema, std::move(out));
}

InsensitivityReport verify_insensitivity(const JointDistribution& dist, double tol) {
    return verify(dist, tol, ScopePartition(dist.schema()));
}

InsensitivityReport verify_insensitivity(const JointDistribution& dist, double tol, const ScopeSpec& scope) {
    return verify(dist, tol, ScopePartition(dist.schema(), scope));
}

double information_cost(const JointDistribution& original, const JointDistribution& equalized) {
    return kl_divergence(equalized, original);
}

}  // namespace decorr
