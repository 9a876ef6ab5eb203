#include "decorr/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "decorr/error.hpp"
#include "decorr/outcome_equal.hpp"

namespace decorr {

void validate(const ThresholdPolicy& policy, const VariableSchema& schema) {
    if (policy.target_outcome >= schema.s_size())
        throw Error(ErrorCode::BadPolicy, "target outcome index out of range");
    if (!(policy.tau >= 0.0 && policy.tau <= 1.0)) throw Error(ErrorCode::BadPolicy, "tau must lie in [0, 1]");
}

ThresholdPolicy make_policy(const VariableSchema& schema, std::string_view target_label, double tau) {
    const auto level = schema.find_level(schema.outcome_index(), target_label);
    if (!level) throw Error(ErrorCode::BadPolicy, "'" + std::string(target_label) + "' is not an outcome level");
    ThresholdPolicy p{*level, tau};
    validate(p, schema);
    return p;
}

AllocationRates allocation_rates(const JointDistribution& scores, const JointDistribution& population,
                                 const ThresholdPolicy& policy) {
    if (!(scores.schema() == population.schema()))
        throw Error(ErrorCode::SchemaMismatch, "score and population distributions use different schemas");
    const auto& schema = scores.schema();
    validate(policy, schema);

    const Table pop_uw = marginal(population, {Axis::U, Axis::W});
    const Table pop_w = marginal(population, {Axis::W});
    const Table score_uw = marginal(scores, {Axis::U, Axis::W});

    AllocationRates r;
    r.rate.assign(schema.w_size(), std::nullopt);
    for (std::size_t w = 0; w < schema.w_size(); ++w) {
        const double group = pop_w.at({0, 0, w});
        if (group <= 0.0) continue;
        double rate = 0.0;
        for (std::size_t u = 0; u < schema.u_size(); ++u) {
            const Cell cell{policy.target_outcome, u, w};
            const double evidence = score_uw.at(cell);
            if (evidence <= 0.0) {
                ++r.undefined_cells;
                continue;
            }
            if (scores.at(cell) / evidence >= policy.tau) rate += pop_uw.at(cell) / group;
        }
        r.rate[w] = std::min(rate, 1.0);
    }
    return r;
}

namespace {

double max_gap(const AllocationRates& r) {
    double lo = 1.0, hi = 0.0;
    bool any = false;
    for (const auto& v : r.rate)
        if (v) {
            any = true;
            lo = std::min(lo, *v);
            hi = std::max(hi, *v);
        }
    return any ? hi - lo : 0.0;
}

std::string format_nats(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

double policy_disparity(const JointDistribution& dist, const ThresholdPolicy& policy) {
    return max_gap(allocation_rates(dist, dist, policy));
}

AuditReport audit(const JointDistribution& original, const JointDistribution& equalized,
                  const std::optional<ThresholdPolicy>& policy) {
    if (!(original.schema() == equalized.schema()))
        throw Error(ErrorCode::SchemaMismatch, "original and equalized distributions use different schemas");
    AuditReport report;
    report.mi_before = mutual_information(original, Axis::S, Axis::W);
    report.mi_after = mutual_information(equalized, Axis::S, Axis::W);
    report.information_cost = information_cost(original, equalized);
    if (policy) {
        PolicyAudit pa{*policy, allocation_rates(original, original, *policy),
                       allocation_rates(equalized, original, *policy), 0.0, 0.0};
        pa.disparity_original = max_gap(pa.original);
        pa.disparity_equalized = max_gap(pa.equalized);
        report.policy = std::move(pa);
    }
    report.chernoff_stein_note =
        "Chernoff-Stein: an optimal test telling n samples of the equalized joint apart from the original has "
        "miss probability decaying like exp(-n * " +
        format_nats(report.information_cost) + "); the cost is the per-sample error exponent in nats.";
    return report;
}

nlohmann::json audit_to_json(const AuditReport& report, const VariableSchema& schema) {
    using nlohmann::json;
    json doc{{"mi_before_nats", report.mi_before},
             {"mi_after_nats", report.mi_after},
             {"information_cost_nats", report.information_cost},
             {"chernoff_stein_note", report.chernoff_stein_note},
             {"joint_property",
              "mi_after measures I(S;W) of the equalized joint; it is exact for the joint, not for decisions"}};
    if (report.policy) {
        const auto& p = *report.policy;
        auto rates = [&](const AllocationRates& r) {
            json groups = json::object();
            for (std::size_t w = 0; w < r.rate.size(); ++w)
                groups[schema.w_label(w)] = r.rate[w] ? json(*r.rate[w]) : json(nullptr);
            return groups;
        };
        doc["policy"] = {
            {"target", schema.s_label(p.policy.target_outcome)},
            {"tau", p.policy.tau},
            {"population_weights", "Pr(u|w) from the original distribution"},
            {"note", "threshold-policy disparity is measured, not guaranteed by equalization"},
            {"original", {{"rates", rates(p.original)},
                          {"disparity", p.disparity_original},
                          {"undefined_cells", p.original.undefined_cells}}},
            {"equalized", {{"rates", rates(p.equalized)},
                           {"disparity", p.disparity_equalized},
                           {"undefined_cells", p.equalized.undefined_cells}}},
        };
    }
    return doc;
}

std::string render_audit(const AuditReport& report, const VariableSchema& schema) {
    std::ostringstream out;
    char line[256];
    out << "joint independence of outcome and protected attributes\n";
    std::snprintf(line, sizeof line, "  %-28s %.6g nats\n", "I(S;W) original", report.mi_before);
    out << line;
    std::snprintf(line, sizeof line, "  %-28s %.6g nats\n", "I(S;W) equalized", report.mi_after);
    out << line;
    std::snprintf(line, sizeof line, "  %-28s %.6g nats\n", "information cost KL(X||P)", report.information_cost);
    out << line;
    if (report.policy) {
        const auto& p = *report.policy;
        out << "threshold policy: allocate when Pr(" << schema.s_label(p.policy.target_outcome) << " | u, w) >= "
            << p.policy.tau << " (measured, not guaranteed)\n";
        std::snprintf(line, sizeof line, "  %-28s %10s %10s\n", "group", "original", "equalized");
        out << line;
        auto fmt = [](const std::optional<double>& v) {
            char b[32];
            if (v)
                std::snprintf(b, sizeof b, "%.6f", *v);
            else
                std::snprintf(b, sizeof b, "n/a");
            return std::string(b);
        };
        for (std::size_t w = 0; w < schema.w_size(); ++w) {
            std::snprintf(line, sizeof line, "  %-28s %10s %10s\n", schema.w_label(w).c_str(),
                          fmt(p.original.rate[w]).c_str(), fmt(p.equalized.rate[w]).c_str());
            out << line;
        }
        std::snprintf(line, sizeof line, "  %-28s %10.6f %10.6f\n", "disparity (max gap)", p.disparity_original,
                      p.disparity_equalized);
        out << line;
        if (p.original.undefined_cells || p.equalized.undefined_cells)
            out << "  undefined conditionals excluded: " << p.original.undefined_cells << " original, "
                << p.equalized.undefined_cells << " equalized\n";
    }
    out << report.chernoff_stein_note << "\n";
    return out.str();
}

}  // namespace decorr
