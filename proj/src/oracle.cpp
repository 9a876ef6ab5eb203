#include <algorithm>
#include <cmath>
#include <limits>

#include "decorr/outcome_equal.hpp"
#include "decorr/random.hpp"

namespace decorr {

namespace {

double cell_cost(std::span<const double> q, std::span<const double> p) {
    double cost = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] > 0.0) cost += q[i] * std::log(q[i] / p[i]);
    return cost;
}

// Moves mass t from coordinate b to coordinate a, choosing t by bisection on
// the derivative of q_a ln(q_a/p_a) + q_b ln(q_b/p_b) along that direction.
void pair_step(double& qa, double pa, double& qb, double pb) {
    double lo = -qa;
    double hi = qb;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double slope = std::log(std::max(qa + mid, 0.0) / pa) - std::log(std::max(qb - mid, 0.0) / pb);
        if (slope > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    const double t = 0.5 * (lo + hi);
    const double total = qa + qb;
    qa = std::clamp(qa + t, 0.0, total);
    qb = total - qa;
}

}  // namespace

JointDistribution brute_force_project(const JointDistribution& dist, const OracleOptions& options) {
    const auto& schema = dist.schema();
    if (schema.cell_count() > kOracleMaxCells)
        throw Error(ErrorCode::InstanceTooLarge, std::to_string(schema.cell_count()) + " cells exceeds oracle limit of " +
                                                     std::to_string(kOracleMaxCells));
    auto report = feasibility_check(dist);
    if (!report.feasible()) throw InfeasibleError(std::move(report), "oracle requires a feasible instance");

    const auto ps = marginal(dist, {Axis::S}).values;
    const auto pw = marginal(dist, {Axis::W}).values;
    Rng rng(options.seed);

    std::vector<double> out(schema.cell_count(), 0.0);
    for (std::size_t s = 0; s < schema.s_size(); ++s)
        for (std::size_t w = 0; w < schema.w_size(); ++w) {
            const double target = ps[s] * pw[w];
            if (target == 0.0) continue;

            // Cells outside the support of Pr would make the objective infinite.
            std::vector<std::size_t> support;
            std::vector<double> p;
            for (std::size_t u = 0; u < schema.u_size(); ++u)
                if (dist.at(s, u, w) > 0.0) {
                    support.push_back(u);
                    p.push_back(dist.at(s, u, w));
                }

            std::vector<double> best;
            double best_cost = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < std::max<std::size_t>(options.samples, 1); ++k) {
                auto q = dirichlet_uniform(rng, support.size());
                for (auto& v : q) v *= target;
                const double c = cell_cost(q, p);
                if (c < best_cost) {
                    best_cost = c;
                    best = std::move(q);
                }
            }

            for (std::size_t sweep = 0; sweep < options.iterations; ++sweep)
                for (std::size_t a = 0; a < best.size(); ++a)
                    for (std::size_t b = a + 1; b < best.size(); ++b) pair_step(best[a], p[a], best[b], p[b]);

            for (std::size_t k = 0; k < support.size(); ++k) out[schema.flat_index({s, support[k], w})] = best[k];
        }
    return JointDistribution(schema, std::move(out));
}

}  // namespace decorr
