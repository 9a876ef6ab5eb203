#include "decorr/distribution.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "decorr/error.hpp"

namespace decorr {

JointDistribution::JointDistribution(VariableSchema schema, std::vector<double> mass)
    : schema_(std::move(schema)), mass_(std::move(mass)) {
    if (mass_.size() != schema_.cell_count())
        throw Error(ErrorCode::InvalidTable, "expected " + std::to_string(schema_.cell_count()) +
                                                 " cells, got " + std::to_string(mass_.size()));
    double total = 0.0;
    for (std::size_t i = 0; i < mass_.size(); ++i) {
        if (!(mass_[i] >= 0.0) || !std::isfinite(mass_[i]))
            throw Error(ErrorCode::NegativeMass, "cell " + std::to_string(i) + " has mass " +
                                                     std::to_string(mass_[i]));
        total += mass_[i];
    }
    if (std::abs(total - 1.0) > kNormalizationTolerance)
        throw Error(ErrorCode::NotNormalized, "masses sum to " + std::to_string(total));
}

JointDistribution from_table(const VariableSchema& schema,
                             std::span<const std::pair<Assignment, double>> entries) {
    std::vector<double> mass(schema.cell_count(), 0.0);
    std::vector<bool> seen(schema.cell_count(), false);
    for (const auto& [assignment, p] : entries) {
        const auto flat = schema.flat_index(schema.cell_of(assignment));
        if (seen[flat]) throw Error(ErrorCode::DuplicateCell, "cell listed twice (flat index " +
                                                                  std::to_string(flat) + ")");
        seen[flat] = true;
        mass[flat] = p;
    }
    return JointDistribution(schema, std::move(mass));
}

Table marginal(const JointDistribution& dist, AxisSet keep) {
    if (keep.empty()) throw Error(ErrorCode::EmptyKeepSet, "marginal needs at least one axis");
    const auto& schema = dist.schema();
    Table t;
    t.axes = keep;
    t.extent = {keep.contains(Axis::S) ? schema.s_size() : 1, keep.contains(Axis::U) ? schema.u_size() : 1,
                keep.contains(Axis::W) ? schema.w_size() : 1};
    t.values.assign(t.extent[0] * t.extent[1] * t.extent[2], 0.0);
    const auto mass = dist.mass();
    for (std::size_t i = 0; i < mass.size(); ++i) t.values[t.index(schema.cell_of(i))] += mass[i];
    return t;
}

ConditionalTable conditional(const JointDistribution& dist, AxisSet target, AxisSet given) {
    if (target.empty() || given.empty())
        throw Error(ErrorCode::EmptyKeepSet, "conditional needs nonempty target and given axes");
    if (target.intersects(given)) throw Error(ErrorCode::OverlappingAxes, "target and given share an axis");

    ConditionalTable c{target, given, marginal(dist, target | given), marginal(dist, given), {}};
    c.values.resize(c.joint.values.size());
    for (std::size_t s = 0; s < c.joint.extent[0]; ++s)
        for (std::size_t u = 0; u < c.joint.extent[1]; ++u)
            for (std::size_t w = 0; w < c.joint.extent[2]; ++w) {
                const Cell cell{s, u, w};
                const double evidence = c.evidence.at(cell);
                c.values[c.joint.index(cell)] = evidence > 0.0 ? c.joint.at(cell) / evidence
                                                               : std::numeric_limits<double>::quiet_NaN();
            }
    return c;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size())
        throw Error(ErrorCode::SchemaMismatch, "tables have different sizes");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0)
            throw Error(ErrorCode::InfiniteDivergence, "p > 0 where q = 0 at cell " + std::to_string(i));
        sum += p[i] * std::log(p[i] / q[i]);
    }
    // Rounding can leave a tiny negative value when p and q agree.
    return sum < 0.0 ? 0.0 : sum;
}

double kl_divergence(const JointDistribution& p, const JointDistribution& q) {
    if (!(p.schema() == q.schema())) throw Error(ErrorCode::SchemaMismatch, "distributions use different schemas");
    return kl_divergence(p.mass(), q.mass());
}

double mutual_information(const JointDistribution& dist, Axis x, Axis y) {
    if (x == y) throw Error(ErrorCode::SameAxis, "mutual information needs two distinct axes");
    const Table joint = marginal(dist, {x, y});
    const Table mx = marginal(dist, {x});
    const Table my = marginal(dist, {y});
    std::vector<double> product(joint.values.size());
    for (std::size_t s = 0; s < joint.extent[0]; ++s)
        for (std::size_t u = 0; u < joint.extent[1]; ++u)
            for (std::size_t w = 0; w < joint.extent[2]; ++w) {
                const Cell cell{s, u, w};
                product[joint.index(cell)] = mx.at(cell) * my.at(cell);
            }
    return kl_divergence(joint.values, product);
}

}  // namespace decorr
