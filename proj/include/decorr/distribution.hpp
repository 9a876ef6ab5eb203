#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "decorr/schema.hpp"

namespace decorr {

inline constexpr double kNormalizationTolerance = 1e-9;

enum class Axis : std::uint8_t { S = 1, U = 2, W = 4 };

class AxisSet {
public:
    constexpr AxisSet() = default;
    constexpr AxisSet(std::initializer_list<Axis> axes) {
        for (auto a : axes) bits_ |= static_cast<std::uint8_t>(a);
    }

    constexpr bool contains(Axis a) const noexcept { return bits_ & static_cast<std::uint8_t>(a); }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    constexpr bool intersects(AxisSet other) const noexcept { return (bits_ & other.bits_) != 0; }
    constexpr AxisSet operator|(AxisSet other) const noexcept { return from_bits(bits_ | other.bits_); }
    constexpr bool operator==(const AxisSet&) const = default;

private:
    static constexpr AxisSet from_bits(unsigned bits) {
        AxisSet s;
        s.bits_ = static_cast<std::uint8_t>(bits);
        return s;
    }
    std::uint8_t bits_ = 0;
};

// Probability table over a subset of the (S, U, W) axes. Dropped axes have
// extent 1, and the coordinate passed for them to at() is ignored.
struct Table {
    AxisSet axes;
    std::array<std::size_t, 3> extent{1, 1, 1};
    std::vector<double> values;

    std::size_t index(const Cell& c) const noexcept {
        const std::size_t s = axes.contains(Axis::S) ? c.s : 0;
        const std::size_t u = axes.contains(Axis::U) ? c.u : 0;
        const std::size_t w = axes.contains(Axis::W) ? c.w : 0;
        return (s * extent[1] + u) * extent[2] + w;
    }
    double at(const Cell& c) const noexcept { return values[index(c)]; }
};

// Pr(target | given). Conditioning cells with zero marginal mass are undefined;
// their entries hold NaN and defined() reports false.
struct ConditionalTable {
    AxisSet target;
    AxisSet given;
    Table joint;     // marginal over target | given
    Table evidence;  // marginal over given
    std::vector<double> values;

    bool defined(const Cell& c) const noexcept { return evidence.at(c) > 0.0; }
    double at(const Cell& c) const noexcept { return values[joint.index(c)]; }
};

// Normalized probability tensor over flattened (s, u, w) cells. Immutable.
class JointDistribution {
public:
    // Throws NegativeMass, NotNormalized, or InvalidTable when the mass vector
    // does not match the schema's cell count.
    JointDistribution(VariableSchema schema, std::vector<double> mass);

    const VariableSchema& schema() const noexcept { return schema_; }
    std::span<const double> mass() const noexcept { return mass_; }
    double at(const Cell& c) const noexcept { return mass_[schema_.flat_index(c)]; }
    double at(std::size_t s, std::size_t u, std::size_t w) const noexcept { return at(Cell{s, u, w}); }

private:
    VariableSchema schema_;
    std::vector<double> mass_;
};

// Unlisted cells default to zero.
JointDistribution from_table(const VariableSchema& schema,
                             std::span<const std::pair<Assignment, double>> entries);

Table marginal(const JointDistribution& dist, AxisSet keep);

ConditionalTable conditional(const JointDistribution& dist, AxisSet target, AxisSet given);

// Sum_y p(y) ln(p(y)/q(y)) in nats with 0 ln(0/q) = 0.
double kl_divergence(std::span<const double> p, std::span<const double> q);
double kl_divergence(const JointDistribution& p, const JointDistribution& q);

double mutual_information(const JointDistribution& dist, Axis x, Axis y);

}  // namespace decorr
