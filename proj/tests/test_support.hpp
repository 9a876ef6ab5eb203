#pragma once

// Fixtures and independent reference computations shared by the test binaries.
// Nothing here calls into the equalization code path.

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "decorr/distribution.hpp"
#include "decorr/random.hpp"
#include "decorr/serialization.hpp"
#include "decorr/synth.hpp"

namespace decorr::testing {

inline std::filesystem::path data_dir() { return DECORR_DATA_DIR; }

inline JointDistribution load_fixture(const std::string& name) {
    return joint_from_json(read_json_file(data_dir() / name));
}

// s in {s0, s1}, no unprotected variable, group in {a, b}.
// Pr(s1, a) = 0.4, Pr(s0, a) = 0.1, Pr(s1, b) = 0.2, Pr(s0, b) = 0.3.
inline JointDistribution fixture_2x1x2() { return load_fixture("fixture_2x1x2.joint.json"); }

// care x risk x sex x race with Pr(care, male, .) = 0.
inline JointDistribution prenatal() { return load_fixture("prenatal.joint.json"); }

inline SynthConfig playground() { return synth_config_from_json(read_json_file(data_dir() / "playground.synth.json")); }

inline VariableSchema generic_schema(std::size_t ns, std::size_t nu, std::size_t nw) {
    auto levels = [](std::size_t n, const std::string& prefix) {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
        return out;
    };
    std::vector<Variable> vars{{"S", Role::Outcome, levels(ns, "s")}};
    if (nu > 1) vars.push_back({"U", Role::Unprotected, levels(nu, "u")});
    vars.push_back({"W", Role::Protected, levels(nw, "w")});
    return VariableSchema(vars);
}

// Full-support joint drawn uniformly from the simplex.
inline JointDistribution random_joint(Rng& rng, std::size_t ns, std::size_t nu, std::size_t nw) {
    const auto schema = generic_schema(ns, nu, nw);
    return JointDistribution(schema, dirichlet_uniform(rng, schema.cell_count()));
}

inline JointDistribution product_joint(Rng& rng, std::size_t ns, std::size_t nu, std::size_t nw) {
    const auto schema = generic_schema(ns, nu, nw);
    const auto a = dirichlet_uniform(rng, ns), b = dirichlet_uniform(rng, nu), c = dirichlet_uniform(rng, nw);
    std::vector<double> mass(schema.cell_count());
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t u = 0; u < nu; ++u)
            for (std::size_t w = 0; w < nw; ++w) mass[schema.flat_index({s, u, w})] = a[s] * b[u] * c[w];
    return JointDistribution(schema, mass);
}

// Direct evaluation of sum p ln(p / q) over matching cells.
inline double reference_kl(const std::vector<double>& p, const std::vector<double>& q) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0.0) sum += p[i] * std::log(p[i] / q[i]);
    return sum;
}

// Enumerates Pr(s, w) by looping over every cell.
inline std::vector<std::vector<double>> reference_sw(const JointDistribution& d) {
    const auto& sc = d.schema();
    std::vector<std::vector<double>> sw(sc.s_size(), std::vector<double>(sc.w_size(), 0.0));
    for (std::size_t s = 0; s < sc.s_size(); ++s)
        for (std::size_t u = 0; u < sc.u_size(); ++u)
            for (std::size_t w = 0; w < sc.w_size(); ++w) sw[s][w] += d.at(s, u, w);
    return sw;
}

// A random point of the feasible polytope: each (s, w) cell's u-vector is a
// uniform simplex draw scaled to Pr(s) Pr(w).
inline std::vector<double> feasible_sample(Rng& rng, const JointDistribution& d) {
    const auto& sc = d.schema();
    const auto sw = reference_sw(d);
    std::vector<double> ps(sc.s_size(), 0.0), pw(sc.w_size(), 0.0);
    for (std::size_t s = 0; s < sc.s_size(); ++s)
        for (std::size_t w = 0; w < sc.w_size(); ++w) {
            ps[s] += sw[s][w];
            pw[w] += sw[s][w];
        }
    std::vector<double> q(sc.cell_count(), 0.0);
    for (std::size_t s = 0; s < sc.s_size(); ++s)
        for (std::size_t w = 0; w < sc.w_size(); ++w) {
            const auto draw = dirichlet_uniform(rng, sc.u_size());
            for (std::size_t u = 0; u < sc.u_size(); ++u) q[sc.flat_index({s, u, w})] = ps[s] * pw[w] * draw[u];
        }
    return q;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double total_variation(std::span<const double> a, std::span<const double> b) {
    double t = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) t += std::abs(a[i] - b[i]);
    return 0.5 * t;
}

}  // namespace decorr::testing
