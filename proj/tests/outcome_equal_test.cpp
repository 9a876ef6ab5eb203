#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "decorr/outcome_equal.hpp"
#include "test_support.hpp"

using namespace decorr;
using namespace decorr::testing;

namespace {

const ScopeSpec kBySex{{"sex"}};

// Pr(w) = (0.5, 0.5), Pr(1 | a) = 0.8, Pr(1 | b) = 0.4, and a u-split that
// differs across every (s, w) pair.
JointDistribution two_by_two_by_two() {
    const auto schema = generic_schema(2, 2, 2);
    std::vector<double> m(8);
    auto put = [&](std::size_t s, std::size_t w, double sw, double u0_share) {
        m[schema.flat_index({s, 0, w})] = sw * u0_share;
        m[schema.flat_index({s, 1, w})] = sw * (1.0 - u0_share);
    };
    put(1, 0, 0.5 * 0.8, 0.3);
    put(0, 0, 0.5 * 0.2, 0.9);
    put(1, 1, 0.5 * 0.4, 0.6);
    put(0, 1, 0.5 * 0.6, 0.15);
    return JointDistribution(schema, m);
}

}  // namespace

TEST_CASE("feasibility_check") {
    Rng rng(1);
    CHECK(feasibility_check(random_joint(rng, 3, 2, 3)).feasible());

    SUBCASE("prenatal structural zeros") {
        const auto d = prenatal();
        const auto r = feasibility_check(d);
        REQUIRE_FALSE(r.feasible());
        REQUIRE(r.infeasible_pairs.size() == 2);
        for (const auto& p : r.infeasible_pairs) {
            CHECK(d.schema().s_label(p.s) == "care");
            CHECK(d.schema().w_label(p.w).rfind("sex=male,", 0) == 0);
            CHECK(p.actual == 0.0);
        }
        // required mass = Pr(care) Pr(male, r1) = 0.21 * 0.3
        CHECK(r.infeasible_pairs[0].demanded == doctest::Approx(0.21 * 0.3));
        CHECK(r.render(d.schema()).find("outcome=care  sex=male,race=r2") != std::string::npos);

        CHECK(feasibility_check(d, kBySex).feasible());
    }
    SUBCASE("outcome level that never occurs is vacuous") {
        const auto schema = generic_schema(3, 2, 2);
        std::vector<double> m(schema.cell_count(), 0.0);
        for (std::size_t s = 0; s < 2; ++s)
            for (std::size_t u = 0; u < 2; ++u)
                for (std::size_t w = 0; w < 2; ++w) m[schema.flat_index({s, u, w})] = 0.125;
        CHECK(feasibility_check(JointDistribution(schema, m)).feasible());
    }
    SUBCASE("protected cell that never occurs is vacuous") {
        const auto schema = generic_schema(2, 1, 3);
        CHECK(feasibility_check(JointDistribution(schema, {0.2, 0.3, 0.0, 0.4, 0.1, 0.0})).feasible());
    }
}

TEST_CASE("outcome_equalize on the 2x1x2 fixture gives the product of marginals") {
    const auto d = fixture_2x1x2();
    const auto x = outcome_equalize(d);
    // s0: a, b ; s1: a, b
    const std::vector<double> expected{0.2, 0.2, 0.3, 0.3};
    CHECK(max_abs_diff(x.mass(), expected) <= 1e-12);
}

TEST_CASE("outcome_equalize leaves an already independent joint unchanged") {
    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto d = product_joint(rng, 2 + trial % 3, 1 + trial % 3, 2 + trial % 3);
        CHECK(max_abs_diff(outcome_equalize(d).mass(), d.mass()) <= 1e-12);
    }
    // U may depend on W; only the (S, W) marginal matters
    const auto schema = generic_schema(2, 2, 2);
    std::vector<double> m(8);
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t w = 0; w < 2; ++w) {
            const double sw = (s ? 0.7 : 0.3) * (w ? 0.6 : 0.4);
            const double split = w ? 0.9 : 0.2;
            m[schema.flat_index({s, 0, w})] = sw * split;
            m[schema.flat_index({s, 1, w})] = sw * (1 - split);
        }
    const JointDistribution dep(schema, m);
    CHECK(max_abs_diff(outcome_equalize(dep).mass(), dep.mass()) <= 1e-12);
}

TEST_CASE("outcome_equalize agrees with the brute-force oracle on a 2x2x2 instance") {
    const auto d = two_by_two_by_two();
    const auto x = outcome_equalize(d);
    const auto oracle = brute_force_project(d, {200, 64, 99});
    CHECK(max_abs_diff(x.mass(), oracle.mass()) <= 1e-6);

    // Pr_X(u | s, w) = Pr(u | s, w)
    const auto cx = conditional(x, {Axis::U}, {Axis::S, Axis::W});
    const auto cd = conditional(d, {Axis::U}, {Axis::S, Axis::W});
    CHECK(max_abs_diff(cx.values, cd.values) <= 1e-12);
}

TEST_CASE("outcome_equalize errors") {
    const auto d = prenatal();
    try {
        outcome_equalize(d);
        FAIL("expected Infeasible");
    } catch (const InfeasibleError& e) {
        CHECK(e.code() == ErrorCode::Infeasible);
        CHECK(e.report().infeasible_pairs.size() == 2);
    }
    auto code = [&](const ScopeSpec& scope) {
        try {
            outcome_equalize(d, scope);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::IoError;
    };
    CHECK(code(ScopeSpec{{"sex", "race"}}) == ErrorCode::EmptyScopeCellSchema);
    CHECK(code(ScopeSpec{{"risk"}}) == ErrorCode::BadScope);
    CHECK(code(ScopeSpec{{"height"}}) == ErrorCode::BadScope);
    CHECK(code(ScopeSpec{{"sex", "sex"}}) == ErrorCode::BadScope);
}

TEST_CASE("scoped equalization of the prenatal fixture") {
    const auto d = prenatal();
    const auto x = outcome_equalize(d, kBySex);
    const auto& schema = d.schema();

    CHECK(verify_insensitivity(x, 1e-10, kBySex).pass);
    CHECK_FALSE(verify_insensitivity(d, 1e-10, kBySex).pass);

    for (std::size_t i = 0; i < x.mass().size(); ++i) {
        const auto c = schema.cell_of(i);
        const bool male = schema.decode_w(c.w)[0] == 1;
        if (male) CHECK(std::abs(x.mass()[i] - d.mass()[i]) <= 1e-12);
        if (d.mass()[i] == 0.0) CHECK(x.mass()[i] == 0.0);
    }

    // scope-cell masses unchanged
    const auto pw_x = marginal(x, {Axis::W}).values;
    const auto pw_d = marginal(d, {Axis::W}).values;
    CHECK(std::abs((pw_x[0] + pw_x[1]) - (pw_d[0] + pw_d[1])) <= 1e-12);
    CHECK(std::abs((pw_x[2] + pw_x[3]) - (pw_d[2] + pw_d[3])) <= 1e-12);

    // among women, Pr_X(care | race) equals Pr(care | female) = 0.21 / 0.5
    const auto sw = reference_sw(x);
    CHECK(sw[0][0] / pw_x[0] == doctest::Approx(0.42).epsilon(1e-12));
    CHECK(sw[0][1] / pw_x[1] == doctest::Approx(0.42).epsilon(1e-12));
}

TEST_CASE("scoped equalization with random scope cells") {
    Rng rng(31);
    VariableSchema schema({{"y", Role::Outcome, {"0", "1", "2"}},
                           {"g", Role::Protected, {"g0", "g1"}},
                           {"x", Role::Unprotected, {"x0", "x1"}},
                           {"r", Role::Protected, {"r0", "r1", "r2"}}});
    const ScopeSpec scope{{"g"}};
    for (int trial = 0; trial < 100; ++trial) {
        const JointDistribution d(schema, dirichlet_uniform(rng, schema.cell_count()));
        const auto x = outcome_equalize(d, scope);
        CHECK(verify_insensitivity(x, 1e-10, scope).pass);
        const auto pw_x = marginal(x, {Axis::W}).values;
        const auto pw_d = marginal(d, {Axis::W}).values;
        for (std::size_t g = 0; g < 2; ++g) {
            double mx = 0.0, md = 0.0;
            for (std::size_t r = 0; r < 3; ++r) {
                mx += pw_x[g * 3 + r];
                md += pw_d[g * 3 + r];
            }
            CHECK(std::abs(mx - md) <= 1e-12);
        }
    }
}

TEST_CASE("a zero-mass scope cell contributes nothing") {
    VariableSchema schema({{"y", Role::Outcome, {"0", "1"}},
                           {"g", Role::Protected, {"g0", "g1"}},
                           {"r", Role::Protected, {"r0", "r1"}}});
    // w order (g0,r0) (g0,r1) (g1,r0) (g1,r1); g1 empty
    const JointDistribution d(schema, {0.1, 0.3, 0.0, 0.0, 0.4, 0.2, 0.0, 0.0});
    const auto x = outcome_equalize(d, ScopeSpec{{"g"}});
    CHECK(x.at(0, 0, 2) == 0.0);
    CHECK(x.at(1, 0, 3) == 0.0);
    CHECK(verify_insensitivity(x, 1e-10, ScopeSpec{{"g"}}).pass);
    CHECK(max_abs_diff(x.mass(), outcome_equalize(d).mass()) <= 1e-12);
}

TEST_CASE("verify_insensitivity") {
    const auto raw = fixture_2x1x2();
    const auto r = verify_insensitivity(raw, 1e-10);
    CHECK_FALSE(r.pass);
    CHECK(r.max_violation == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(verify_insensitivity(raw, 0.2).pass);
    CHECK(verify_insensitivity(outcome_equalize(raw), 1e-10).pass);

    Rng rng(4);
    CHECK(verify_insensitivity(product_joint(rng, 3, 3, 3), 1e-10).pass);

    try {
        verify_insensitivity(raw, 0.0);
        FAIL("expected InvalidArgument");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidArgument);
    }
}

TEST_CASE("information_cost") {
    const auto raw = fixture_2x1x2();
    const auto x = outcome_equalize(raw);
    // 0.3 ln(0.75) + 0.2 ln(2) + 0.3 ln(1.5) + 0.2 ln(2/3)
    const double hand = 0.3 * std::log(0.75) + 0.2 * std::log(2.0) + 0.3 * std::log(1.5) + 0.2 * std::log(2.0 / 3.0);
    CHECK(hand == doctest::Approx(0.0928713).epsilon(1e-7));
    CHECK(information_cost(raw, x) == doctest::Approx(hand).epsilon(1e-12));
    CHECK(information_cost(raw, x) == kl_divergence(x, raw));

    Rng rng(6);
    const auto p = product_joint(rng, 2, 3, 2);
    CHECK(information_cost(p, outcome_equalize(p)) <= 1e-15);
}

TEST_CASE("closed form beats feasible samples and matches the oracle") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto d = random_joint(rng, 2 + trial % 2, 1 + trial % 3, 2 + (trial / 3) % 2);
        const auto x = outcome_equalize(d);
        const double best = information_cost(d, x);
        for (int k = 0; k < 500; ++k) {
            const auto q = feasible_sample(rng, d);
            CHECK(best <= kl_divergence(q, d.mass()) + 1e-8);
        }
        const auto o = brute_force_project(d, {200, 32, static_cast<std::uint64_t>(trial)});
        CHECK(best <= information_cost(d, o) + 1e-8);
        CHECK(max_abs_diff(o.mass(), x.mass()) <= 1e-6);
    }
}

TEST_CASE("algebraic invariants of the closed form") {
    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = random_joint(rng, 2 + trial % 3, 2 + (trial / 3) % 3, 2 + (trial / 9) % 3);
        const auto x = outcome_equalize(d);

        CHECK(verify_insensitivity(x, 1e-10).pass);
        CHECK(max_abs_diff(marginal(x, {Axis::S}).values, marginal(d, {Axis::S}).values) <= 1e-12);
        CHECK(max_abs_diff(marginal(x, {Axis::W}).values, marginal(d, {Axis::W}).values) <= 1e-12);
        CHECK(max_abs_diff(conditional(x, {Axis::U}, {Axis::S, Axis::W}).values,
                           conditional(d, {Axis::U}, {Axis::S, Axis::W}).values) <= 1e-12);
        CHECK(max_abs_diff(outcome_equalize(x).mass(), x.mass()) <= 1e-12);
        CHECK(mutual_information(x, Axis::S, Axis::W) <= 1e-10);
    }
}

TEST_CASE("fixed point iff mutual information vanishes") {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const bool independent = trial % 2 == 0;
        const auto d = independent ? product_joint(rng, 3, 2, 2) : random_joint(rng, 3, 2, 2);
        const bool fixed = max_abs_diff(outcome_equalize(d).mass(), d.mass()) <= 1e-12;
        const bool zero_mi = mutual_information(d, Axis::S, Axis::W) <= 1e-12;
        CHECK(fixed == zero_mi);
        CHECK(fixed == independent);
    }
}

TEST_CASE("support is preserved when the joint has zeros") {
    Rng rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        const auto schema = generic_schema(2, 3, 3);
        auto m = dirichlet_uniform(rng, schema.cell_count());
        // zero out one u per (s, w) pair, never a whole pair
        for (std::size_t s = 0; s < 2; ++s)
            for (std::size_t w = 0; w < 3; ++w) m[schema.flat_index({s, (s + w + trial) % 3, w})] = 0.0;
        double total = 0.0;
        for (double v : m) total += v;
        for (double& v : m) v /= total;
        const JointDistribution d(schema, m);
        const auto x = outcome_equalize(d);
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] == 0.0) CHECK(x.mass()[i] == 0.0);
        CHECK_NOTHROW(information_cost(d, x));
        CHECK(max_abs_diff(brute_force_project(d, {100, 16, 1}).mass(), x.mass()) <= 1e-6);
    }
}

TEST_CASE("brute_force_project") {
    SUBCASE("2x1x2 fixture is a single feasible point per cell") {
        const auto d = fixture_2x1x2();
        const std::vector<double> expected{0.2, 0.2, 0.3, 0.3};
        CHECK(max_abs_diff(brute_force_project(d).mass(), expected) <= 1e-12);
    }
    SUBCASE("deterministic for a fixed seed") {
        Rng rng(15);
        const auto d = random_joint(rng, 3, 3, 2);
        const auto a = brute_force_project(d, {5, 10, 42});
        const auto b = brute_force_project(d, {5, 10, 42});
        CHECK(std::equal(a.mass().begin(), a.mass().end(), b.mass().begin()));
    }
    SUBCASE("errors") {
        try {
            brute_force_project(prenatal());
            FAIL("expected Infeasible");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Infeasible);
        }
        Rng rng(16);
        const auto big = random_joint(rng, 4, 8, 7);  // 224 cells
        try {
            brute_force_project(big);
            FAIL("expected InstanceTooLarge");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InstanceTooLarge);
        }
    }
}
