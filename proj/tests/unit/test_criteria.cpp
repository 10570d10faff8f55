#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "json.hpp"
#include "maps.hpp"
#include "models.hpp"
#include "nicholson/criteria.hpp"
#include "nicholson/equilibria.hpp"
#include "nicholson/report.hpp"
#include "oracles.hpp"

using namespace nicholson;

namespace {

bool has_flag(const Verdict& v, const std::string& f) {
    for (const auto& x : v.flags) {
        if (x == f) return true;
    }
    return false;
}

NicholsonModel random_model(std::mt19937_64& g, int m) {
    NicholsonModel model;
    model.delta = oracle::uniform(g, 0.05, 1.0);
    model.beta = parse("1");
    const double a0 = oracle::uniform(g, 0.2, 2.0);
    for (int j = 0; j < m; ++j) {
        const double a = std::uniform_int_distribution<int>(0, 1)(g) ? a0 * oracle::uniform(g, 1.0, 1.45)
                                                                       : oracle::uniform(g, 0.1, 3.0);
        model.pairs.push_back({model.delta * oracle::uniform(g, 0.5, 40.0) / m, a, parse("1"), parse("0.5")});
    }
    if (model.total_recruitment() <= model.delta) return random_model(g, m);
    return model;
}

}  // namespace

TEST(VerdictType, StatusAndMargin) {
    const auto v = Verdict::compare("x", 1.0, Relation::less_equal, 2.0);
    EXPECT_EQ(v.status, Status::holds);
    EXPECT_EQ(v.margin, 1.0);
    EXPECT_EQ(Verdict::compare("x", 2.0, Relation::less, 1.0).status, Status::fails);
    const auto tie = Verdict::compare("x", 1.0 + 5e-13, Relation::less, 1.0);
    EXPECT_EQ(tie.status, Status::boundary);
    EXPECT_FALSE(tie.passes());
    EXPECT_TRUE(Verdict::compare("x", 1.0, Relation::less_equal, 1.0).passes());
    const auto na = Verdict::not_applicable("x", "because");
    EXPECT_EQ(na.status, Status::inapplicable);
    EXPECT_EQ(na.reason, "because");
    EXPECT_FALSE(na.passes());
    EXPECT_EQ(Verdict::compare("x", std::nan(""), Relation::less, 1.0).status, Status::inapplicable);
    EXPECT_EQ(Verdict::compare("x", 0.0, Relation::less, INFINITY).status, Status::holds);
    EXPECT_EQ(to_string(Status::boundary), "boundary");
}

TEST(VerdictType, Conjunction) {
    const auto h = Verdict::compare("a", 0.0, Relation::less, 1.0);
    const auto f = Verdict::compare("b", 2.0, Relation::less, 1.0);
    const auto b = Verdict::compare("c", 1.0, Relation::less_equal, 1.0);
    const auto na = Verdict::not_applicable("d", "r");
    EXPECT_EQ(Conjunction::of({&h, &h}).status, Status::holds);
    EXPECT_EQ(Conjunction::of({&h, &f}).status, Status::fails);
    EXPECT_EQ(Conjunction::of({&h, &b}).status, Status::boundary);
    EXPECT_TRUE(Conjunction::of({&h, &b}).passes);
    EXPECT_EQ(Conjunction::of({&f, &na}).status, Status::inapplicable);
    EXPECT_FALSE(Conjunction::of({&h, &na}).passes);
}

TEST(Extinction, Dichotomy) {
    const auto half = check_extinction(fixtures::single_pair(0.5, 1.0, 1.0));
    EXPECT_EQ(half.attractor.status, Status::holds);
    EXPECT_EQ(half.exponential.status, Status::holds);
    const auto equal = check_extinction(fixtures::single_pair(1.0, 1.0, 1.0));
    EXPECT_EQ(equal.attractor.status, Status::boundary);
    EXPECT_TRUE(equal.attractor.passes());
    EXPECT_EQ(equal.exponential.status, Status::boundary);
    EXPECT_FALSE(equal.exponential.passes());
    EXPECT_EQ(check_extinction(fixtures::example_k5()).attractor.status, Status::fails);
}

TEST(Permanence, Bounds) {
    Aggregates agg;
    agg.p = std::exp(1.0);
    agg.beta_plus = 1.0;
    agg.tau_max = 0.1;
    const auto m = fixtures::single_pair(std::exp(1.0), 1.0, 1.0);
    const auto b = permanence_bounds(m, agg, 1.0);
    ASSERT_TRUE(b.has_value());
    EXPECT_NEAR(b->lower, std::exp(-0.2), 1e-15);
    EXPECT_NEAR(b->upper, std::exp(0.2 * (1.0 + std::exp(1.0))), 1e-14);
    agg.tau_max = 0.0;
    const auto flat = permanence_bounds(m, agg, 1.0);
    EXPECT_EQ(flat->lower, 1.0);
    EXPECT_EQ(flat->upper, 1.0);
    EXPECT_FALSE(permanence_bounds(fixtures::single_pair(0.5, 1.0, 1.0), agg, 1.0).has_value());

    const auto ex = fixtures::example_k5();
    Aggregates e;
    e.p = ex.total_recruitment();
    e.beta_plus = 2.0;
    e.tau_max = 1.0;
    const auto eb = *permanence_bounds(ex, e, 5.0);
    EXPECT_NEAR(eb.lower, 5.0 * std::exp(-0.4), 1e-14);
    EXPECT_NEAR(eb.upper / (5.0 * std::exp(4.0 * (0.1 + e.p))), 1.0, 1e-13);
}

TEST(LocalStability, ZeroZetaAllHold) {
    const auto m = fixtures::single_pair(std::exp(2.0), 1.0, 1.0);
    DelayIntegrals z;
    z.zeta_M = 0.0;
    z.las_lhs = 0.0;
    const auto r = check_local_stability(m, 2.0, z);
    EXPECT_EQ(r.weighted_integral.status, Status::holds);
    EXPECT_EQ(r.uniform.status, Status::holds);
    EXPECT_EQ(r.uniform_weak.status, Status::holds);
    EXPECT_EQ(r.single_pair.status, Status::holds);
}

TEST(LocalStability, ExampleWithThreeHalves) {
    const auto m = fixtures::example_k5();
    DelayIntegrals z;
    z.zeta_M = 1.5;
    z.las_lhs = 1.5 * 0.088;
    const auto r = check_local_stability(m, 5.0, z);
    EXPECT_EQ(r.single_pair.status, Status::inapplicable);
    EXPECT_FALSE(r.single_pair.reason.empty());
    // 1 / (2 delta + K W) = 1 / (0.2 + 5 * 0.088)
    EXPECT_NEAR(r.uniform.rhs, 1.0 / 0.64, 1e-13);
    EXPECT_EQ(r.uniform.status, Status::holds);
    EXPECT_NEAR(r.uniform_weak.rhs, 1.0 / 0.7, 1e-13);
    EXPECT_EQ(r.uniform_weak.status, Status::fails);
    const double product = m.delta * 1.5 * (2.0 + std::log(m.total_recruitment() / m.delta));
    EXPECT_NEAR(product, 0.978, 1e-3);
}

TEST(LocalStability, WithoutEquilibriumIsInapplicable) {
    DelayIntegrals z;
    const auto r = check_local_stability(fixtures::single_pair(0.5, 1.0, 1.0), 1.0, z);
    EXPECT_EQ(r.uniform.status, Status::inapplicable);
    EXPECT_EQ(r.weighted_integral.status, Status::inapplicable);
}

TEST(SinglePairAttractivity, Cases) {
    const auto m = fixtures::single_pair(3.0, 1.0, 1.0);
    EXPECT_EQ(check_ga_m1(m, 0.0).status, Status::holds);
    const auto tie = check_ga_m1(fixtures::single_pair(std::exp(1.0), 1.0, 1.0), std::log(2.0));
    EXPECT_EQ(tie.status, Status::boundary);
    EXPECT_TRUE(tie.passes());
    // constant delays and beta = 1: (e^{delta sigma} - 1) log(p/delta) <= 1
    const double sigma = 0.4;
    const auto c = check_ga_m1(m, sigma);
    EXPECT_NEAR(c.lhs, std::expm1(sigma) * std::log(3.0), 1e-15);
    EXPECT_EQ(check_ga_m1(fixtures::example_k5(), 0.0).status, Status::inapplicable);
    EXPECT_EQ(check_ga_m1(fixtures::single_pair(0.5, 1.0, 1.0), 0.0).status, Status::inapplicable);
}

TEST(SinglePairAsymptoticStability, Cases) {
    const auto zero = check_gas_m1(fixtures::single_pair(3.0, 1.0, 1.0), 0.0);
    EXPECT_EQ(zero.verdict.status, Status::holds);
    EXPECT_EQ(zero.branch, "i");
    EXPECT_TRUE(std::isinf(zero.c));

    const double delta = 0.5;
    const auto m = fixtures::single_pair(delta * std::exp(2.0), 1.0, delta);
    const auto r = check_gas_m1(m, 0.1 / delta);
    EXPECT_NEAR(r.c, 0.2 / (std::exp(0.1) - 1.1), 1e-9);
    EXPECT_NEAR(r.c, 38.678, 1e-3);
    EXPECT_EQ(r.branch, "i");
    EXPECT_NEAR(r.verdict.lhs, 0.4, 1e-15);
    EXPECT_EQ(r.verdict.status, Status::holds);
    EXPECT_EQ(check_gas_m1(fixtures::example_k5(), 1.0).verdict.status, Status::inapplicable);
}

TEST(SinglePairAsymptoticStability, LargeRatioUsesSecondCase) {
    auto g = oracle::rng(99);
    for (int i = 0; i < 100; ++i) {
        const double delta = oracle::uniform(g, 0.01, 1.0);
        const auto m = fixtures::single_pair(delta * std::exp(oracle::uniform(g, 45.0, 200.0)), 1.0, delta);
        const double zeta = oracle::uniform(g, 0.05, 2.0) / delta;
        const auto r = check_gas_m1(m, zeta);
        ASSERT_EQ(r.branch, "ii");
        EXPECT_EQ(r.verdict.status, check_ga_m1(m, zeta).status);
    }
}

TEST(MultiPairAttractivity, ExampleThreshold) {
    const auto m = fixtures::example_k5();
    const double star = 10.0 * std::log(1.2);
    const auto below = check_ga_multi(m, 5.0, star - 1e-6);
    EXPECT_EQ(below.rate_ratio.status, Status::holds);
    EXPECT_NEAR(below.rate_ratio.lhs, 1.25, 1e-15);
    EXPECT_EQ(below.delay_size.status, Status::holds);
    EXPECT_EQ(below.combined.status, Status::holds);
    EXPECT_EQ(check_ga_multi(m, 5.0, star + 1e-6).combined.status, Status::fails);
    EXPECT_EQ(check_ga_multi(m, 5.0, star).delay_size.status, Status::boundary);
    EXPECT_EQ(check_ga_multi(m, 5.0, 0.0).delay_size.status, Status::holds);
    EXPECT_EQ(check_ga_multi(fixtures::single_pair(3.0, 1.0, 1.0), std::log(3.0), 0.1).rate_ratio.lhs, 1.0);
}

TEST(MultiPairAttractivity, NoKThresholdForSmallRecruitmentExample) {
    const auto m = fixtures::example_small_p();
    const double star = 100.0 / 9.0 * std::log(1.0 + 4.0 / (5.0 * std::log(10.0 / 9.0)));
    EXPECT_NEAR(star, 23.90, 0.01);
    EXPECT_EQ(check_ga_multi_no_k(m, star - 1e-6).combined.status, Status::holds);
    EXPECT_EQ(check_ga_multi_no_k(m, star + 1e-6).combined.status, Status::fails);
    EXPECT_EQ(check_ga_multi_no_k(m, 0.0).delay_size.status, Status::holds);
    EXPECT_EQ(check_ga_multi_no_k(m, 23.0).delay_size.status, Status::holds);
}

TEST(ClaimsRoute, ExampleAtSlopeThreshold) {
    const auto m = fixtures::example_k5();
    const auto r = check_claims_route(m, 5.0, 10.0 * std::log(27.0 / 22.0), 1e6, 2001);
    EXPECT_EQ(r.slope.status, Status::boundary);
    EXPECT_TRUE(r.slope.passes());
    EXPECT_NEAR(r.well_defined.lhs, 0.42003, 1e-5);
    EXPECT_EQ(r.well_defined.status, Status::holds);
    EXPECT_EQ(r.schwarzian.status, Status::holds);
    EXPECT_TRUE(r.combined.passes);
    EXPECT_EQ(r.grid, 2001u);
}

TEST(ClaimsRoute, ZeroZetaAndWideRateRatio) {
    const auto z = check_claims_route(fixtures::example_k5(), 5.0, 0.0, 100.0, 101);
    EXPECT_EQ(z.slope.lhs, 0.0);
    EXPECT_EQ(z.well_defined.lhs, 0.0);
    EXPECT_TRUE(z.combined.passes);

    // a+/a- = 10: the rate-ratio condition fails but the sign scan still runs
    const auto w = fixtures::two_pair(2.0, 0.2, 2.0, 2.0, 0.5);
    const double K = carrying_capacity(w).K;
    const auto r = check_claims_route(w, K, 0.2, 50.0, 2001);
    EXPECT_NE(r.schwarzian.status, Status::inapplicable);
    EXPECT_EQ(r.grid, 2001u);
    EXPECT_EQ(check_ga_multi(w, K, 0.2).rate_ratio.status, Status::fails);
}

TEST(CriteriaProperty, ImplicationChain) {
    auto g = oracle::rng(2024);
    int no_k_held = 0;
    int multi_held = 0;
    for (int i = 0; i < 200; ++i) {
        const int m = std::uniform_int_distribution<int>(1, 3)(g);
        const auto model = random_model(g, m);
        const double K = carrying_capacity(model).K;
        const double zeta = oracle::uniform(g, 0.0, 1.0) / model.delta;
        const auto no_k = check_ga_multi_no_k(model, zeta);
        const auto multi = check_ga_multi(model, K, zeta);
        if (no_k.combined.passes) {
            ++no_k_held;
            EXPECT_TRUE(multi.delay_size.passes());
        }
        if (multi.combined.passes) {
            ++multi_held;
            const double x_hi = K * std::exp(2.0 * (model.delta + model.total_recruitment()) * 0.5);
            const auto claims = check_claims_route(model, K, zeta, x_hi, 2001);
            EXPECT_TRUE(claims.combined.passes);
        }
        if (m == 1) {
            EXPECT_EQ(multi.combined.passes, check_ga_m1(model, zeta).passes());
        }
    }
    EXPECT_GT(no_k_held, 10);
    EXPECT_GT(multi_held, 10);
}

TEST(CriteriaProperty, MarginsAreRhsMinusLhs) {
    auto g = oracle::rng(8);
    for (int i = 0; i < 50; ++i) {
        const auto model = random_model(g, 2);
        const double K = carrying_capacity(model).K;
        const double zeta = oracle::uniform(g, 0.0, 3.0);
        const auto multi = check_ga_multi(model, K, zeta);
        const auto no_k = check_ga_multi_no_k(model, zeta);
        for (const Verdict* v : {&multi.rate_ratio, &multi.delay_size, &no_k.delay_size}) {
            EXPECT_NEAR(v->margin, v->rhs - v->lhs, 1e-14);
        }
    }
}

TEST(Assess, ExampleWithOverride) {
    const auto m = fixtures::example_k5();
    BoundOverrides o;
    o.zeta_M = 1.5;
    const auto agg = require_valid(m, o);
    const auto r = assess(m, agg, o, {100.0, 150.0, 501});
    ASSERT_TRUE(r.K.has_value());
    EXPECT_NEAR(*r.K, 5.0, 1e-10);
    EXPECT_FALSE(r.zeta_estimated);
    EXPECT_EQ(r.ga_multi.combined.status, Status::holds);
    EXPECT_EQ(r.local.uniform.status, Status::holds);
    EXPECT_FALSE(has_flag(r.ga_multi.delay_size, "estimated-input"));
    EXPECT_TRUE(has_flag(r.ga_multi.delay_size, "zeta-override-below-sampled"));
    EXPECT_TRUE(r.any_global_attractivity());
    EXPECT_EQ(r.statuses().size(), criterion_names().size());
}

TEST(Assess, SampledZetaCarriesEstimateFlag) {
    const auto m = fixtures::example_k5();
    const auto agg = require_valid(m);
    const auto r = assess(m, agg, {}, {100.0, 150.0, 501});
    EXPECT_TRUE(r.zeta_estimated);
    EXPECT_TRUE(has_flag(r.ga_multi.delay_size, "estimated-input"));
    EXPECT_TRUE(has_flag(r.claims.slope, "estimated-input"));
    EXPECT_FALSE(has_flag(r.extinction.attractor, "estimated-input"));
}

TEST(Assess, ExtinctionRegimeMarksEquilibriumCriteriaInapplicable) {
    const auto m = fixtures::single_pair(0.05, 1.0, 0.1);
    const auto agg = require_valid(m);
    const auto r = assess(m, agg, {}, {10.0, 20.0, 101});
    EXPECT_EQ(r.extinction.attractor.status, Status::holds);
    EXPECT_FALSE(r.K.has_value());
    EXPECT_FALSE(r.permanence.has_value());
    for (const Verdict* v : {&r.local.uniform, &r.ga_single_pair, &r.ga_multi.delay_size, &r.claims.slope}) {
        EXPECT_EQ(v->status, Status::inapplicable) << v->name;
        EXPECT_FALSE(v->reason.empty());
    }
    EXPECT_EQ(r.passing_global_criteria(), std::vector<std::string>{"extinction"});
}

TEST(Report, JsonHasEveryCriterionAndIsStable) {
    const auto m = fixtures::example_k5();
    BoundOverrides o;
    o.zeta_M = 1.5;
    const auto agg = require_valid(m, o);
    const auto r = assess(m, agg, o, {100.0, 150.0, 501});
    const auto text = report_to_json(r);
    EXPECT_EQ(text, report_to_json(r));
    const auto j = nlohmann::json::parse(text);
    for (const auto& name : criterion_names()) {
        ASSERT_TRUE(j["criteria"].contains(name)) << name;
        EXPECT_TRUE(j["criteria"][name].contains("status"));
    }
    const auto& d = j["criteria"]["delay_size"];
    for (const char* key : {"lhs", "rhs", "margin", "inputs", "flags", "display"}) EXPECT_TRUE(d.contains(key)) << key;
    EXPECT_EQ(j["K"].get<double>(), *r.K);
    EXPECT_EQ(j["criteria"]["local_stability_single_pair"]["status"], "inapplicable");
    EXPECT_TRUE(j["criteria"]["local_stability_single_pair"].contains("reason"));
    EXPECT_EQ(j["criteria"]["local_stability_single_pair"]["lhs"], "nan");
}
