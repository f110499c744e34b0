#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fracbin/params.hpp"

using namespace fracbin;

namespace {

bool has_violation(const std::vector<Violation>& v, const std::string& needle) {
    for (const auto& x : v)
        if (x.inequality.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("admissibility bound on c") {
    // independently evaluated closed form, min{1-p, .} branch active on the root term
    CHECK(assumption1_bound(0.1, 0.6) == Catch::Approx(0.54077652125734636).epsilon(1e-12));
    CHECK(assumption1_bound(0.6, 0.9) == Catch::Approx(0.35212558186672817).epsilon(1e-12));
    // 1-p branch: root term exceeds 1-p for small c region? pick p near 1
    CHECK(assumption1_bound(0.05, 0.55) <= 0.95);

    CHECK_THROWS_AS(assumption1_bound(0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(assumption1_bound(0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(assumption1_bound(0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(assumption1_bound(1.0, 0.5), std::domain_error);

    // the simulation study's (p=.1, H=.6, c=.2) sits below the bound
    CHECK(0.2 < assumption1_bound(0.1, 0.6));
}

TEST_CASE("bound is positive and continuous on a parameter grid") {
    const int m = 100;
    double prev_col[100];
    for (int i = 0; i < m; ++i) {
        const double p = 0.01 + (0.98 * i) / (m - 1);
        for (int j = 0; j < m; ++j) {
            const double H = 0.01 + (0.98 * j) / (m - 1);
            const double b = assumption1_bound(p, H);
            REQUIRE(b > 0.0);
            if (j > 0) REQUIRE(std::fabs(b - prev_col[j - 1]) < 0.05);
            prev_col[j] = b;
        }
    }
}

TEST_CASE("validate accepts admissible horizon parameters") {
    RawSpec raw{.process = "gbp2", .H = 0.8, .c = 0.6, .lambda = 0.1};
    raw.n = 50;
    // 0.6 < 2^(2*0.8-2) = 0.7578582832551990
    const ProcessSpec spec = validate(raw);
    CHECK(spec.process == Process::Gbp2);
    CHECK(spec.gbp2().n == 50);
    CHECK(spec.gbp2().marginal() == Catch::Approx(0.1 * std::pow(50.0, -0.4)).epsilon(1e-14));
}

TEST_CASE("validate reports every failed inequality") {
    RawSpec raw{.process = "gbp2", .H = 0.6, .c = 0.2, .lambda = 0.25};
    raw.n = 50;
    const auto v = check(raw);
    REQUIRE_FALSE(v.empty());
    CHECK(has_violation(v, "lambda < c"));
    CHECK_THROWS_AS(validate(raw), ValidationError);

    RawSpec missing{.process = "gbp1", .p = 0.5};
    CHECK(has_violation(check(missing), "H present"));

    RawSpec bad_fpp{.process = "fpp", .mu = 1.5, .nu = -1.0};
    const auto vf = check(bad_fpp);
    CHECK(has_violation(vf, "mu"));
    CHECK(has_violation(vf, "nu"));
}

TEST_CASE("figure-caption parameters are admissible as the stationary process") {
    const double rows[4][3] = {{0.1, 0.6, 0.2}, {0.1, 0.8, 0.6}, {0.6, 0.7, 0.1}, {0.6, 0.9, 0.3}};
    for (const auto& r : rows) {
        RawSpec raw{.process = "gbp1", .p = r[0], .H = r[1], .c = r[2]};
        const ProcessSpec spec = validate(raw);
        // re-check the invariants independently of validate's own logic
        CHECK(spec.gbp1().p > 0.0);
        CHECK(spec.gbp1().p < 1.0);
        CHECK(spec.gbp1().H > 0.0);
        CHECK(spec.gbp1().H < 1.0);
        CHECK(spec.gbp1().c >= 0.0);
        CHECK(spec.gbp1().c < assumption1_bound(r[0], r[1]));

        RawSpec star = raw;
        star.process = "gbp1star";
        CHECK_NOTHROW(validate(star));
    }
}

TEST_CASE("strict inequalities leave boundary values inadmissible") {
    RawSpec at_bound{.process = "gbp1", .p = 0.1, .H = 0.6,
                     .c = assumption1_bound(0.1, 0.6)};
    CHECK_FALSE(check(at_bound).empty());

    RawSpec h_half{.process = "gbp2", .H = 0.5, .c = 0.2, .lambda = 0.1};
    h_half.n = 10;
    CHECK(has_violation(check(h_half), "0.5 < H < 1"));

    RawSpec lambda_eq_c{.process = "gbp2", .H = 0.8, .c = 0.6, .lambda = 0.6};
    lambda_eq_c.n = 10;
    CHECK(has_violation(check(lambda_eq_c), "lambda < c"));

    RawSpec mu_one{.process = "fpp", .mu = 1.0, .nu = 2.0};
    CHECK(check(mu_one).empty());  // mu = 1 is the closed end of (0,1]
}

TEST_CASE("anchored horizon process needs only H and c") {
    RawSpec raw{.process = "gbp2star", .H = 0.8, .c = 0.6};
    const ProcessSpec spec = validate(raw);
    CHECK(spec.process == Process::Gbp2Star);
    // a supplied lambda is still checked against the assumption
    RawSpec with_lambda = raw;
    with_lambda.lambda = 0.7;
    CHECK(has_violation(check(with_lambda), "lambda < c"));
}

TEST_CASE("json round trip") {
    RawSpec raw{.process = "gbp2", .H = 0.8, .c = 0.6, .lambda = 0.1};
    raw.n = 50;
    const ProcessSpec spec = validate(raw);
    const auto j = to_json(spec);
    CHECK(j.at("process") == "gbp2");
    const ProcessSpec back = spec_from_json(j);
    CHECK(back.gbp2().H == spec.gbp2().H);
    CHECK(back.gbp2().c == spec.gbp2().c);
    CHECK(back.gbp2().lambda == spec.gbp2().lambda);
    CHECK(back.gbp2().n == spec.gbp2().n);

    const ProcessSpec fpp = validate(RawSpec{.process = "fpp", .mu = 0.6, .nu = 0.9});
    const ProcessSpec fpp_back = spec_from_json(to_json(fpp));
    CHECK(fpp_back.fpp().mu == 0.6);
    CHECK(fpp_back.fpp().nu == 0.9);
}

TEST_CASE("fpp correspondence from the anchored family") {
    const FppParams f = matching_fpp(0.8, 0.6);
    CHECK(f.mu == Catch::Approx(0.6).epsilon(1e-15));
    CHECK(f.nu == Catch::Approx(0.89351534928769026).epsilon(1e-12));
}
