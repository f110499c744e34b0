#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "fracbin/exact.hpp"
#include "fracbin/rng.hpp"

using namespace fracbin;

namespace {

ProcessSpec gbp1_spec(double p, double H, double c, bool star = false) {
    RawSpec raw{.process = star ? "gbp1star" : "gbp1", .p = p, .H = H, .c = c};
    return validate(raw);
}

ProcessSpec gbp2_spec(double H, double c, double lambda, std::int64_t n) {
    RawSpec raw{.process = "gbp2", .H = H, .c = c, .lambda = lambda};
    raw.n = n;
    return validate(raw);
}

ProcessSpec gbp2star_spec(double H, double c) {
    return validate(RawSpec{.process = "gbp2star", .H = H, .c = c});
}

// Independent subset-sum oracle for the inclusion-exclusion weights: naive
// bitmask loop, gaps evaluated with std::pow, plain accumulation. Shares
// nothing with the library path it checks.
double subset_sum_oracle(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                         double H, double subset_weight, double empty_value, double shift_p,
                         double shift_c) {
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << b.size()); ++mask) {
        std::vector<std::int64_t> merged = a;
        int bits = 0;
        for (std::size_t i = 0; i < b.size(); ++i)
            if (mask & (1u << i)) {
                merged.push_back(b[i]);
                ++bits;
            }
        std::sort(merged.begin(), merged.end());
        double prod = merged.empty() ? empty_value : 1.0;
        for (std::size_t i = 1; i < merged.size(); ++i)
            prod *= shift_p + shift_c * std::pow(static_cast<double>(merged[i] - merged[i - 1]),
                                                 2.0 * H - 2.0);
        total += (bits % 2 == 0 ? 1.0 : -1.0) * std::pow(subset_weight, bits) * prod;
    }
    return total;
}

}  // namespace

TEST_CASE("chain weights over gaps") {
    const double p = 0.1, H = 0.6, c = 0.2;
    const GapTable w = GapTable::affine_power_law(p, c, H, 8);
    const std::vector<std::int64_t> pair{1, 2};
    CHECK(ones_weight(w, pair, 1.0 / p) == Catch::Approx(p + c).epsilon(1e-15));
    const std::vector<std::int64_t> empty;
    CHECK(ones_weight(w, empty, 1.0 / p) == Catch::Approx(10.0).epsilon(1e-15));
    const std::vector<std::int64_t> trio{1, 3, 6};
    CHECK(ones_weight(w, trio, 1.0 / p) ==
          Catch::Approx(0.039331650354775502).epsilon(1e-13));

    const GapTable pw = GapTable::power_law(0.75, 8);
    const std::vector<std::int64_t> quad{1, 2, 4, 7};
    // |(2-1)(4-2)(7-4)|^(2H-2) = 6^(-1/2)
    CHECK(ones_weight(pw, quad, 0.0) == Catch::Approx(0.40824829046386302).epsilon(1e-13));
    const std::vector<std::int64_t> single{5};
    CHECK(ones_weight(pw, single, 0.0) == 1.0);
}

TEST_CASE("inclusion-exclusion weights") {
    const double H = 0.8, c = 0.6;
    const GapTable pw = GapTable::power_law(H, 8);
    const std::vector<std::int64_t> a{1, 3}, b{2};
    // 2^(2H-2) - c, positive because c < 2^(2H-2)
    const double d = pattern_weight(pw, a, b, c, 0.0);
    CHECK(d == Catch::Approx(0.15785828325519904).epsilon(1e-13));
    CHECK(d > 0.0);

    // empty B reduces to the chain weight
    const std::vector<std::int64_t> none;
    CHECK(pattern_weight(pw, a, none, c, 0.0) == ones_weight(pw, a, 0.0));

    // frozen from the independent subset-sum oracle
    const std::vector<std::int64_t> a2{1, 5}, b2{2, 3, 4};
    CHECK(pattern_weight(pw, a2, b2, c, 0.0) ==
          Catch::Approx(0.058953798942316865).epsilon(1e-12));
    CHECK(pattern_weight(pw, a2, b2, c, 0.0) ==
          Catch::Approx(subset_sum_oracle({1, 5}, {2, 3, 4}, H, c, 0.0, 0.0, 1.0)).epsilon(1e-12));
}

TEST_CASE("inclusion-exclusion matches the subset-sum oracle on random instances") {
    CounterRng rng({20240810, 0});
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::int64_t> a, b;
        for (std::int64_t pos = 1; pos <= 12; ++pos) {
            const double u = rng.next_unit();
            if (u < 0.25) a.push_back(pos);
            else if (u < 0.5) b.push_back(pos);
        }
        const double H = 0.55 + 0.4 * rng.next_unit();
        const double c = 0.9 * std::exp2(2.0 * H - 2.0) * rng.next_unit();
        if (c <= 0.0) continue;
        const GapTable pw = GapTable::power_law(H, 12);
        const double empty = a.empty() ? 7.0 : 0.0;  // arbitrary but shared
        const double lib = pattern_weight(pw, a, b, c, empty);
        const double ora = subset_sum_oracle(a, b, H, c, empty, 0.0, 1.0);
        CHECK(lib == Catch::Approx(ora).margin(1e-12));

        const GapTable aw = GapTable::affine_power_law(0.3, c, H, 12);
        const double lib2 = pattern_weight(aw, a, b, 1.0, 1.0 / 0.3);
        const double ora2 = subset_sum_oracle(a, b, H, 1.0, a.empty() ? 1.0 / 0.3 : 0.0, 0.3, c);
        CHECK(lib2 == Catch::Approx(ora2).margin(1e-12));
    }
}

TEST_CASE("zero-set guard refuses oversized enumerations") {
    const GapTable pw = GapTable::power_law(0.8, 32);
    std::vector<std::int64_t> a{31}, b;
    for (std::int64_t i = 1; i <= 25; ++i) b.push_back(i);
    CHECK_THROWS_AS(pattern_weight(pw, a, b, 0.5, 0.0), GuardError);
}

TEST_CASE("joint ones probabilities") {
    const ProcessSpec g2 = gbp2_spec(0.8, 0.6, 0.1, 50);
    const double pn = 0.1 * std::pow(50.0, -0.4);
    const std::vector<std::int64_t> one{7};
    CHECK(joint_ones_prob(g2, one) == Catch::Approx(pn).epsilon(1e-14));

    const ProcessSpec g2s = gbp2star_spec(0.8, 0.6);
    const std::vector<std::int64_t> i3{3};
    CHECK(joint_ones_prob(g2s, i3) == Catch::Approx(0.6 * std::pow(3.0, -0.4)).epsilon(1e-13));

    const ProcessSpec g1 = gbp1_spec(0.1, 0.6, 0.2);
    const std::vector<std::int64_t> pair{1, 2};
    CHECK(joint_ones_prob(g1, pair) == Catch::Approx(0.1 * 0.3).epsilon(1e-14));

    const ProcessSpec g1s = gbp1_spec(0.1, 0.6, 0.2, true);
    // anchored marginal p + c i^(2H-2)
    const std::vector<std::int64_t> i4{4};
    CHECK(joint_ones_prob(g1s, i4) ==
          Catch::Approx(0.1 + 0.2 * std::pow(4.0, -0.8)).epsilon(1e-13));

    const std::vector<std::int64_t> beyond{51};
    CHECK_THROWS_AS(joint_ones_prob(g2, beyond), GuardError);
}

TEST_CASE("pattern probabilities") {
    const ProcessSpec g2n1 = gbp2_spec(0.8, 0.6, 0.1, 1);
    CHECK(pattern_prob(g2n1, BinaryPath{1}) == Catch::Approx(0.1).epsilon(1e-14));

    const ProcessSpec g2n2 = gbp2_spec(0.8, 0.6, 0.1, 2);
    const double pn2 = 0.1 * std::pow(2.0, -0.4);
    CHECK(pattern_prob(g2n2, BinaryPath{1, 0}) == Catch::Approx(pn2 * 0.4).epsilon(1e-13));

    const ProcessSpec g1 = gbp1_spec(0.1, 0.6, 0.2);
    CHECK(pattern_prob(g1, BinaryPath{1, 1}) == Catch::Approx(0.1 * 0.3).epsilon(1e-14));
    const std::vector<std::int64_t> ones{1, 2};
    CHECK(pattern_prob(g1, BinaryPath{1, 1}) == Catch::Approx(joint_ones_prob(g1, ones)));
}

TEST_CASE("enumerated pmf at tiny lengths") {
    const ProcessSpec g2 = gbp2_spec(0.8, 0.6, 0.1, 1);
    const Pmf pmf1 = enumerate_pmf(g2, 1);
    CHECK(pmf1.p[0] == Catch::Approx(0.9).epsilon(1e-14));
    CHECK(pmf1.p[1] == Catch::Approx(0.1).epsilon(1e-14));

    // hand expansion for the stationary process at n = 2
    const ProcessSpec g1 = gbp1_spec(0.1, 0.6, 0.2);
    const Pmf pmf2 = enumerate_pmf(g1, 2);
    CHECK(pmf2.p[0] == Catch::Approx(0.83).epsilon(1e-13));
    CHECK(pmf2.p[1] == Catch::Approx(0.14).epsilon(1e-13));
    CHECK(pmf2.p[2] == Catch::Approx(0.03).epsilon(1e-13));

    CHECK_THROWS_AS(enumerate_pmf(g1, 21), GuardError);
}

TEST_CASE("pattern probabilities are normalized") {
    const std::vector<ProcessSpec> specs{
        gbp1_spec(0.1, 0.6, 0.2), gbp1_spec(0.6, 0.9, 0.3, true),
        gbp2_spec(0.8, 0.6, 0.1, 14), gbp2star_spec(0.7, 0.5)};
    for (const auto& spec : specs) {
        for (int n : {5, 12}) {
            const Pmf pmf = enumerate_pmf(spec, n);
            CHECK(std::fabs(pmf.mass() - 1.0) < 1e-10);
        }
    }
    // the longest case once, at the invariant's stated bound
    const Pmf deep = enumerate_pmf(gbp2_spec(0.8, 0.6, 0.1, 14), 14);
    CHECK(std::fabs(deep.mass() - 1.0) < 1e-10);
}

TEST_CASE("horizon-family pattern probabilities are strictly positive") {
    const double grid[3][3] = {{0.6, 0.2, 0.1}, {0.8, 0.6, 0.3}, {0.7, 0.5, 0.2}};
    for (const auto& g : grid) {
        const ProcessSpec spec = gbp2_spec(g[0], g[1], g[2], 12);
        const ProcessSpec star = gbp2star_spec(g[0], g[1]);
        for (std::uint32_t pat = 0; pat < (1u << 12); ++pat) {
            BinaryPath path(12, 0);
            for (int i = 0; i < 12; ++i) path[static_cast<std::size_t>(i)] = (pat >> i) & 1u;
            REQUIRE(pattern_prob(spec, path) > 0.0);
            REQUIRE(pattern_prob(star, path) > 0.0);
        }
    }
}

TEST_CASE("pairwise gap inequality holds across the admissible grid") {
    // reduced sweep; the acceptance suite runs the full 200-position grid
    for (int hi = 0; hi < 6; ++hi) {
        const double H = 0.55 + 0.07 * hi;
        const double cmax = std::exp2(2.0 * H - 2.0);
        const GapTable w = GapTable::power_law(H, 60);
        for (int ci = 1; ci <= 5; ++ci) {
            const double c = cmax * ci / 6.0;
            for (std::int64_t d1 = 1; d1 < 30; ++d1)
                for (std::int64_t d2 = 1; d2 + d1 <= 60; ++d2)
                    REQUIRE(c * w[d1] * w[d2] < w[d1 + d2]);
        }
    }
}

TEST_CASE("marginal consistency of the pattern law") {
    const std::vector<ProcessSpec> specs{
        gbp1_spec(0.1, 0.6, 0.2), gbp1_spec(0.1, 0.8, 0.6, true),
        gbp2_spec(0.8, 0.6, 0.1, 9), gbp2star_spec(0.6, 0.2)};
    const std::vector<std::vector<std::int64_t>> sets{{2}, {1, 5}, {3, 7, 9}};
    const int n = 9;
    for (const auto& spec : specs) {
        for (const auto& a : sets) {
            double total = 0.0;
            for (std::uint32_t pat = 0; pat < (1u << n); ++pat) {
                bool covers = true;
                for (auto i : a) covers = covers && ((pat >> (i - 1)) & 1u);
                if (!covers) continue;
                BinaryPath path(n, 0);
                for (int i = 0; i < n; ++i) path[static_cast<std::size_t>(i)] = (pat >> i) & 1u;
                total += pattern_prob(spec, path);
            }
            CHECK(total == Catch::Approx(joint_ones_prob(spec, a)).epsilon(1e-11));
        }
    }
}

TEST_CASE("stationarity under index shifts") {
    const ProcessSpec g1 = gbp1_spec(0.1, 0.8, 0.6);
    const ProcessSpec g2 = gbp2_spec(0.8, 0.6, 0.1, 40);
    const std::vector<std::int64_t> base{1, 4, 9};
    for (std::int64_t h = 1; h <= 25; h += 6) {
        std::vector<std::int64_t> shifted;
        for (auto i : base) shifted.push_back(i + h);
        CHECK(joint_ones_prob(g1, shifted) ==
              Catch::Approx(joint_ones_prob(g1, base)).epsilon(1e-13));
        CHECK(joint_ones_prob(g2, shifted) ==
              Catch::Approx(joint_ones_prob(g2, base)).epsilon(1e-13));
    }
}

TEST_CASE("pairwise covariance identities") {
    const double p = 0.1, H = 0.8, c = 0.6;
    const ProcessSpec g1 = gbp1_spec(p, H, c);
    const ProcessSpec g2 = gbp2_spec(H, c, 0.1, 60);
    const double pn = 0.1 * std::pow(60.0, 2.0 * H - 2.0);
    for (std::int64_t gap = 1; gap <= 40; gap += 7) {
        const std::vector<std::int64_t> pair{3, 3 + gap};
        const double cov1 = joint_ones_prob(g1, pair) - p * p;
        CHECK(cov1 ==
              Catch::Approx(p * c * std::pow(static_cast<double>(gap), 2.0 * H - 2.0))
                  .epsilon(1e-11));
        const double cov2 = joint_ones_prob(g2, pair) - pn * pn;
        CHECK(cov2 == Catch::Approx(pn * c * std::pow(static_cast<double>(gap), 2.0 * H - 2.0) -
                                    pn * pn)
                          .epsilon(1e-11));
    }
}

TEST_CASE("peel-off identity for the signed subset sums") {
    // D(A,B) = D(A, B\{b_max}) - c D(A + b_max, B\{b_max}) on random instances
    CounterRng rng({777, 3});
    for (int trial = 0; trial < 120; ++trial) {
        std::vector<std::int64_t> a, b;
        for (std::int64_t pos = 1; pos <= 11; ++pos) {
            const double u = rng.next_unit();
            if (u < 0.3) a.push_back(pos);
            else if (u < 0.6) b.push_back(pos);
        }
        if (a.empty() || b.empty()) continue;
        const double H = 0.55 + 0.4 * rng.next_unit();
        const double c = 0.95 * std::exp2(2.0 * H - 2.0);
        const GapTable w = GapTable::power_law(H, 11);
        const std::int64_t bmax = b.back();
        std::vector<std::int64_t> brest(b.begin(), b.end() - 1);
        std::vector<std::int64_t> amax = a;
        amax.insert(std::upper_bound(amax.begin(), amax.end(), bmax), bmax);
        const double lhs = pattern_weight(w, a, b, c, 0.0);
        const double rhs = pattern_weight(w, a, brest, c, 0.0) -
                           c * pattern_weight(w, amax, brest, c, 0.0);
        CHECK(lhs == Catch::Approx(rhs).margin(1e-13));
    }
}

TEST_CASE("convolution moments equal the enumeration oracle") {
    const std::vector<ProcessSpec> specs{
        gbp1_spec(0.1, 0.6, 0.2), gbp1_spec(0.1, 0.8, 0.6, true),
        gbp2_spec(0.8, 0.6, 0.1, 12), gbp2star_spec(0.7, 0.5)};
    for (const auto& spec : specs) {
        for (int n : {1, 2, 3, 5, 8, 12}) {
            const Pmf pmf = enumerate_pmf(spec, n);
            const auto raw = exact_moments(spec, n, 4);
            const auto central = exact_central_moments(spec, n, 4);
            const double mean = pmf.moment(1);
            for (int k = 1; k <= 4; ++k) {
                CHECK(raw[k - 1] == Catch::Approx(pmf.moment(k)).epsilon(1e-9));
                // oracle central moment straight from the pmf
                double cm = 0.0;
                for (std::size_t v = 0; v < pmf.p.size(); ++v)
                    cm += pmf.p[v] * std::pow(static_cast<double>(v) - mean, k);
                CHECK(central[k - 1] == Catch::Approx(cm).margin(1e-9));
            }
        }
    }
}

TEST_CASE("horizon-process mean is lambda n^(2H-1) exactly") {
    for (std::int64_t n : {1LL, 10LL, 100LL, 10000LL}) {
        const ProcessSpec spec = gbp2_spec(0.8, 0.6, 0.1, n);
        const double mean = exact_moment(spec, n, 1);
        CHECK(mean == Catch::Approx(0.1 * std::pow(static_cast<double>(n), 0.6)).epsilon(1e-13));
    }
}

TEST_CASE("horizon-process second moment approaches its asymptote") {
    const double H = 0.8, c = 0.6, lambda = 0.1;
    const std::int64_t n = 10000;
    const ProcessSpec spec = gbp2_spec(H, c, lambda, n);
    const double m2 = exact_moment(spec, n, 2);
    const double target = lambda * c / ((2.0 * H - 1.0) * H) *
                          std::pow(static_cast<double>(n), 4.0 * H - 2.0);
    CHECK(m2 / target == Catch::Approx(1.0).margin(0.05));
}

TEST_CASE("ordered-tuple sums approach the beta-integral asymptote") {
    const double H = 0.75;
    const double mu = 2.0 * H - 1.0;
    for (int k : {2, 3}) {
        double prev_gap = 1e9;
        double final_ratio = 0.0;
        for (std::int64_t n : {1000LL, 10000LL, 100000LL}) {
            const GapTable w = GapTable::power_law(H, n);
            const auto sums = ordered_gap_sums(w, n, k, false);
            const double asym = std::exp((k - 1) * std::lgamma(mu) -
                                         std::lgamma(mu * (k - 1) + 2.0) +
                                         (mu * (k - 1) + 1.0) * std::log(static_cast<double>(n)));
            const double ratio = sums[static_cast<std::size_t>(k - 1)] / asym;
            const double gap = std::fabs(ratio - 1.0);
            CHECK(gap < prev_gap);  // monotone approach
            prev_gap = gap;
            final_ratio = ratio;
        }
        CHECK(final_ratio == Catch::Approx(1.0).margin(0.05));
    }
}

TEST_CASE("moment guards") {
    const ProcessSpec g1 = gbp1_spec(0.1, 0.6, 0.2);
    CHECK_THROWS_AS(exact_moment(g1, 10, 7), GuardError);
    CHECK_THROWS_AS(exact_moment(g1, 100001, 2), GuardError);
    const ProcessSpec fpp = validate(RawSpec{.process = "fpp", .mu = 0.6, .nu = 1.0});
    CHECK_THROWS_AS(exact_moment(fpp, 10, 2), GuardError);
    CHECK_THROWS_AS(enumerate_pmf(fpp, 5), GuardError);
}
