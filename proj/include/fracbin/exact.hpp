#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fracbin/errors.hpp"
#include "fracbin/numeric.hpp"
#include "fracbin/params.hpp"
#include "fracbin/types.hpp"

namespace fracbin {

// Refuse inclusion-exclusion with more than this many zero positions; the
// subset sum has 2^|B| terms and is never approximated.
inline constexpr int kZeroSetGuard = 24;
inline constexpr int kEnumerationGuard = 20;  // enumerate_pmf path length
inline constexpr int kMomentOrderGuard = 6;
inline constexpr std::int64_t kMomentLengthGuard = 100000;

// Memoized gap weights w[m], m = 1..size. Powers are evaluated as
// exp((2H-2) ln m); this table dominates the cost of the convolution and
// enumeration paths, so it is built once per call.
struct GapTable {
    std::vector<double> w;  // w[0] unused

    double operator[](std::int64_t m) const { return w[static_cast<std::size_t>(m)]; }
    std::int64_t size() const { return static_cast<std::int64_t>(w.size()) - 1; }

    // w[m] = m^(2H-2)
    static GapTable power_law(double H, std::int64_t size) {
        GapTable t;
        t.w.resize(static_cast<std::size_t>(size) + 1);
        t.w[0] = std::numeric_limits<double>::quiet_NaN();
        const double e = 2.0 * H - 2.0;
        for (std::int64_t m = 1; m <= size; ++m)
            t.w[static_cast<std::size_t>(m)] = std::exp(e * std::log(static_cast<double>(m)));
        return t;
    }

    // w[m] = p + c * m^(2H-2)
    static GapTable affine_power_law(double p, double c, double H, std::int64_t size) {
        GapTable t = power_law(H, size);
        for (std::int64_t m = 1; m <= size; ++m)
            t.w[static_cast<std::size_t>(m)] = p + c * t.w[static_cast<std::size_t>(m)];
        return t;
    }
};

namespace detail {

inline void check_index_set(std::span<const std::int64_t> a, std::int64_t min_allowed) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < min_allowed) throw GuardError("index set: element below " + std::to_string(min_allowed));
        if (i > 0 && a[i] <= a[i - 1]) throw GuardError("index set: not strictly increasing");
    }
}

}  // namespace detail

// Chain weight of a run of ones at positions A: the product of w[gap] over
// consecutive gaps of A. Singletons weigh 1; the empty set takes the
// caller-supplied convention (1/p for the stationary process, c/p_n for the
// horizon process).
inline double ones_weight(const GapTable& w, std::span<const std::int64_t> a, double empty_value) {
    if (a.empty()) {
        if (std::isnan(empty_value)) throw GuardError("ones_weight: empty set has no convention here");
        return empty_value;
    }
    double prod = 1.0;
    for (std::size_t i = 1; i < a.size(); ++i) prod *= w[a[i] - a[i - 1]];
    return prod;
}

// Signed inclusion-exclusion over the zero positions B:
//
//   sum over B' subset of B of (-1)^|B'| subset_weight^|B'| ones_weight(A union B')
//
// A and B must be disjoint and sorted. The alternating sum is accumulated
// with Neumaier compensation. |B| above the guard is refused.
inline double pattern_weight(const GapTable& w, std::span<const std::int64_t> a,
                             std::span<const std::int64_t> b, double subset_weight,
                             double empty_value) {
    const int m = static_cast<int>(b.size());
    if (m > kZeroSetGuard)
        throw GuardError("pattern_weight: enumeration too large (|B| = " + std::to_string(m) +
                         " > " + std::to_string(kZeroSetGuard) + ")");
    std::array<double, kZeroSetGuard + 1> signed_pow;  // (-subset_weight)^k
    signed_pow[0] = 1.0;
    for (int k = 1; k <= m; ++k) signed_pow[k] = signed_pow[k - 1] * (-subset_weight);

    NeumaierSum total;
    std::vector<std::int64_t> merged;
    merged.reserve(a.size() + b.size());
    const std::uint32_t nmask = static_cast<std::uint32_t>(1u) << m;
    for (std::uint32_t mask = 0; mask < nmask; ++mask) {
        merged.clear();
        std::size_t ia = 0;
        std::uint32_t rest = mask;
        while (rest != 0) {
            const int ib = std::countr_zero(rest);
            rest &= rest - 1;
            const std::int64_t pos = b[static_cast<std::size_t>(ib)];
            while (ia < a.size() && a[ia] < pos) merged.push_back(a[ia++]);
            merged.push_back(pos);
        }
        while (ia < a.size()) merged.push_back(a[ia++]);
        const int k = std::popcount(mask);
        total.add(signed_pow[k] * ones_weight(w, merged, empty_value));
    }
    return total.value();
}

namespace detail {

// c^k for integer k, |k| small; k = -1 legitimately appears in the
// horizon-process pattern formula when A is empty.
inline double int_pow(double c, std::int64_t k) {
    if (k < 0) return 1.0 / int_pow(c, -k);
    double r = 1.0;
    for (std::int64_t i = 0; i < k; ++i) r *= c;
    return r;
}

inline std::int64_t max_span(std::span<const std::int64_t> a) { return a.empty() ? 1 : a.back(); }

}  // namespace detail

// P(X_i = 1 for all i in A).
inline double joint_ones_prob(const ProcessSpec& spec, std::span<const std::int64_t> a) {
    if (a.empty()) throw GuardError("joint_ones_prob: empty index set");
    detail::check_index_set(a, 1);
    const std::int64_t reach = a.back();
    switch (spec.process) {
        case Process::Gbp1: {
            const auto& g = spec.gbp1();
            const GapTable w = GapTable::affine_power_law(g.p, g.c, g.H, reach);
            return g.p * ones_weight(w, a, 1.0 / g.p);
        }
        case Process::Gbp1Star: {
            const auto& g = spec.gbp1();
            const GapTable w = GapTable::affine_power_law(g.p, g.c, g.H, reach);
            std::vector<std::int64_t> anchored{0};
            anchored.insert(anchored.end(), a.begin(), a.end());
            return ones_weight(w, anchored, std::numeric_limits<double>::quiet_NaN());
        }
        case Process::Gbp2: {
            const auto& g = spec.gbp2();
            if (reach > g.n) throw GuardError("joint_ones_prob: index exceeds horizon n");
            const GapTable w = GapTable::power_law(g.H, reach);
            const double pn = g.marginal();
            return pn * detail::int_pow(g.c, static_cast<std::int64_t>(a.size()) - 1) *
                   ones_weight(w, a, g.c / pn);
        }
        case Process::Gbp2Star: {
            const auto& g = spec.gbp2star();
            const GapTable w = GapTable::power_law(g.H, reach);
            std::vector<std::int64_t> anchored{0};
            anchored.insert(anchored.end(), a.begin(), a.end());
            return detail::int_pow(g.c, static_cast<std::int64_t>(a.size())) *
                   ones_weight(w, anchored, std::numeric_limits<double>::quiet_NaN());
        }
        case Process::Fpp:
            throw GuardError("joint_ones_prob: not a binary process");
    }
    throw GuardError("joint_ones_prob: unknown process");
}

namespace detail {

// Dispatches the pattern probability P(ones exactly at A within 1..len) for
// a prebuilt gap table of size >= len. Used by pattern_prob and the
// enumeration loop.
inline double pattern_prob_core(const ProcessSpec& spec, const GapTable& w,
                                std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                std::vector<std::int64_t>& anchored_buf) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    switch (spec.process) {
        case Process::Gbp1: {
            const auto& g = spec.gbp1();
            return g.p * pattern_weight(w, a, b, 1.0, 1.0 / g.p);
        }
        case Process::Gbp1Star: {
            anchored_buf.clear();
            anchored_buf.push_back(0);
            anchored_buf.insert(anchored_buf.end(), a.begin(), a.end());
            return pattern_weight(w, anchored_buf, b, 1.0, nan);
        }
        case Process::Gbp2: {
            const auto& g = spec.gbp2();
            const double pn = g.marginal();
            return pn * int_pow(g.c, static_cast<std::int64_t>(a.size()) - 1) *
                   pattern_weight(w, a, b, g.c, g.c / pn);
        }
        case Process::Gbp2Star: {
            const auto& g = spec.gbp2star();
            anchored_buf.clear();
            anchored_buf.push_back(0);
            anchored_buf.insert(anchored_buf.end(), a.begin(), a.end());
            return int_pow(g.c, static_cast<std::int64_t>(a.size())) *
                   pattern_weight(w, anchored_buf, b, g.c, nan);
        }
        case Process::Fpp:
            throw GuardError("pattern_prob: not a binary process");
    }
    throw GuardError("pattern_prob: unknown process");
}

inline GapTable table_for(const ProcessSpec& spec, std::int64_t size) {
    switch (spec.process) {
        case Process::Gbp1:
        case Process::Gbp1Star: {
            const auto& g = spec.gbp1();
            return GapTable::affine_power_law(g.p, g.c, g.H, size);
        }
        case Process::Gbp2:
            return GapTable::power_law(spec.gbp2().H, size);
        case Process::Gbp2Star:
            return GapTable::power_law(spec.gbp2star().H, size);
        case Process::Fpp:
            throw GuardError("gap table: not a binary process");
    }
    throw GuardError("gap table: unknown process");
}

}  // namespace detail

// Exact probability of a full 0/1 pattern over positions 1..pattern.size().
inline double pattern_prob(const ProcessSpec& spec, const BinaryPath& pattern) {
    const auto len = static_cast<std::int64_t>(pattern.size());
    if (len < 1) throw GuardError("pattern_prob: empty pattern");
    if (spec.process == Process::Gbp2 && len > spec.gbp2().n)
        throw GuardError("pattern_prob: pattern exceeds horizon n");
    std::vector<std::int64_t> a, b;
    for (std::int64_t i = 1; i <= len; ++i) (pattern[static_cast<std::size_t>(i - 1)] ? a : b).push_back(i);
    const GapTable w = detail::table_for(spec, len);
    std::vector<std::int64_t> buf;
    return detail::pattern_prob_core(spec, w, a, b, buf);
}

// Brute-force pmf of the path sum over positions 1..len, by summing
// pattern_prob over all 2^len patterns. This is the oracle the cheaper
// engines are tested against; it is never shortcut.
inline Pmf enumerate_pmf(const ProcessSpec& spec, int len) {
    if (len < 1 || len > kEnumerationGuard)
        throw GuardError("enumerate_pmf: length must be in 1.." + std::to_string(kEnumerationGuard));
    if (spec.process == Process::Gbp2 && len > spec.gbp2().n)
        throw GuardError("enumerate_pmf: length exceeds horizon n");
    const GapTable w = detail::table_for(spec, len);
    std::vector<NeumaierSum> bucket(static_cast<std::size_t>(len) + 1);
    std::vector<std::int64_t> a, b, buf;
    a.reserve(len); b.reserve(len);
    const std::uint32_t npat = static_cast<std::uint32_t>(1u) << len;
    for (std::uint32_t pat = 0; pat < npat; ++pat) {
        a.clear(); b.clear();
        for (int i = 0; i < len; ++i) ((pat >> i) & 1u ? a : b).push_back(i + 1);
        bucket[a.size()].add(detail::pattern_prob_core(spec, w, a, b, buf));
    }
    Pmf pmf;
    pmf.p.resize(static_cast<std::size_t>(len) + 1);
    for (std::size_t k = 0; k < pmf.p.size(); ++k) pmf.p[k] = bucket[k].value();
    return pmf;
}

// Ordered-tuple gap sums
//   S_j = sum over 1 <= i_1 < ... < i_j <= n of w0(i_1) * prod_{t>=2} w[i_t - i_{t-1}]
// for j = 1..kmax, where w0 == 1 (plain) or w0(i) = w[i] (anchored at the
// origin). Computed by iterated convolutions against w, O(kmax n^2) overall;
// level 2 of the plain variant reduces to prefix sums.
inline std::vector<double> ordered_gap_sums(const GapTable& w, std::int64_t n, int kmax,
                                            bool anchored) {
    if (n < 1 || n > w.size()) throw GuardError("ordered_gap_sums: table shorter than n");
    if (kmax < 1) throw GuardError("ordered_gap_sums: kmax < 1");
    const auto un = static_cast<std::size_t>(n);
    std::vector<double> level(un + 1), next(un + 1);
    for (std::size_t i = 1; i <= un; ++i)
        level[i] = anchored ? w[static_cast<std::int64_t>(i)] : 1.0;
    std::vector<double> sums;
    sums.reserve(static_cast<std::size_t>(kmax));
    auto total = [&](const std::vector<double>& v) {
        NeumaierSum s;
        for (std::size_t i = 1; i <= un; ++i) s.add(v[i]);
        return s.value();
    };
    sums.push_back(total(level));
    for (int j = 2; j <= kmax; ++j) {
        std::fill(next.begin(), next.end(), 0.0);
        if (j == 2 && !anchored) {
            // sum_{i' < i} w[i - i'] is a prefix sum of the gap table.
            NeumaierSum prefix;
            for (std::size_t i = 2; i <= un; ++i) {
                prefix.add(w[static_cast<std::int64_t>(i) - 1]);
                next[i] = prefix.value();
            }
        } else {
            for (std::size_t m = 1; m < un; ++m) {
                const double wm = w[static_cast<std::int64_t>(m)];
                for (std::size_t i = m + 1; i <= un; ++i) next[i] += level[i - m] * wm;
            }
        }
        level.swap(next);
        sums.push_back(total(level));
    }
    return sums;
}

namespace detail {

// surj(k, j) = j! * S(k, j): the number of surjections from k labels onto j
// blocks, i.e. the multinomial multiplicities of the moment expansion.
// Exact integers, k <= kMomentOrderGuard.
inline std::array<std::array<std::int64_t, kMomentOrderGuard + 1>, kMomentOrderGuard + 1>
surjection_counts() {
    std::array<std::array<std::int64_t, kMomentOrderGuard + 1>, kMomentOrderGuard + 1> stirling{};
    stirling[0][0] = 1;
    for (int k = 1; k <= kMomentOrderGuard; ++k)
        for (int j = 1; j <= k; ++j)
            stirling[k][j] = j * stirling[k - 1][j] + stirling[k - 1][j - 1];
    std::array<std::array<std::int64_t, kMomentOrderGuard + 1>, kMomentOrderGuard + 1> surj{};
    for (int k = 1; k <= kMomentOrderGuard; ++k) {
        std::int64_t fact = 1;
        for (int j = 1; j <= k; ++j) {
            fact *= j;
            surj[k][j] = fact * stirling[k][j];
        }
    }
    return surj;
}

// T_j = sum over |A| = j of joint_ones_prob(A), for j = 1..kmax.
inline std::vector<double> level_sums(const ProcessSpec& spec, std::int64_t n, int kmax) {
    const GapTable w = table_for(spec, n);
    switch (spec.process) {
        case Process::Gbp1: {
            auto s = ordered_gap_sums(w, n, kmax, false);
            for (auto& x : s) x *= spec.gbp1().p;
            return s;
        }
        case Process::Gbp1Star:
            return ordered_gap_sums(w, n, kmax, true);
        case Process::Gbp2: {
            const auto& g = spec.gbp2();
            if (n > g.n) throw GuardError("exact_moment: length exceeds horizon n");
            auto s = ordered_gap_sums(w, n, kmax, false);
            const double pn = g.marginal();
            for (int j = 1; j <= kmax; ++j) s[j - 1] *= pn * int_pow(g.c, j - 1);
            return s;
        }
        case Process::Gbp2Star: {
            const auto& g = spec.gbp2star();
            auto s = ordered_gap_sums(w, n, kmax, true);
            for (int j = 1; j <= kmax; ++j) s[j - 1] *= int_pow(g.c, j);
            return s;
        }
        case Process::Fpp:
            throw GuardError("exact_moment: not a binary process");
    }
    throw GuardError("exact_moment: unknown process");
}

}  // namespace detail

// Exact raw moments E(B^k) for k = 1..kmax, via the expansion
//   E(B^k) = sum_j surj(k,j) T_j
// with T_j the ordered-tuple sums above.
inline std::vector<double> exact_moments(const ProcessSpec& spec, std::int64_t n, int kmax) {
    if (kmax < 1 || kmax > kMomentOrderGuard)
        throw GuardError("exact_moments: order must be in 1.." + std::to_string(kMomentOrderGuard));
    if (n < 1 || n > kMomentLengthGuard)
        throw GuardError("exact_moments: length must be in 1.." + std::to_string(kMomentLengthGuard));
    static const auto surj = detail::surjection_counts();
    const auto t = detail::level_sums(spec, n, kmax);
    std::vector<double> out(static_cast<std::size_t>(kmax));
    for (int k = 1; k <= kmax; ++k) {
        NeumaierSum s;
        for (int j = 1; j <= k; ++j) s.add(static_cast<double>(surj[k][j]) * t[j - 1]);
        out[static_cast<std::size_t>(k - 1)] = s.value();
    }
    return out;
}

inline double exact_moment(const ProcessSpec& spec, std::int64_t n, int k) {
    return exact_moments(spec, n, k).back();
}

// Exact central moments E((B - EB)^k), k = 1..kmax, by binomial expansion
// around the exact mean (not the asymptotic one).
inline std::vector<double> exact_central_moments(const ProcessSpec& spec, std::int64_t n, int kmax) {
    const auto raw = exact_moments(spec, n, kmax);
    const double mean = raw[0];
    std::vector<double> out(static_cast<std::size_t>(kmax));
    for (int k = 1; k <= kmax; ++k) {
        // sum_{j=0}^{k} C(k,j) E(B^j) (-mean)^(k-j)
        NeumaierSum s;
        double binom = 1.0;
        for (int j = 0; j <= k; ++j) {
            const double ebj = (j == 0) ? 1.0 : raw[static_cast<std::size_t>(j - 1)];
            s.add(binom * ebj * detail::int_pow(-mean, k - j));
            binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
        }
        out[static_cast<std::size_t>(k - 1)] = s.value();
    }
    return out;
}

inline double exact_central_moment(const ProcessSpec& spec, std::int64_t n, int k) {
    return exact_central_moments(spec, n, k).back();
}

}  // namespace fracbin
