#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fracbin/errors.hpp"
#include "fracbin/exact.hpp"
#include "fracbin/numeric.hpp"
#include "fracbin/params.hpp"
#include "fracbin/types.hpp"

namespace fracbin {

// Roundoff below this magnitude is clamped to zero; anything more negative
// aborts, because it signals a parameter or implementation fault rather
// than floating-point noise.
inline constexpr double kClampThreshold = -1e-12;

// First-return (inter-arrival) law of a binary renewal process, tabulated
// to a truncation horizon.
struct ReturnTimeTable {
    Process process;
    std::vector<double> pmf;       // pmf[k] = P(T = k), k >= 1; pmf[0] = 0
    std::vector<double> survival;  // survival[k] = P(T > k), k >= 0; survival[0] = 1
    std::int64_t kmax = 0;
    std::int64_t clamped = 0;      // negative-roundoff values clamped to 0

    // Partial mean sum_{k<=kmax} k * pmf[k].
    double partial_mean() const {
        NeumaierSum s;
        for (std::int64_t k = 1; k <= kmax; ++k)
            s.add(static_cast<double>(k) * pmf[static_cast<std::size_t>(k)]);
        return s.value();
    }
};

namespace detail {

// Shared first-return recursion. With v_m the decaying part of the
// lag-conditional kernel u_m = base + v_m,
//
//   f_k = base * P(T > k-1) + v_k - sum_{j=1}^{k-1} f_j v_{k-j}.
//
// Writing the recursion against v instead of u keeps the constant part out
// of the convolution, which would otherwise drown the tiny tail values in
// cancellation noise.
inline ReturnTimeTable first_return_recursion(Process tag, double base,
                                              const std::vector<double>& v, std::int64_t kmax) {
    ReturnTimeTable t;
    t.process = tag;
    t.kmax = kmax;
    t.pmf.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
    t.survival.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
    t.survival[0] = 1.0;
    NeumaierSum surv;
    surv.add(1.0);
    for (std::int64_t k = 1; k <= kmax; ++k) {
        double f = base * surv.value() + v[static_cast<std::size_t>(k)] -
                   convolve_at(t.pmf.data(), v.data(), k - 1);
        if (f < 0.0) {
            if (f < kClampThreshold)
                throw NumericError("first-return recursion: pmf value " + std::to_string(f) +
                                   " at k = " + std::to_string(k) + " below clamp threshold");
            f = 0.0;
            ++t.clamped;
        }
        t.pmf[static_cast<std::size_t>(k)] = f;
        surv.add(-f);
        t.survival[static_cast<std::size_t>(k)] = surv.value();
    }
    return t;
}

inline std::vector<double> decay_kernel(double c, double H, std::int64_t kmax) {
    std::vector<double> v(static_cast<std::size_t>(kmax) + 1, 0.0);
    const double e = 2.0 * H - 2.0;
    for (std::int64_t m = 1; m <= kmax; ++m)
        v[static_cast<std::size_t>(m)] = c * std::exp(e * std::log(static_cast<double>(m)));
    return v;
}

}  // namespace detail

// Return-time pmf of the stationary process: u_k = p + c k^(2H-2), so
// f_1 = p + c and f_k = u_k - sum f_j u_{k-j}. O(kmax^2).
inline ReturnTimeTable interarrival_pmf_gbp1(const Gbp1Params& g, std::int64_t kmax) {
    if (kmax < 1) throw GuardError("interarrival_pmf_gbp1: kmax < 1");
    return detail::first_return_recursion(Process::Gbp1, g.p,
                                          detail::decay_kernel(g.c, g.H, kmax), kmax);
}

// Limiting return-time pmf of the horizon/anchored process: u_k = c k^(2H-2),
// f_1 = c.
inline ReturnTimeTable interarrival_pmf_gbp2star(double H, double c, std::int64_t kmax) {
    if (kmax < 1) throw GuardError("interarrival_pmf_gbp2star: kmax < 1");
    if (!(H > 0.5 && H < 1.0) || !(c > 0.0 && c < std::exp2(2.0 * H - 2.0)))
        throw ValidationError("interarrival_pmf_gbp2star",
                              {{"0.5 < H < 1 and 0 < c < 2^(2H-2)", "horizon-process admissibility"}});
    return detail::first_return_recursion(Process::Gbp2Star, 0.0,
                                          detail::decay_kernel(c, H, kmax), kmax);
}

// First-passage law of the first 1 in the horizon process:
//   h_j = p_n - sum_{t<j} h_t c (j-t)^(2H-2),   j = 1..n,
// from decomposing P(X_j = 1) = p_n over the position of the first 1.
// Residual mass 1 - sum h_j is the all-zero probability.
inline Pmf first_one_pmf_gbp2(const Gbp2Params& g) {
    if (g.n < 1) throw GuardError("first_one_pmf_gbp2: horizon < 1");
    const double pn = g.marginal();
    const auto v = detail::decay_kernel(g.c, g.H, g.n);
    Pmf h;
    h.p.assign(static_cast<std::size_t>(g.n) + 1, 0.0);
    for (std::int64_t j = 1; j <= g.n; ++j) {
        double x = pn - convolve_at(h.p.data(), v.data(), j - 1);
        if (x < 0.0) {
            if (x < kClampThreshold)
                throw NumericError("first_one_pmf_gbp2: negative mass at j = " + std::to_string(j));
            x = 0.0;
        }
        h.p[static_cast<std::size_t>(j)] = x;
    }
    return h;
}

// Delay law of the first 1 of the stationary process under its stationary
// start: P(first 1 at j) = p * P(T >= j). Not assumed -- cross-validated
// against exact pattern probabilities in the tests before the samplers
// rely on it.
inline Pmf stationary_delay_gbp1(const Gbp1Params& g, std::int64_t kmax) {
    const ReturnTimeTable t = interarrival_pmf_gbp1(g, kmax);
    Pmf d;
    d.p.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
    for (std::int64_t j = 1; j <= kmax; ++j)
        d.p[static_cast<std::size_t>(j)] = g.p * t.survival[static_cast<std::size_t>(j - 1)];
    return d;
}

struct TailFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
    std::int64_t kmin = 0;
    std::int64_t kmax = 0;
    std::size_t points = 0;
};

// Least-squares slope of log survival against log k over geometrically
// spaced abscissae in [kmin, kmax]. Geometric spacing keeps the fit from
// being dominated by small k, where the slowly varying factor still moves.
inline TailFit tail_index_fit(const ReturnTimeTable& t, std::int64_t kmin, std::int64_t kmax,
                              int grid_points = 64) {
    if (kmin < 1 || kmax > t.kmax || kmin >= kmax)
        throw GuardError("tail_index_fit: bad fit range");
    std::vector<double> xs, ys;
    for (std::int64_t k : geometric_grid(kmin, kmax, grid_points)) {
        const double s = t.survival[static_cast<std::size_t>(k)];
        if (s > 0.0) {
            xs.push_back(std::log(static_cast<double>(k)));
            ys.push_back(std::log(s));
        }
    }
    if (xs.size() < 8) throw GuardError("tail_index_fit: fewer than 8 usable points");
    const LineFit f = fit_line(xs, ys);
    TailFit out;
    out.slope = f.slope;
    out.stderr_slope = f.slope_stderr;
    out.kmin = kmin;
    out.kmax = kmax;
    out.points = f.points;
    return out;
}

// Theoretical tail exponent of the return-time survival for each process
// family: 2H-3 for the stationary process, 1-2H for the horizon/anchored
// family.
inline double theory_tail_slope(Process p, double H) {
    switch (p) {
        case Process::Gbp1:
        case Process::Gbp1Star: return 2.0 * H - 3.0;
        case Process::Gbp2:
        case Process::Gbp2Star: return 1.0 - 2.0 * H;
        case Process::Fpp: break;
    }
    throw GuardError("theory_tail_slope: no binary return-time law");
}

}  // namespace fracbin
