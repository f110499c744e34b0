#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fracbin/errors.hpp"
#include "fracbin/exact.hpp"
#include "fracbin/mlf.hpp"
#include "fracbin/numeric.hpp"
#include "fracbin/params.hpp"
#include "fracbin/sample.hpp"
#include "fracbin/types.hpp"

namespace fracbin {

// Threshold below which moment reports switch from Monte Carlo to the
// exact engine.
inline constexpr std::int64_t kExactReportLength = 12;

// Asymptotic raw-moment constant of the horizon process:
//   c_k = k! lambda (c Gamma(2H-1))^(k-1) / Gamma((2H-1)(k-1) + 2).
inline double gbp2_moment_constant(double H, double c, double lambda, int k) {
    const double mu = 2.0 * H - 1.0;
    return std::exp(std::lgamma(k + 1.0) + std::log(lambda) +
                    (k - 1) * (std::log(c) + std::lgamma(mu)) -
                    std::lgamma(mu * (k - 1) + 2.0));
}

// Asymptotic raw-moment constant of the anchored process:
//   c_k^* = k! (c Gamma(2H-1))^k / Gamma((2H-1)k + 1).
inline double gbp2star_moment_constant(double H, double c, int k) {
    const double mu = 2.0 * H - 1.0;
    return std::exp(std::lgamma(k + 1.0) + k * (std::log(c) + std::lgamma(mu)) -
                    std::lgamma(mu * k + 1.0));
}

// Path sums (or fractional Poisson counts) over independent replication
// streams: replication r draws from stream base.stream + r.
struct SumSamples {
    std::vector<double> sums;
    std::int64_t censored = 0;
};

inline SumSamples sample_sums(const ProcessSpec& spec, std::int64_t n, std::int64_t reps,
                              RngSeed base) {
    if (reps < 1) throw GuardError("sample_sums: reps < 1");
    SumSamples out;
    out.sums.reserve(static_cast<std::size_t>(reps));
    if (spec.process == Process::Fpp) {
        const auto& f = spec.fpp();
        for (std::int64_t r = 0; r < reps; ++r) {
            CounterRng rng({base.seed, base.stream + static_cast<std::uint64_t>(r)});
            out.sums.push_back(static_cast<double>(sample_fpp(f, static_cast<double>(n), rng).size()));
        }
        return out;
    }
    const PathSampler sampler(spec, n);
    for (std::int64_t r = 0; r < reps; ++r) {
        CounterRng rng({base.seed, base.stream + static_cast<std::uint64_t>(r)});
        const PathSample s = sampler.draw(rng);
        out.sums.push_back(static_cast<double>(s.ones));
        if (s.censored) ++out.censored;
    }
    return out;
}

// Moments of the path sum paired with the matching theorem's asymptotic
// comparator. For the stationary family the central comparator is the
// growth order alone (its constant is parameter-dependent and only the
// order is asserted by the theory).
struct MomentReport {
    std::string process;
    std::int64_t n = 0;
    int k = 0;
    bool exact = false;        // exact engine instead of Monte Carlo
    std::int64_t reps = 0;     // 0 for exact rows
    double raw = 0;
    double central = 0;
    double raw_theory = 0;
    double central_theory = 0;
    double raw_ratio = 0;
    double central_ratio = 0;
    double raw_se = 0;         // > 0 when reps > 1
    double central_se = 0;
    double raw_batch_median = 0;     // medians of 32 replication batches;
    double central_batch_median = 0; // stabilizes heavy-tailed summaries
};

namespace detail {

inline void fill_theory(MomentReport& r, const ProcessSpec& spec) {
    const double n = static_cast<double>(r.n);
    const int k = r.k;
    switch (spec.process) {
        case Process::Gbp1:
        case Process::Gbp1Star: {
            const auto& g = spec.gbp1();
            r.raw_theory = std::pow(n * g.p, k);
            if (g.H > 0.5)
                r.central_theory = std::pow(n, 2.0 * g.H - 2.0 + k);
            else if (g.H == 0.5)
                r.central_theory = std::pow(n, k - 1.0) * std::log(n);
            else
                r.central_theory = std::pow(n, std::ceil(k / 2.0));
            break;
        }
        case Process::Gbp2: {
            const auto& g = spec.gbp2();
            const double scale = std::pow(n, (2.0 * g.H - 1.0) * k);
            r.raw_theory = gbp2_moment_constant(g.H, g.c, g.lambda, k) * scale;
            r.central_theory = scale;  // constant c_k' not given in closed form
            break;
        }
        case Process::Gbp2Star: {
            const auto& g = spec.gbp2star();
            const double scale = std::pow(n, (2.0 * g.H - 1.0) * k);
            r.raw_theory = gbp2star_moment_constant(g.H, g.c, k) * scale;
            r.central_theory = scale;
            break;
        }
        case Process::Fpp: {
            const auto& f = spec.fpp();
            const double scale = std::pow(n, f.mu * k);
            r.raw_theory = mlf2_moment(f.mu, f.nu, k) * scale;
            r.central_theory = scale;
            break;
        }
    }
    r.raw_ratio = r.raw / r.raw_theory;
    r.central_ratio = r.central / r.central_theory;
}

struct MeanSe {
    double mean = 0;
    double se = 0;
    double batch_median = 0;
};

inline MeanSe mean_se(std::span<const double> xs, int batches = 32) {
    const auto m = static_cast<double>(xs.size());
    NeumaierSum s;
    for (double x : xs) s.add(x);
    MeanSe out;
    out.mean = s.value() / m;
    NeumaierSum q;
    for (double x : xs) q.add((x - out.mean) * (x - out.mean));
    out.se = xs.size() > 1 ? std::sqrt(q.value() / (m - 1.0) / m) : 0.0;
    if (static_cast<int>(xs.size()) >= 2 * batches) {
        const std::size_t per = xs.size() / static_cast<std::size_t>(batches);
        std::vector<double> med;
        med.reserve(static_cast<std::size_t>(batches));
        for (int b = 0; b < batches; ++b) {
            NeumaierSum bs;
            for (std::size_t i = per * static_cast<std::size_t>(b);
                 i < per * static_cast<std::size_t>(b + 1); ++i)
                bs.add(xs[i]);
            med.push_back(bs.value() / static_cast<double>(per));
        }
        out.batch_median = median_of(std::move(med));
    } else {
        out.batch_median = out.mean;
    }
    return out;
}

}  // namespace detail

inline std::vector<MomentReport> moment_report(const ProcessSpec& spec, std::int64_t n, int kmax,
                                               std::int64_t reps, RngSeed seed) {
    if (kmax < 1) throw GuardError("moment_report: kmax < 1");
    std::vector<MomentReport> out;
    const bool exact = spec.is_binary() && n <= kExactReportLength;
    if (exact) {
        const auto raw = exact_moments(spec, n, kmax);
        const auto central = exact_central_moments(spec, n, kmax);
        for (int k = 1; k <= kmax; ++k) {
            MomentReport r;
            r.process = process_name(spec.process);
            r.n = n; r.k = k; r.exact = true;
            r.raw = raw[static_cast<std::size_t>(k - 1)];
            r.central = central[static_cast<std::size_t>(k - 1)];
            r.raw_batch_median = r.raw;
            r.central_batch_median = r.central;
            detail::fill_theory(r, spec);
            out.push_back(std::move(r));
        }
        return out;
    }
    const SumSamples samples = sample_sums(spec, n, reps, seed);
    NeumaierSum ms;
    for (double x : samples.sums) ms.add(x);
    const double mean = ms.value() / static_cast<double>(reps);
    std::vector<double> pows(samples.sums.size()), cpows(samples.sums.size());
    for (int k = 1; k <= kmax; ++k) {
        for (std::size_t i = 0; i < samples.sums.size(); ++i) {
            const double x = samples.sums[i];
            pows[i] = (k == 1) ? x : pows[i] * x;
            cpows[i] = (k == 1) ? (x - mean) : cpows[i] * (x - mean);
        }
        const auto rawm = detail::mean_se(pows);
        const auto cenm = detail::mean_se(cpows);
        MomentReport r;
        r.process = process_name(spec.process);
        r.n = n; r.k = k; r.exact = false; r.reps = reps;
        r.raw = rawm.mean; r.raw_se = rawm.se; r.raw_batch_median = rawm.batch_median;
        r.central = cenm.mean; r.central_se = cenm.se; r.central_batch_median = cenm.batch_median;
        detail::fill_theory(r, spec);
        out.push_back(std::move(r));
    }
    return out;
}

// Sample averages of exp(t x) on a grid of t values.
inline std::vector<double> empirical_mgf(std::span<const double> samples,
                                         std::span<const double> ts) {
    if (samples.empty()) throw GuardError("empirical_mgf: no samples");
    double xmax = samples[0];
    for (double x : samples) xmax = std::max(xmax, x);
    std::vector<double> out;
    out.reserve(ts.size());
    for (double t : ts) {
        if (t * xmax > 700.0) throw NumericError("empirical_mgf: exp overflow at t");
        NeumaierSum s;
        for (double x : samples) s.add(std::exp(t * x));
        out.push_back(s.value() / static_cast<double>(samples.size()));
    }
    return out;
}

// Batch-median variant: mgf per replication batch, median across batches.
inline std::vector<double> empirical_mgf_batched(std::span<const double> samples,
                                                 std::span<const double> ts, int batches = 32) {
    if (static_cast<int>(samples.size()) < 2 * batches) return empirical_mgf(samples, ts);
    std::vector<double> out;
    const std::size_t per = samples.size() / static_cast<std::size_t>(batches);
    for (double t : ts) {
        std::vector<double> vals;
        vals.reserve(static_cast<std::size_t>(batches));
        for (int b = 0; b < batches; ++b) {
            auto block = samples.subspan(per * static_cast<std::size_t>(b), per);
            vals.push_back(empirical_mgf(block, std::span<const double>(&t, 1))[0]);
        }
        out.push_back(median_of(std::move(vals)));
    }
    return out;
}

struct Histogram {
    std::vector<double> edges;        // bins + 1, strictly increasing
    std::vector<std::int64_t> counts; // per bin; sums to the sample count
    double scale = 1.0;               // samples were divided by this
    std::string process;
    std::uint64_t seed = 0;
};

inline Histogram histogram_with_edges(std::span<const double> samples,
                                      std::span<const double> edges, double scale,
                                      std::string process = {}, std::uint64_t seed = 0) {
    if (samples.empty()) throw GuardError("histogram: empty samples");
    if (edges.size() < 3) throw GuardError("histogram: need at least 2 bins");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1])) throw GuardError("histogram: edges not increasing");
    Histogram h;
    h.edges.assign(edges.begin(), edges.end());
    h.counts.assign(edges.size() - 1, 0);
    h.scale = scale;
    h.process = std::move(process);
    h.seed = seed;
    for (double raw : samples) {
        const double x = raw / scale;
        // values at or beyond the outer edges land in the boundary bins
        auto it = std::upper_bound(h.edges.begin(), h.edges.end(), x);
        std::int64_t bin = static_cast<std::int64_t>(it - h.edges.begin()) - 1;
        bin = std::clamp<std::int64_t>(bin, 0, static_cast<std::int64_t>(h.counts.size()) - 1);
        ++h.counts[static_cast<std::size_t>(bin)];
    }
    return h;
}

inline std::vector<double> equal_width_edges(double lo, double hi, int bins) {
    if (bins < 2) throw GuardError("histogram: bins < 2");
    if (!(hi > lo)) hi = lo + 1.0;
    std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / static_cast<double>(bins);
    return edges;
}

inline Histogram make_histogram(std::span<const double> samples, int bins, double scale,
                                std::string process = {}, std::uint64_t seed = 0) {
    if (samples.empty()) throw GuardError("histogram: empty samples");
    double lo = samples[0] / scale, hi = samples[0] / scale;
    for (double raw : samples) {
        lo = std::min(lo, raw / scale);
        hi = std::max(hi, raw / scale);
    }
    const auto edges = equal_width_edges(lo, hi, bins);
    return histogram_with_edges(samples, edges, scale, std::move(process), seed);
}

// Shared bin edges spanning the pooled range of two scaled sample sets, so
// TV distances between their histograms are well defined.
inline std::vector<double> common_edges(std::span<const double> a, double scale_a,
                                        std::span<const double> b, double scale_b, int bins) {
    if (a.empty() || b.empty()) throw GuardError("common_edges: empty samples");
    double lo = a[0] / scale_a, hi = a[0] / scale_a;
    for (double x : a) { lo = std::min(lo, x / scale_a); hi = std::max(hi, x / scale_a); }
    for (double x : b) { lo = std::min(lo, x / scale_b); hi = std::max(hi, x / scale_b); }
    return equal_width_edges(lo, hi, bins);
}

// Total variation distance (1/2) sum |a_k - b_k| over the union support.
inline double tv_distance(const Pmf& a, const Pmf& b) {
    const std::size_t n = std::max(a.p.size(), b.p.size());
    NeumaierSum s;
    for (std::size_t k = 0; k < n; ++k) {
        const double pa = k < a.p.size() ? a.p[k] : 0.0;
        const double pb = k < b.p.size() ? b.p[k] : 0.0;
        s.add(std::fabs(pa - pb));
    }
    return 0.5 * s.value();
}

inline double tv_distance(const Histogram& a, const Histogram& b) {
    if (a.edges != b.edges) throw GuardError("tv_distance: histograms use different bins");
    std::int64_t na = 0, nb = 0;
    for (auto c : a.counts) na += c;
    for (auto c : b.counts) nb += c;
    NeumaierSum s;
    for (std::size_t i = 0; i < a.counts.size(); ++i)
        s.add(std::fabs(static_cast<double>(a.counts[i]) / static_cast<double>(na) -
                        static_cast<double>(b.counts[i]) / static_cast<double>(nb)));
    return 0.5 * s.value();
}

}  // namespace fracbin
