#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "fracbin/errors.hpp"
#include "fracbin/params.hpp"
#include "fracbin/renewal.hpp"
#include "fracbin/rng.hpp"
#include "fracbin/types.hpp"

namespace fracbin {

// Gap tables longer than this are refused.
inline constexpr std::int64_t kGapTableCap = 1000000;

struct PathSample {
    BinaryPath path;
    std::int64_t ones = 0;
    // True when a draw fell past the tabulated gap horizon. With tables
    // covering the full window this still yields the exact all-zero tail;
    // the count is surfaced because the anchored processes have infinite
    // mean gaps and hit it routinely.
    bool censored = false;
};

namespace detail {

// Inverse-CDF lookup table over values 1..kmax with explicit tail mass.
class InverseCdf {
public:
    InverseCdf() = default;

    // pmf[k] for k = 1..kmax (index 0 ignored).
    explicit InverseCdf(const std::vector<double>& pmf) {
        cdf_.resize(pmf.size());
        cdf_[0] = 0.0;
        NeumaierSum s;
        for (std::size_t k = 1; k < pmf.size(); ++k) {
            s.add(pmf[k]);
            cdf_[k] = std::min(s.value(), 1.0);
        }
    }

    // Returns the drawn value in 1..kmax, or 0 for a tail draw.
    std::int64_t draw(CounterRng& rng) const {
        const double u = rng.next_unit();
        if (u > cdf_.back()) return 0;
        const auto it = std::lower_bound(cdf_.begin() + 1, cdf_.end(), u);
        return static_cast<std::int64_t>(it - cdf_.begin());
    }

private:
    std::vector<double> cdf_;
};

}  // namespace detail

// Renewal-decomposition path sampler. Builds the first-arrival and gap
// tables once (O(n^2)); each path then costs O(number of ones * log n).
class PathSampler {
public:
    PathSampler(const ProcessSpec& spec, std::int64_t n) : spec_(spec), n_(n) {
        if (n < 1) throw GuardError("PathSampler: n < 1");
        if (n > kGapTableCap) throw GuardError("PathSampler: n beyond gap table cap");
        switch (spec.process) {
            case Process::Gbp1: {
                const auto& g = spec.gbp1();
                const ReturnTimeTable t = interarrival_pmf_gbp1(g, n);
                std::vector<double> delay(static_cast<std::size_t>(n) + 1, 0.0);
                for (std::int64_t j = 1; j <= n; ++j)
                    delay[static_cast<std::size_t>(j)] = g.p * t.survival[static_cast<std::size_t>(j - 1)];
                first_ = detail::InverseCdf(delay);
                gap_ = detail::InverseCdf(t.pmf);
                first_tail_is_censoring_ = false;
                break;
            }
            case Process::Gbp1Star: {
                const auto& g = spec.gbp1();
                const ReturnTimeTable t = interarrival_pmf_gbp1(g, n);
                first_ = detail::InverseCdf(t.pmf);
                gap_ = detail::InverseCdf(t.pmf);
                first_tail_is_censoring_ = true;
                break;
            }
            case Process::Gbp2: {
                const auto& g = spec.gbp2();
                if (n > g.n) throw GuardError("PathSampler: window exceeds horizon n");
                Pmf h = first_one_pmf_gbp2(g);
                h.p.resize(static_cast<std::size_t>(n) + 1);
                first_ = detail::InverseCdf(h.p);
                gap_ = detail::InverseCdf(interarrival_pmf_gbp2star(g.H, g.c, n).pmf);
                first_tail_is_censoring_ = false;
                break;
            }
            case Process::Gbp2Star: {
                const auto& g = spec.gbp2star();
                const ReturnTimeTable t = interarrival_pmf_gbp2star(g.H, g.c, n);
                first_ = detail::InverseCdf(t.pmf);
                gap_ = detail::InverseCdf(t.pmf);
                first_tail_is_censoring_ = true;
                break;
            }
            case Process::Fpp:
                throw GuardError("PathSampler: use sample_fpp for the counting process");
        }
    }

    std::int64_t horizon() const { return n_; }
    const ProcessSpec& spec() const { return spec_; }

    PathSample draw(CounterRng& rng) const {
        PathSample out;
        out.path.assign(static_cast<std::size_t>(n_), 0);
        std::int64_t pos = first_.draw(rng);
        if (pos == 0) {
            out.censored = first_tail_is_censoring_;
            return out;
        }
        while (pos <= n_) {
            out.path[static_cast<std::size_t>(pos - 1)] = 1;
            ++out.ones;
            const std::int64_t gap = gap_.draw(rng);
            if (gap == 0) {
                out.censored = true;
                break;
            }
            pos += gap;
        }
        return out;
    }

private:
    ProcessSpec spec_;
    std::int64_t n_;
    detail::InverseCdf first_;
    detail::InverseCdf gap_;
    bool first_tail_is_censoring_ = false;
};

// One path; rebuilds the tables each call. For replication loops build a
// PathSampler once instead.
inline BinaryPath sample_path(const ProcessSpec& spec, std::int64_t n, RngSeed seed) {
    PathSampler sampler(spec, n);
    CounterRng rng(seed);
    return sampler.draw(rng).path;
}

// First-family Mittag-Leffler waiting time by the two-uniform inversion
//   w = -nu^(-1/mu) ln(U) (sin(mu pi)/tan(mu pi V) - cos(mu pi))^(1/mu),
// exponential(nu) at mu = 1.
inline double sample_mittag_leffler_wait(double mu, double nu, CounterRng& rng) {
    if (!(mu > 0.0 && mu <= 1.0)) throw std::domain_error("sample_mittag_leffler_wait: mu in (0,1]");
    if (!(nu > 0.0)) throw std::domain_error("sample_mittag_leffler_wait: nu > 0");
    const double u = rng.next_unit();
    if (mu == 1.0) return -std::log(u) / nu;
    const double v = rng.next_unit();
    const double a = mu * std::numbers::pi;
    const double bracket = std::sin(a) / std::tan(a * v) - std::cos(a);
    return -std::pow(nu, -1.0 / mu) * std::log(u) * std::pow(bracket, 1.0 / mu);
}

// Fractional Poisson event times in (0, horizon]: cumulative sums of
// Mittag-Leffler waits until the horizon is passed.
inline EventTimes sample_fpp(const FppParams& f, double horizon, CounterRng& rng) {
    if (!(horizon > 0.0)) throw std::domain_error("sample_fpp: horizon must be positive");
    EventTimes times;
    double t = 0.0;
    for (;;) {
        t += sample_mittag_leffler_wait(f.mu, f.nu, rng);
        if (!(t <= horizon)) break;
        times.push_back(t);
    }
    return times;
}

}  // namespace fracbin
