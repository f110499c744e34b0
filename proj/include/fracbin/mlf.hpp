#pragma once

#include <cmath>
#include <string>

#include "fracbin/errors.hpp"
#include "fracbin/numeric.hpp"

namespace fracbin {

inline constexpr int kMlfTermCap = 100000;

struct MlfEval {
    double mu = 0;
    double z = 0;
    double value = 0;
    int terms_used = 0;
};

// Mittag-Leffler function E_mu(z) = sum_k z^k / Gamma(mu k + 1), summed
// until the current term drops below 1e-16 of the partial sum. Terms are
// formed in log space; series-only evaluation, arguments outside the
// overflow guard are refused rather than continued asymptotically.
inline MlfEval mittag_leffler_eval(double mu, double z) {
    if (!(mu > 0.0 && mu <= 1.0)) throw std::domain_error("mittag_leffler: mu must be in (0,1]");
    if (!(std::fabs(z) <= std::pow(700.0, mu)))
        throw GuardError("mittag_leffler: |z| beyond overflow guard 700^mu");
    MlfEval ev;
    ev.mu = mu;
    ev.z = z;
    if (z == 0.0) {
        ev.value = 1.0;
        ev.terms_used = 1;
        return ev;
    }
    const double log_abs_z = std::log(std::fabs(z));
    const bool negative = z < 0.0;
    NeumaierSum s;
    int k = 0;
    for (; k < kMlfTermCap; ++k) {
        const double log_term = k * log_abs_z - std::lgamma(mu * k + 1.0);
        double term = std::exp(log_term);
        if (negative && (k & 1)) term = -term;
        s.add(term);
        if (std::fabs(term) < 1e-16 * std::fabs(s.value())) {
            ++k;
            break;
        }
    }
    if (k >= kMlfTermCap)
        throw NumericError("mittag_leffler: series did not converge within term cap");
    ev.value = s.value();
    ev.terms_used = k;
    return ev;
}

inline double mittag_leffler(double mu, double z) { return mittag_leffler_eval(mu, z).value; }

// k-th raw moment of the second-family Mittag-Leffler distribution whose
// mgf is E_mu(nu t):  k! nu^k / Gamma(mu k + 1).
inline double mlf2_moment(double mu, double nu, int k) {
    if (k < 0) throw std::domain_error("mlf2_moment: k < 0");
    if (k == 0) return 1.0;
    return std::exp(std::lgamma(k + 1.0) + k * std::log(nu) - std::lgamma(mu * k + 1.0));
}

// Mgf of the fractional Poisson count N_{mu,nu}(t) at argument s:
//   sum_k ((e^s - 1) nu t^mu)^k / Gamma(mu k + 1) = E_mu((e^s - 1) nu t^mu).
inline double fpp_mgf(double mu, double nu, double s, double t) {
    if (!(t > 0.0)) throw std::domain_error("fpp_mgf: t must be positive");
    const double z = std::expm1(s) * nu * std::pow(t, mu);
    return mittag_leffler(mu, z);
}

}  // namespace fracbin
