#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fracbin/errors.hpp"

namespace fracbin {

enum class Process { Gbp1, Gbp1Star, Gbp2, Gbp2Star, Fpp };

inline const char* process_name(Process p) {
    switch (p) {
        case Process::Gbp1: return "gbp1";
        case Process::Gbp1Star: return "gbp1star";
        case Process::Gbp2: return "gbp2";
        case Process::Gbp2Star: return "gbp2star";
        case Process::Fpp: return "fpp";
    }
    return "?";
}

inline std::optional<Process> process_from_name(const std::string& s) {
    if (s == "gbp1") return Process::Gbp1;
    if (s == "gbp1star") return Process::Gbp1Star;
    if (s == "gbp2") return Process::Gbp2;
    if (s == "gbp2star") return Process::Gbp2Star;
    if (s == "fpp") return Process::Fpp;
    return std::nullopt;
}

// Stationary binary process with marginal p and correlation amplitude c
// decaying as |i-j|^(2H-2). Shared by the plain and the anchored (star)
// variant.
struct Gbp1Params {
    double p = 0;  // success probability, in (0,1)
    double H = 0;  // Hurst-type exponent, in (0,1)
    double c = 0;  // correlation amplitude, 0 <= c < assumption1_bound(p,H)
};

// Horizon-n binary process with marginal p_n = lambda * n^(2H-2).
struct Gbp2Params {
    double H = 0;       // in (0.5, 1)
    double c = 0;       // in (0, 2^(2H-2))
    double lambda = 0;  // intensity, in (0, c)
    std::int64_t n = 0; // horizon length, >= 1

    double marginal() const { return lambda * std::exp((2.0 * H - 2.0) * std::log(static_cast<double>(n))); }
};

// The process observed after the first 1 of the horizon process, in the
// large-horizon limit. Its law involves only (H, c).
struct Gbp2StarParams {
    double H = 0;  // in (0.5, 1)
    double c = 0;  // in (0, 2^(2H-2))
};

// Fractional Poisson process (renewal process with heavy-tailed waits).
struct FppParams {
    double mu = 0;  // order, in (0, 1]
    double nu = 0;  // rate scale, > 0
};

// Upper admissibility bound on c for the stationary process:
// min{ 1-p, (-2p + 2^(2H-2) + sqrt(4p - p*2^(2H) + 2^(4H-4))) / 2 }.
inline double assumption1_bound(double p, double H) {
    if (!(p > 0.0 && p < 1.0) || !(H > 0.0 && H < 1.0))
        throw std::domain_error("assumption1_bound: p and H must lie in the open interval (0,1)");
    const double q = std::exp2(2.0 * H - 2.0);  // 2^(2H-2)
    const double radicand = 4.0 * p - p * std::exp2(2.0 * H) + q * q;
    if (!(radicand >= 0.0))
        throw NumericError("assumption1_bound: negative radicand");  // cannot happen for admissible inputs
    const double root_term = 0.5 * (-2.0 * p + q + std::sqrt(radicand));
    return std::min(1.0 - p, root_term);
}

// Validated tagged union naming one process with its parameters.
struct ProcessSpec {
    Process process;
    std::variant<Gbp1Params, Gbp2Params, Gbp2StarParams, FppParams> params;

    const Gbp1Params& gbp1() const { return std::get<Gbp1Params>(params); }
    const Gbp2Params& gbp2() const { return std::get<Gbp2Params>(params); }
    const Gbp2StarParams& gbp2star() const { return std::get<Gbp2StarParams>(params); }
    const FppParams& fpp() const { return std::get<FppParams>(params); }

    bool is_binary() const { return process != Process::Fpp; }
};

// Unvalidated parameter record, as read from the command line or JSON.
struct RawSpec {
    std::string process;
    std::optional<double> p, H, c, lambda, mu, nu;
    std::optional<std::int64_t> n;
};

namespace detail {

inline void require(std::vector<Violation>& out, bool ok, const std::string& ineq,
                    const std::string& assumption) {
    if (!ok) out.push_back({ineq, assumption});
}

inline bool have(std::vector<Violation>& out, const char* name,
                 const std::optional<double>& v) {
    if (!v) {
        out.push_back({std::string(name) + " present", "required numeric field"});
        return false;
    }
    return true;
}

}  // namespace detail

// All violated admissibility inequalities of a raw record; empty means valid.
inline std::vector<Violation> check(const RawSpec& raw) {
    using detail::require;
    std::vector<Violation> v;
    auto proc = process_from_name(raw.process);
    if (!proc) {
        v.push_back({"process in {gbp1,gbp1star,gbp2,gbp2star,fpp}", "process tag"});
        return v;
    }
    switch (*proc) {
        case Process::Gbp1:
        case Process::Gbp1Star: {
            bool fields = detail::have(v, "p", raw.p) & detail::have(v, "H", raw.H) &
                          detail::have(v, "c", raw.c);
            if (!fields) return v;
            require(v, *raw.p > 0 && *raw.p < 1, "0 < p < 1", "stationary-process admissibility");
            require(v, *raw.H > 0 && *raw.H < 1, "0 < H < 1", "stationary-process admissibility");
            require(v, *raw.c >= 0, "c >= 0", "stationary-process admissibility");
            if (v.empty())
                require(v, *raw.c < assumption1_bound(*raw.p, *raw.H),
                        "c < assumption1_bound(p, H)", "stationary-process admissibility");
            break;
        }
        case Process::Gbp2:
        case Process::Gbp2Star: {
            bool fields = detail::have(v, "H", raw.H) & detail::have(v, "c", raw.c);
            const bool want_lambda = (*proc == Process::Gbp2) || raw.lambda.has_value();
            if (*proc == Process::Gbp2) fields = fields & detail::have(v, "lambda", raw.lambda);
            if (!fields) return v;
            require(v, *raw.H > 0.5 && *raw.H < 1, "0.5 < H < 1", "horizon-process admissibility");
            if (*raw.H > 0.5 && *raw.H < 1)
                require(v, *raw.c > 0 && *raw.c < std::exp2(2.0 * *raw.H - 2.0),
                        "0 < c < 2^(2H-2)", "horizon-process admissibility");
            if (want_lambda && raw.lambda)
                require(v, *raw.lambda > 0 && *raw.lambda < *raw.c, "0 < lambda < c",
                        "horizon-process admissibility");
            if (*proc == Process::Gbp2) {
                require(v, raw.n.has_value() && *raw.n >= 1, "n >= 1", "horizon length");
                // p_n = lambda * n^(2H-2) decreases in n, so checking it at
                // n = 1 covers every horizon.
                if (raw.lambda && raw.n && *raw.n >= 1) {
                    const double p1 = *raw.lambda;
                    require(v, p1 > 0 && p1 < 1, "p_n in (0,1) for all n >= 1",
                            "marginal is a probability");
                }
            }
            break;
        }
        case Process::Fpp: {
            bool fields = detail::have(v, "mu", raw.mu) & detail::have(v, "nu", raw.nu);
            if (!fields) return v;
            require(v, *raw.mu > 0 && *raw.mu <= 1, "0 < mu <= 1", "waiting-time order");
            require(v, *raw.nu > 0, "nu > 0", "rate scale");
            break;
        }
    }
    return v;
}

// Validates and packs a raw record. Throws ValidationError naming every
// failed inequality.
inline ProcessSpec validate(const RawSpec& raw) {
    auto violations = check(raw);
    if (!violations.empty()) throw ValidationError("invalid " + raw.process + " parameters", std::move(violations));
    const Process proc = *process_from_name(raw.process);
    ProcessSpec spec;
    spec.process = proc;
    switch (proc) {
        case Process::Gbp1:
        case Process::Gbp1Star:
            spec.params = Gbp1Params{*raw.p, *raw.H, *raw.c};
            break;
        case Process::Gbp2:
            spec.params = Gbp2Params{*raw.H, *raw.c, *raw.lambda, *raw.n};
            break;
        case Process::Gbp2Star:
            spec.params = Gbp2StarParams{*raw.H, *raw.c};
            break;
        case Process::Fpp:
            spec.params = FppParams{*raw.mu, *raw.nu};
            break;
    }
    return spec;
}

// The paper's parameter correspondence between the anchored horizon process
// and the fractional Poisson process: mu = 2H-1, nu = c * Gamma(2H-1).
inline FppParams matching_fpp(double H, double c) {
    FppParams f;
    f.mu = 2.0 * H - 1.0;
    f.nu = c * std::exp(std::lgamma(2.0 * H - 1.0));
    return f;
}

inline nlohmann::json to_json(const ProcessSpec& spec) {
    nlohmann::json j;
    j["process"] = process_name(spec.process);
    switch (spec.process) {
        case Process::Gbp1:
        case Process::Gbp1Star: {
            const auto& g = spec.gbp1();
            j["p"] = g.p; j["H"] = g.H; j["c"] = g.c;
            break;
        }
        case Process::Gbp2: {
            const auto& g = spec.gbp2();
            j["H"] = g.H; j["c"] = g.c; j["lambda"] = g.lambda; j["n"] = g.n;
            break;
        }
        case Process::Gbp2Star: {
            const auto& g = spec.gbp2star();
            j["H"] = g.H; j["c"] = g.c;
            break;
        }
        case Process::Fpp: {
            const auto& f = spec.fpp();
            j["mu"] = f.mu; j["nu"] = f.nu;
            break;
        }
    }
    return j;
}

inline RawSpec raw_from_json(const nlohmann::json& j) {
    RawSpec raw;
    raw.process = j.value("process", std::string{});
    auto opt = [&](const char* key) -> std::optional<double> {
        if (j.contains(key)) return j.at(key).get<double>();
        return std::nullopt;
    };
    raw.p = opt("p"); raw.H = opt("H"); raw.c = opt("c");
    raw.lambda = opt("lambda"); raw.mu = opt("mu"); raw.nu = opt("nu");
    if (j.contains("n")) raw.n = j.at("n").get<std::int64_t>();
    return raw;
}

inline ProcessSpec spec_from_json(const nlohmann::json& j) { return validate(raw_from_json(j)); }

}  // namespace fracbin
