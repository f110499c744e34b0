#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracbin/errors.hpp"
#include "fracbin/exact.hpp"
#include "fracbin/io.hpp"
#include "fracbin/mlf.hpp"
#include "fracbin/params.hpp"
#include "fracbin/renewal.hpp"
#include "fracbin/sample.hpp"
#include "fracbin/stats.hpp"

namespace fracbin {

inline constexpr const char* kVersion = "fracbin 0.1.0";

// Exit codes of every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitIo = 3;

struct RunConfig {
    std::string command;  // validate | exact | simulate | returns | converge | figures
    RawSpec raw;
    std::int64_t n = 12;
    std::int64_t reps = 10000;
    std::uint64_t seed = 1;
    std::int64_t kmax = 100000;
    std::string out;           // output directory; empty = no files
    std::string format = "csv";
};

namespace detail {

inline nlohmann::json config_json(const RunConfig& cfg) {
    nlohmann::json spec;
    spec["process"] = cfg.raw.process;
    auto put = [&](const char* key, const std::optional<double>& v) { if (v) spec[key] = *v; };
    put("p", cfg.raw.p); put("H", cfg.raw.H); put("c", cfg.raw.c);
    put("lambda", cfg.raw.lambda); put("mu", cfg.raw.mu); put("nu", cfg.raw.nu);
    if (cfg.raw.n) spec["n"] = *cfg.raw.n;
    return nlohmann::json{{"command", cfg.command}, {"spec", spec},     {"n", cfg.n},
                          {"reps", cfg.reps},       {"seed", cfg.seed}, {"kmax", cfg.kmax},
                          {"format", cfg.format}};
}

// Every output directory gets a manifest describing exactly what produced it.
inline void write_manifest(const RunConfig& cfg, const nlohmann::json& extra) {
    if (cfg.out.empty()) return;
    nlohmann::json m;
    m["command"] = cfg.command;
    m["config"] = config_json(cfg);
    m["seed"] = cfg.seed;
    m["version"] = kVersion;
    if (!extra.is_null()) m["outputs"] = extra;
    atomic_write(std::filesystem::path(cfg.out) / "manifest.json", m.dump(2) + "\n");
}

inline void emit(const RunConfig& cfg, const std::string& name, const std::string& content) {
    if (!cfg.out.empty()) atomic_write(std::filesystem::path(cfg.out) / name, content);
}

inline int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    const auto violations = check(cfg.raw);
    nlohmann::json rep;
    rep["process"] = cfg.raw.process;
    rep["valid"] = violations.empty();
    rep["violations"] = nlohmann::json::array();
    for (const auto& v : violations) {
        rep["violations"].push_back({{"inequality", v.inequality}, {"assumption", v.assumption}});
        out << "violation: " << v.message() << "\n";
    }
    if (violations.empty()) {
        out << cfg.raw.process << ": parameters admissible\n";
        // echo the validated record so scripts can capture it
        out << to_json(validate(cfg.raw)).dump() << "\n";
    }
    emit(cfg, "validate.json", rep.dump(2) + "\n");
    write_manifest(cfg, nlohmann::json{{"files", {"validate.json"}}});
    return violations.empty() ? kExitOk : kExitValidation;
}

inline int cmd_exact(const RunConfig& cfg, std::ostream& out) {
    const ProcessSpec spec = validate(cfg.raw);
    std::vector<std::string> files;
    nlohmann::json info;
    if (cfg.n <= kEnumerationGuard) {
        const Pmf pmf = enumerate_pmf(spec, static_cast<int>(cfg.n));
        emit(cfg, "pmf.csv", pmf_csv(pmf));
        files.push_back("pmf.csv");
        info["pmf_mass"] = pmf.mass();
        out << "pmf mass over 2^" << cfg.n << " patterns: " << format_double(pmf.mass()) << "\n";
    } else {
        info["pmf_skipped"] = "n beyond enumeration guard " + std::to_string(kEnumerationGuard);
        out << "pmf skipped: n > " << kEnumerationGuard << "\n";
    }
    const int korder = static_cast<int>(std::min<std::int64_t>(4, cfg.n));
    const auto moments = exact_moments(spec, cfg.n, korder);
    emit(cfg, "moments.csv", moments_csv(moments));
    files.push_back("moments.csv");
    out << "E(B_n) = " << format_double(moments[0]) << "\n";
    info["files"] = files;
    write_manifest(cfg, info);
    return kExitOk;
}

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    const ProcessSpec spec = validate(cfg.raw);
    std::string counts = "";
    std::string positions = spec.process == Process::Fpp ? "rep,time\n" : "rep,position\n";
    std::int64_t censored = 0;
    if (spec.process == Process::Fpp) {
        for (std::int64_t r = 0; r < cfg.reps; ++r) {
            CounterRng rng({cfg.seed, static_cast<std::uint64_t>(r)});
            const EventTimes times = sample_fpp(spec.fpp(), static_cast<double>(cfg.n), rng);
            counts += std::to_string(times.size()) + "\n";
            for (double t : times)
                positions += std::to_string(r) + "," + format_double(t) + "\n";
        }
    } else {
        const PathSampler sampler(spec, cfg.n);
        for (std::int64_t r = 0; r < cfg.reps; ++r) {
            CounterRng rng({cfg.seed, static_cast<std::uint64_t>(r)});
            const PathSample s = sampler.draw(rng);
            counts += std::to_string(s.ones) + "\n";
            for (std::int64_t i = 1; i <= cfg.n; ++i)
                if (s.path[static_cast<std::size_t>(i - 1)])
                    positions += std::to_string(r) + "," + std::to_string(i) + "\n";
            if (s.censored) ++censored;
        }
    }
    emit(cfg, "counts.csv", counts);
    emit(cfg, "positions.csv", positions);
    out << "simulated " << cfg.reps << " paths, censored draws: " << censored << "\n";
    write_manifest(cfg, nlohmann::json{{"files", {"counts.csv", "positions.csv"}},
                                       {"censored", censored}});
    return kExitOk;
}

inline int cmd_returns(const RunConfig& cfg, std::ostream& out) {
    const ProcessSpec spec = validate(cfg.raw);
    ReturnTimeTable table = [&] {
        switch (spec.process) {
            case Process::Gbp1:
            case Process::Gbp1Star:
                return interarrival_pmf_gbp1(spec.gbp1(), cfg.kmax);
            case Process::Gbp2:
                return interarrival_pmf_gbp2star(spec.gbp2().H, spec.gbp2().c, cfg.kmax);
            case Process::Gbp2Star:
                return interarrival_pmf_gbp2star(spec.gbp2star().H, spec.gbp2star().c, cfg.kmax);
            default:
                throw ValidationError("returns", {{"process is a binary process",
                                                   "return times need a binary path"}});
        }
    }();
    const double H = spec.process == Process::Gbp2 ? spec.gbp2().H
                     : spec.process == Process::Gbp2Star ? spec.gbp2star().H
                                                         : spec.gbp1().H;
    const std::int64_t kmin = std::max<std::int64_t>(10, cfg.kmax / 1000);
    const TailFit fit = tail_index_fit(table, kmin, cfg.kmax);
    const double theory = theory_tail_slope(table.process, H);
    emit(cfg, "returns.csv", return_table_csv(table));
    emit(cfg, "tail_fit.json", tail_fit_json(fit, theory).dump(2) + "\n");
    out << "partial mean: " << format_double(table.partial_mean())
        << "  tail slope: " << format_double(fit.slope) << " (theory " << format_double(theory)
        << ")  clamped: " << table.clamped << "\n";
    write_manifest(cfg, nlohmann::json{{"files", {"returns.csv", "tail_fit.json"}},
                                       {"clamped", table.clamped}});
    return kExitOk;
}

inline int cmd_converge(const RunConfig& cfg, std::ostream& out) {
    const ProcessSpec spec = validate(cfg.raw);
    nlohmann::json rep;
    rep["process"] = process_name(spec.process);
    rep["n"] = cfg.n;
    switch (spec.process) {
        case Process::Gbp1:
        case Process::Gbp1Star: {
            // growth exponent of the exact central second moment over a
            // dyadic n-grid, against the three-regime theory order
            const auto& g = spec.gbp1();
            std::vector<double> lx, ly;
            for (std::int64_t n = 128; n <= 8192; n *= 2) {
                lx.push_back(std::log(static_cast<double>(n)));
                ly.push_back(std::log(exact_central_moment(spec, n, 2)));
            }
            const LineFit f = fit_line(lx, ly);
            rep["metric"] = "variance growth exponent";
            rep["slope"] = f.slope;
            rep["theory_slope"] = g.H > 0.5 ? 2.0 * g.H : 1.0;
            break;
        }
        case Process::Gbp2: {
            const auto& g = spec.gbp2();
            const std::int64_t n = std::min<std::int64_t>(cfg.n, g.n);
            const auto raw = exact_moments(spec, n, 3);
            rep["metric"] = "exact raw-moment ratio to c_k n^((2H-1)k)";
            rep["ratios"] = nlohmann::json::array();
            for (int k = 1; k <= 3; ++k) {
                const double theory = gbp2_moment_constant(g.H, g.c, g.lambda, k) *
                                      std::pow(static_cast<double>(n), (2.0 * g.H - 1.0) * k);
                rep["ratios"].push_back({{"k", k}, {"ratio", raw[static_cast<std::size_t>(k - 1)] / theory}});
            }
            break;
        }
        case Process::Gbp2Star:
        case Process::Fpp: {
            double mu, nu, scale;
            if (spec.process == Process::Gbp2Star) {
                const auto& g = spec.gbp2star();
                const FppParams f = matching_fpp(g.H, g.c);
                mu = f.mu; nu = f.nu;
            } else {
                mu = spec.fpp().mu; nu = spec.fpp().nu;
            }
            scale = std::pow(static_cast<double>(cfg.n), mu);
            SumSamples samples = sample_sums(spec, cfg.n, cfg.reps, {cfg.seed, 0});
            for (double& x : samples.sums) x /= scale;
            const std::array<double, 3> ts{0.1, 0.25, 0.5};
            const auto mgf = empirical_mgf(samples.sums, ts);
            const auto mgf_med = empirical_mgf_batched(samples.sums, ts);
            rep["metric"] = "scaled-sum mgf against E_mu(nu t)";
            rep["mu"] = mu;
            rep["nu"] = nu;
            rep["points"] = nlohmann::json::array();
            for (std::size_t i = 0; i < ts.size(); ++i) {
                const double limit = mittag_leffler(mu, nu * ts[i]);
                rep["points"].push_back({{"t", ts[i]},
                                         {"empirical", mgf[i]},
                                         {"batch_median", mgf_med[i]},
                                         {"limit", limit},
                                         {"rel_gap", mgf_med[i] / limit - 1.0}});
            }
            rep["censored"] = samples.censored;
            break;
        }
    }
    emit(cfg, "converge.json", rep.dump(2) + "\n");
    out << rep.dump(2) << "\n";
    write_manifest(cfg, nlohmann::json{{"files", {"converge.json"}}});
    return kExitOk;
}

struct FigureCell {
    std::string name;
    std::string process;
    double p, H, c;
    std::int64_t n;
};

inline int cmd_figures(const RunConfig& cfg, std::ostream& out) {
    // the simulation study's four (p, H, c) parameter rows
    static constexpr std::array<std::array<double, 3>, 4> rows{{
        {0.1, 0.6, 0.2}, {0.1, 0.8, 0.6}, {0.6, 0.7, 0.1}, {0.6, 0.9, 0.3}}};
    static constexpr std::array<std::int64_t, 2> lengths{50, 1000};
    static constexpr int kBins = 30;
    std::vector<std::string> files;
    nlohmann::json skipped = nlohmann::json::array();
    std::uint64_t stream_base = 0;
    const auto next_streams = [&] {
        const std::uint64_t s = stream_base;
        stream_base += static_cast<std::uint64_t>(cfg.reps);
        return s;
    };
    for (std::size_t row = 0; row < rows.size(); ++row) {
        const double p = rows[row][0], H = rows[row][1], c = rows[row][2];
        for (const std::int64_t n : lengths) {
            const std::string tag = "row" + std::to_string(row + 1) + "_n" + std::to_string(n);
            struct Variant {
                std::string label;
                RawSpec raw;
                double scale;
            };
            std::vector<Variant> variants;
            RawSpec binom{.process = "gbp1", .p = p, .H = H, .c = 0.0};
            RawSpec gbp1{.process = "gbp1", .p = p, .H = H, .c = c};
            RawSpec gbp1star{.process = "gbp1star", .p = p, .H = H, .c = c};
            // the study maps lambda := p for the horizon process
            RawSpec gbp2{.process = "gbp2", .H = H, .c = c, .lambda = p};
            gbp2.n = n;
            RawSpec gbp2star{.process = "gbp2star", .H = H, .c = c};
            const FppParams fp = matching_fpp(H, c);
            RawSpec fpp{.process = "fpp", .mu = fp.mu, .nu = fp.nu};
            variants.push_back({"binomial", binom, 1.0});
            variants.push_back({"gbp1", gbp1, 1.0});
            variants.push_back({"gbp1star", gbp1star, 1.0});
            variants.push_back({"gbp2", gbp2, 1.0});
            variants.push_back({"gbp2star", gbp2star, 1.0});
            variants.push_back({"fpp", fpp, 1.0});
            const double pow_scale = std::pow(static_cast<double>(n), 2.0 * H - 1.0);
            variants.push_back({"gbp2star_scaled", gbp2star, pow_scale});
            variants.push_back({"fpp_scaled", fpp, pow_scale});
            for (const auto& var : variants) {
                const auto violations = check(var.raw);
                if (!violations.empty()) {
                    nlohmann::json cell{{"cell", tag + "_" + var.label}};
                    cell["violations"] = nlohmann::json::array();
                    for (const auto& v : violations) cell["violations"].push_back(v.message());
                    skipped.push_back(cell);
                    out << "skip " << tag << " " << var.label << ": "
                        << violations.front().message() << "\n";
                    next_streams();
                    continue;
                }
                const ProcessSpec spec = validate(var.raw);
                const SumSamples samples =
                    sample_sums(spec, n, cfg.reps, {cfg.seed, next_streams()});
                const Histogram h = make_histogram(samples.sums, kBins, var.scale,
                                                   var.label, cfg.seed);
                const std::string fname = "fig_" + tag + "_" + var.label + ".csv";
                emit(cfg, fname, histogram_csv(h));
                files.push_back(fname);
            }
        }
    }
    out << "wrote " << files.size() << " histogram files, skipped " << skipped.size()
        << " cells\n";
    write_manifest(cfg, nlohmann::json{{"files", files}, {"skipped", skipped}});
    return kExitOk;
}

}  // namespace detail

// Dispatches one CLI command; returns the process exit code. All output
// files are written atomically under cfg.out, accompanied by a manifest.
inline int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.command == "validate") return detail::cmd_validate(cfg, out);
        if (cfg.command == "exact") return detail::cmd_exact(cfg, out);
        if (cfg.command == "simulate") return detail::cmd_simulate(cfg, out);
        if (cfg.command == "returns") return detail::cmd_returns(cfg, out);
        if (cfg.command == "converge") return detail::cmd_converge(cfg, out);
        if (cfg.command == "figures") return detail::cmd_figures(cfg, out);
        err << "unknown command: " << cfg.command << "\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const GuardError& e) {
        err << "guard error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

}  // namespace fracbin
