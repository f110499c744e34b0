#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracbin/errors.hpp"
#include "fracbin/renewal.hpp"
#include "fracbin/stats.hpp"
#include "fracbin/types.hpp"

namespace fracbin {

// Shortest round-trip decimal form; keeps CSV output byte-stable across
// runs of the same binary.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Write-then-rename so consumers never observe a half-written file.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp.string());
        f << content;
        if (!f.flush()) throw IoError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + path.string() + " (" + ec.message() + ")");
}

inline std::string pmf_csv(const Pmf& pmf) {
    std::string s = "k,probability\n";
    for (std::size_t k = 0; k < pmf.p.size(); ++k)
        s += std::to_string(k) + "," + format_double(pmf.p[k]) + "\n";
    return s;
}

inline std::string moments_csv(std::span<const double> moments) {
    std::string s = "k,moment\n";
    for (std::size_t k = 0; k < moments.size(); ++k)
        s += std::to_string(k + 1) + "," + format_double(moments[k]) + "\n";
    return s;
}

inline std::string return_table_csv(const ReturnTimeTable& t) {
    std::string s = "k,pmf,survival\n";
    s.reserve(32 * static_cast<std::size_t>(t.kmax));
    for (std::int64_t k = 1; k <= t.kmax; ++k)
        s += std::to_string(k) + "," + format_double(t.pmf[static_cast<std::size_t>(k)]) + "," +
             format_double(t.survival[static_cast<std::size_t>(k)]) + "\n";
    return s;
}

inline std::string histogram_csv(const Histogram& h) {
    std::string s = "bin_left,bin_right,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        s += format_double(h.edges[i]) + "," + format_double(h.edges[i + 1]) + "," +
             std::to_string(h.counts[i]) + "\n";
    return s;
}

inline nlohmann::json tail_fit_json(const TailFit& f, double theory_slope) {
    return nlohmann::json{{"slope", f.slope},
                          {"stderr", f.stderr_slope},
                          {"range", {f.kmin, f.kmax}},
                          {"points", f.points},
                          {"theory_slope", theory_slope}};
}

inline nlohmann::json moment_report_json(const MomentReport& r) {
    return nlohmann::json{{"process", r.process},
                          {"n", r.n},
                          {"k", r.k},
                          {"exact", r.exact},
                          {"reps", r.reps},
                          {"raw", r.raw},
                          {"central", r.central},
                          {"raw_theory", r.raw_theory},
                          {"central_theory", r.central_theory},
                          {"raw_ratio", r.raw_ratio},
                          {"central_ratio", r.central_ratio},
                          {"raw_se", r.raw_se},
                          {"central_se", r.central_se},
                          {"raw_batch_median", r.raw_batch_median},
                          {"central_batch_median", r.central_batch_median}};
}

}  // namespace fracbin
