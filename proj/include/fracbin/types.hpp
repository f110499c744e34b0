#pragma once

#include <cstdint>
#include <vector>

#include "fracbin/numeric.hpp"

namespace fracbin {

// Sorted, strictly increasing positions. Elements are >= 1; position 0 is
// admitted only internally as the anchor of the star processes.
using IndexSet = std::vector<std::int64_t>;

// One realization of a binary process, indexed 1..n (stored at 0..n-1).
using BinaryPath = std::vector<std::uint8_t>;

// Strictly increasing event times of a counting process within a horizon.
using EventTimes = std::vector<double>;

// Probability mass function on {0, 1, ..., support_bound}.
struct Pmf {
    std::vector<double> p;  // p[k] = P(X = k)

    std::int64_t support_bound() const { return static_cast<std::int64_t>(p.size()) - 1; }

    double mass() const {
        NeumaierSum s;
        for (double x : p) s.add(x);
        return s.value();
    }

    // Raw k-th moment over the stored support.
    double moment(int k) const {
        NeumaierSum s;
        for (std::size_t v = 0; v < p.size(); ++v) {
            double t = p[v];
            for (int j = 0; j < k; ++j) t *= static_cast<double>(v);
            s.add(t);
        }
        return s.value();
    }
};

}  // namespace fracbin
