#pragma once

#include <stdexcept>
#include <vector>

#include "cdm/rng.hpp"

namespace cdm {

/// A point of the input space X.
using Point = std::vector<double>;

/// Axis-aligned box, bounds inclusive.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    int dim() const { return static_cast<int>(lo.size()); }

    bool contains(const Point& p) const {
        if (p.size() != lo.size()) return false;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] < lo[i] || p[i] > hi[i]) return false;
        return true;
    }

    Point sample(Rng& rng) const {
        Point p(lo.size());
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = rng.uniform(lo[i], hi[i]);
        return p;
    }

    static Box cube(int dim, double lo, double hi) {
        if (dim <= 0) throw std::invalid_argument("Box::cube: dimension must be positive");
        return Box{std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
    }
};

} // namespace cdm
