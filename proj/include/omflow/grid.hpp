#pragma once

// =============================================================================
// omflow - frequency grids
// =============================================================================
// Grids are plain sorted point sets plus the resonance positions that were
// used to densify them.  make_grid() spans ten times the widest rate in the
// model and clusters points around every drift-matrix resonance so that even
// ultra-narrow mechanical lines are resolved.
// =============================================================================

#include <algorithm>
#include <cmath>
#include <vector>

#include "omflow/dynamics.hpp"
#include "omflow/errors.hpp"

namespace omflow {

struct FrequencyGrid {
    std::vector<double> points;           ///< strictly increasing frequencies
    std::vector<double> resonance_hints;  ///< centres the grid is densified at
};

/// Throws model_error unless the points are finite and strictly increasing.
inline void validate_grid(const std::vector<double>& points) {
    if (points.size() < 2) {
        throw model_error("frequency grid needs at least two points");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i])) {
            throw model_error("frequency grid contains a non-finite point");
        }
        if (i > 0 && !(points[i] > points[i - 1])) {
            throw model_error("frequency grid must be strictly increasing");
        }
    }
}

/// Uniform grid of `count` points on [lo, hi].
[[nodiscard]] inline FrequencyGrid uniform_grid(double lo, double hi,
                                                std::size_t count) {
    FrequencyGrid grid;
    if (count < 2 || !(hi > lo)) {
        throw model_error("uniform_grid: need hi > lo and count >= 2");
    }
    grid.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        grid.points.push_back(lo + (hi - lo) *
                                       static_cast<double>(i) /
                                       static_cast<double>(count - 1));
    }
    return grid;
}

/// Builds a resonance-aware grid for the given dynamics.  The span is
/// [-W, W] with W = 10 * max(damping rates, resonance offsets); each
/// resonance (omega_r = -Im lambda, width |Re lambda|) gets a local cluster
/// whose spacing is at most min(mechanical damping)/10.
[[nodiscard]] inline FrequencyGrid make_grid(const DynamicalSystem& sys) {
    const Eigen::VectorXcd lambda = eigenvalues(sys);

    std::vector<double> centers{0.0};
    double widest = sys.damping.maxCoeff();
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        centers.push_back(-lambda(i).imag());
        widest = std::max(widest, std::abs(lambda(i).imag()));
    }
    const double span = 10.0 * widest;

    double fine = sys.damping.minCoeff();
    for (std::size_t i = 0; i < sys.kinds.size(); ++i) {
        if (sys.kinds[i] == ModeKind::mechanical) {
            fine = std::min(fine, sys.damping(static_cast<Eigen::Index>(i)));
        }
    }
    const double cluster_step = fine / 10.0;

    std::vector<double> pts;
    const int backbone = 1000;
    for (int i = 0; i <= backbone; ++i) {
        pts.push_back(-span + 2.0 * span * i / backbone);
    }
    for (std::size_t r = 0; r < centers.size(); ++r) {
        const double width =
            (r == 0) ? widest / 10.0
                     : std::max(std::abs(lambda(static_cast<Eigen::Index>(r - 1))
                                             .real()),
                                cluster_step);
        for (int k = -50; k <= 50; ++k) {
            pts.push_back(centers[r] + cluster_step * k);
        }
        for (int k = -100; k <= 100; ++k) {
            pts.push_back(centers[r] + 0.1 * width * k);
        }
    }

    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.erase(std::remove_if(pts.begin(), pts.end(),
                             [&](double w) {
                                 return w < -span || w > span;
                             }),
              pts.end());

    FrequencyGrid grid;
    grid.points = std::move(pts);
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    grid.resonance_hints = std::move(centers);
    validate_grid(grid.points);
    return grid;
}

}  // namespace omflow
