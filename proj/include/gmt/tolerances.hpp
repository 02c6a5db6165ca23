#pragma once

#include <algorithm>

namespace gmt::tolerance {

// Slopes C of tol(h) = max(floor, C h). Each was measured on the analytic
// cases named beside it (largest observed relative excess of lhs over rhs,
// divided by h, rounded up) and is frozen here so that a change in
// discretization bias shows up as a failing verdict rather than a silently
// wider window.
inline constexpr double floor = 0.02;
inline constexpr double mazya = 2.0;             // unit disk, u = 1, optimal constant
inline constexpr double mazya_l2 = 1.0;          // unit square, u = 1 and u = x
inline constexpr double isoperimetric = 2.0;     // unit disk
inline constexpr double sobolev = 2.0;           // mollified disk indicators
inline constexpr double sobolev_extended = 2.0;  // disk indicator
inline constexpr double bv_bound = 1.0;          // unit square, u = 1 and u = x
inline constexpr double brunn_minkowski = 2.0;   // homothetic disks and balls
inline constexpr double perimeter_iso = 2.0;     // unit disk
inline constexpr double trace_step = 2.0;        // proof chain on the unit disk

// Relative window for lattice barrier mass against the shell formula. The
// lattice ramp overshoots by about 0.07 h/s.
inline constexpr double shell_match = 0.05;

// Lattice inequality grad(u ^ v) <= grad(u) + grad(v) + lattice * h * osc.
inline constexpr double lattice = 4.0;
// Slack for the mollifier TV non-increase.
inline constexpr double mollify_tv = 1e-6;
// quotient_search bound: Q <= c(n) (1 + search).
inline constexpr double search = 0.05;

inline double at(double slope, double h) { return std::max(floor, slope * h); }

}  // namespace gmt::tolerance
