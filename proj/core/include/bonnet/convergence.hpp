#pragma once

// Observed order of a residual under grid refinement.

#include <span>

namespace bonnet {

/// Least-squares slope of log r against log h. Needs at least two levels
/// with positive residuals; returns NaN otherwise.
double observed_order(std::span<const double> h, std::span<const double> r);

/// A residual sequence converges at the expected order, or its finest
/// value already sits at the roundoff floor (identities that hold exactly
/// in the discretization have no order to observe).
bool converges(std::span<const double> h, std::span<const double> r, double min_order,
               double floor);

}  // namespace bonnet
