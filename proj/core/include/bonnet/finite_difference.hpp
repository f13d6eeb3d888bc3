#pragma once

#include <span>
#include <vector>

namespace bonnet::fd {

// Stencils on uniformly spaced samples: second-order central in the
// interior. At the two ends the first derivative uses a four-point
// third-order stencil and the second derivative a four-point second-order
// one. All require n >= 4.

double first_derivative_at(std::span<const double> f, double h, std::size_t k);
double second_derivative_at(std::span<const double> f, double h, std::size_t k);

std::vector<double> first_derivative(std::span<const double> f, double h);
std::vector<double> second_derivative(std::span<const double> f, double h);

/// Fourth-order estimate of f at the midpoint between samples k and k+1.
double midpoint_value(std::span<const double> f, std::size_t k);

}  // namespace bonnet::fd
