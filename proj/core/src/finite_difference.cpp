#include "bonnet/finite_difference.hpp"

#include "bonnet/errors.hpp"

namespace bonnet::fd {

namespace {

void require_samples(std::span<const double> f, std::size_t needed) {
  if (f.size() < needed) {
    throw PreconditionError("finite differences need at least " +
                            std::to_string(needed) + " samples, got " +
                            std::to_string(f.size()));
  }
}

}  // namespace

double first_derivative_at(std::span<const double> f, double h, std::size_t k) {
  const std::size_t n = f.size();
  if (k == 0) return (-11.0 * f[0] + 18.0 * f[1] - 9.0 * f[2] + 2.0 * f[3]) / (6.0 * h);
  if (k == n - 1)
    return (11.0 * f[n - 1] - 18.0 * f[n - 2] + 9.0 * f[n - 3] - 2.0 * f[n - 4]) / (6.0 * h);
  return (f[k + 1] - f[k - 1]) / (2.0 * h);
}

double second_derivative_at(std::span<const double> f, double h, std::size_t k) {
  const std::size_t n = f.size();
  const double h2 = h * h;
  if (k == 0) return (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
  if (k == n - 1) {
    return (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
  }
  return (f[k + 1] - 2.0 * f[k] + f[k - 1]) / h2;
}

std::vector<double> first_derivative(std::span<const double> f, double h) {
  require_samples(f, 4);
  std::vector<double> out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = first_derivative_at(f, h, k);
  return out;
}

std::vector<double> second_derivative(std::span<const double> f, double h) {
  require_samples(f, 4);
  std::vector<double> out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = second_derivative_at(f, h, k);
  return out;
}

double midpoint_value(std::span<const double> f, std::size_t k) {
  const std::size_t n = f.size();
  if (n < 4) return 0.5 * (f[k] + f[k + 1]);
  if (k == 0) {
    return (5.0 * f[0] + 15.0 * f[1] - 5.0 * f[2] + f[3]) / 16.0;
  }
  if (k + 2 == n) {
    return (f[n - 4] - 5.0 * f[n - 3] + 15.0 * f[n - 2] + 5.0 * f[n - 1]) / 16.0;
  }
  return (-f[k - 1] + 9.0 * f[k] + 9.0 * f[k + 1] - f[k + 2]) / 16.0;
}

}  // namespace bonnet::fd
