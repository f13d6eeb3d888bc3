#include "bonnet/convergence.hpp"

#include <cmath>
#include <limits>

#include "bonnet/errors.hpp"

namespace bonnet {

double observed_order(std::span<const double> h, std::span<const double> r) {
  if (h.size() != r.size()) throw PreconditionError("observed_order: size mismatch");
  if (h.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (!(h[k] > 0.0) || !(r[k] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double x = std::log(h[k]), y = std::log(r[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / den;
}

bool converges(std::span<const double> h, std::span<const double> r, double min_order,
               double floor) {
  if (r.empty()) return false;
  if (r.back() <= floor) return true;
  const double p = observed_order(h, r);
  return std::isfinite(p) && p >= min_order;
}

}  // namespace bonnet
