#include "bonnet/forms2d.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "bonnet/errors.hpp"
#include "bonnet/finite_difference.hpp"

namespace bonnet {

SingularCoframeError::SingularCoframeError(std::size_t i, std::size_t j, double det)
    : Error([&] {
        std::ostringstream msg;
        msg << "singular coframe at node (" << i << ", " << j
            << "), determinant " << std::setprecision(17) << det;
        return msg.str();
      }()),
      i_(i),
      j_(j),
      det_(det) {}

Grid::Grid(double s_min, double s_max, double t_min, double t_max, std::size_t ns,
           std::size_t nt)
    : s_min_(s_min), s_max_(s_max), t_min_(t_min), t_max_(t_max), ns_(ns), nt_(nt) {
  if (!std::isfinite(s_min) || !std::isfinite(s_max) || !std::isfinite(t_min) ||
      !std::isfinite(t_max)) {
    throw PreconditionError("grid bounds must be finite");
  }
  if (ns < 5 || nt < 5) {
    throw PreconditionError("grid needs at least 5 nodes per direction");
  }
  if (!(s_max > s_min) || !(t_max > t_min)) {
    throw PreconditionError("grid bounds must satisfy min < max");
  }
  hs_ = (s_max - s_min) / static_cast<double>(ns - 1);
  ht_ = (t_max - t_min) / static_cast<double>(nt - 1);
}

double Grid::s(std::size_t i) const {
  return i + 1 == ns_ ? s_max_ : s_min_ + static_cast<double>(i) * hs_;
}

double Grid::t(std::size_t j) const {
  return j + 1 == nt_ ? t_max_ : t_min_ + static_cast<double>(j) * ht_;
}

std::vector<double> Grid::s_nodes() const {
  std::vector<double> out(ns_);
  for (std::size_t i = 0; i < ns_; ++i) out[i] = s(i);
  return out;
}

Grid Grid::refined() const {
  return Grid(s_min_, s_max_, t_min_, t_max_, 2 * ns_ - 1, 2 * nt_ - 1);
}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw GridMismatchError("scalar field has " + std::to_string(values_.size()) +
                            " values for a grid of " + std::to_string(grid_.size()));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw NonFiniteError("non-finite field value at node (" +
                           std::to_string(k / grid_.nt()) + ", " +
                           std::to_string(k % grid_.nt()) + ")");
    }
  }
}

ScalarField ScalarField::constant(const Grid& grid, double value) {
  return ScalarField(grid, std::vector<double>(grid.size(), value));
}

ScalarField ScalarField::from_s_profile(const Grid& grid, std::span<const double> values) {
  if (values.size() != grid.ns()) {
    throw GridMismatchError("s-profile has " + std::to_string(values.size()) +
                            " samples for " + std::to_string(grid.ns()) + " s-nodes");
  }
  return generate(grid, [&](std::size_t i, std::size_t) { return values[i]; });
}

std::vector<double> ScalarField::s_line(std::size_t j) const {
  std::vector<double> out(grid_.ns());
  for (std::size_t i = 0; i < grid_.ns(); ++i) out[i] = (*this)(i, j);
  return out;
}

std::vector<double> ScalarField::t_line(std::size_t i) const {
  auto first = values_.begin() + static_cast<std::ptrdiff_t>(grid_.index(i, 0));
  return {first, first + static_cast<std::ptrdiff_t>(grid_.nt())};
}

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw GridMismatchError("operands live on different grids");
}

template <class Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op) {
  require_same_grid(a.grid(), b.grid());
  std::vector<double> v(a.values().size());
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = op(av[k], bv[k]);
  return ScalarField(a.grid(), std::move(v));
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x + y; });
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x - y; });
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x * y; });
}
ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x / y; });
}
ScalarField operator*(double c, const ScalarField& a) {
  return a.map([c](double x) { return c * x; });
}
ScalarField operator+(const ScalarField& a, double c) {
  return a.map([c](double x) { return x + c; });
}
ScalarField operator-(const ScalarField& a) {
  return a.map([](double x) { return -x; });
}

OneForm::OneForm(ScalarField p, ScalarField q) : p_(std::move(p)), q_(std::move(q)) {
  require_same_grid(p_.grid(), q_.grid());
}

OneForm OneForm::ds(const Grid& grid) {
  return {ScalarField::constant(grid, 1.0), ScalarField::constant(grid, 0.0)};
}
OneForm OneForm::dt(const Grid& grid) {
  return {ScalarField::constant(grid, 0.0), ScalarField::constant(grid, 1.0)};
}
OneForm OneForm::zero(const Grid& grid) {
  return {ScalarField::constant(grid, 0.0), ScalarField::constant(grid, 0.0)};
}

OneForm operator+(const OneForm& a, const OneForm& b) {
  return {a.p() + b.p(), a.q() + b.q()};
}
OneForm operator-(const OneForm& a, const OneForm& b) {
  return {a.p() - b.p(), a.q() - b.q()};
}
OneForm operator-(const OneForm& a) { return {-a.p(), -a.q()}; }
OneForm operator*(const ScalarField& f, const OneForm& w) {
  return {f * w.p(), f * w.q()};
}
OneForm operator*(double c, const OneForm& w) { return {c * w.p(), c * w.q()}; }

TwoForm operator+(const TwoForm& a, const TwoForm& b) { return TwoForm(a.r() + b.r()); }
TwoForm operator-(const TwoForm& a, const TwoForm& b) { return TwoForm(a.r() - b.r()); }
TwoForm operator*(const ScalarField& f, const TwoForm& w) { return TwoForm(f * w.r()); }
TwoForm operator*(double c, const TwoForm& w) { return TwoForm(c * w.r()); }

ScalarField partial_s(const ScalarField& f) {
  const Grid& g = f.grid();
  std::vector<double> out(g.size());
  for (std::size_t j = 0; j < g.nt(); ++j) {
    const auto line = f.s_line(j);
    for (std::size_t i = 0; i < g.ns(); ++i)
      out[g.index(i, j)] = fd::first_derivative_at(line, g.hs(), i);
  }
  return ScalarField(g, std::move(out));
}

ScalarField partial_t(const ScalarField& f) {
  const Grid& g = f.grid();
  std::vector<double> out(g.size());
  const auto values = f.values();
  for (std::size_t i = 0; i < g.ns(); ++i) {
    auto line = values.subspan(g.index(i, 0), g.nt());
    for (std::size_t j = 0; j < g.nt(); ++j)
      out[g.index(i, j)] = fd::first_derivative_at(line, g.ht(), j);
  }
  return ScalarField(g, std::move(out));
}

ScalarField second_partial_s(const ScalarField& f) {
  const Grid& g = f.grid();
  std::vector<double> out(g.size());
  for (std::size_t j = 0; j < g.nt(); ++j) {
    const auto line = f.s_line(j);
    for (std::size_t i = 0; i < g.ns(); ++i)
      out[g.index(i, j)] = fd::second_derivative_at(line, g.hs(), i);
  }
  return ScalarField(g, std::move(out));
}

ScalarField second_partial_t(const ScalarField& f) {
  const Grid& g = f.grid();
  std::vector<double> out(g.size());
  const auto values = f.values();
  for (std::size_t i = 0; i < g.ns(); ++i) {
    auto line = values.subspan(g.index(i, 0), g.nt());
    for (std::size_t j = 0; j < g.nt(); ++j)
      out[g.index(i, j)] = fd::second_derivative_at(line, g.ht(), j);
  }
  return ScalarField(g, std::move(out));
}

OneForm exterior_derivative(const ScalarField& f) {
  return {partial_s(f), partial_t(f)};
}

TwoForm exterior_derivative(const OneForm& w) {
  return TwoForm(partial_s(w.q()) - partial_t(w.p()));
}

TwoForm wedge(const OneForm& a, const OneForm& b) {
  return TwoForm(a.p() * b.q() - a.q() * b.p());
}

OneForm hodge(const OneForm& w) { return {-w.q(), w.p()}; }

CoframeComponents decompose_in_coframe(const OneForm& w, const OneForm& c1,
                                       const OneForm& c2) {
  require_same_grid(w.grid(), c1.grid());
  require_same_grid(w.grid(), c2.grid());
  const Grid& g = w.grid();
  std::vector<double> f1(g.size()), f2(g.size());
  for (std::size_t i = 0; i < g.ns(); ++i) {
    for (std::size_t j = 0; j < g.nt(); ++j) {
      // [c1.p c2.p; c1.q c2.q] [f1; f2] = [w.p; w.q]
      const double a = c1.p()(i, j), b = c2.p()(i, j);
      const double c = c1.q()(i, j), d = c2.q()(i, j);
      const double det = a * d - b * c;
      const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
      if (!(std::abs(det) >= 1e-12 * scale * scale) || scale == 0.0) {
        throw SingularCoframeError(i, j, det);
      }
      const double wp = w.p()(i, j), wq = w.q()(i, j);
      f1[g.index(i, j)] = (d * wp - b * wq) / det;
      f2[g.index(i, j)] = (a * wq - c * wp) / det;
    }
  }
  return {ScalarField(g, std::move(f1)), ScalarField(g, std::move(f2))};
}

ScalarField laplacian(const ScalarField& f) {
  return second_partial_s(f) + second_partial_t(f);
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_interior(const ScalarField& f, std::size_t margin) {
  const Grid& g = f.grid();
  if (2 * margin >= g.ns() || 2 * margin >= g.nt()) {
    throw PreconditionError("interior margin leaves no nodes");
  }
  double m = 0.0;
  for (std::size_t i = margin; i + margin < g.ns(); ++i)
    for (std::size_t j = margin; j + margin < g.nt(); ++j)
      m = std::max(m, std::abs(f(i, j)));
  return m;
}

double max_abs_interior(const OneForm& w, std::size_t margin) {
  return std::max(max_abs_interior(w.p(), margin), max_abs_interior(w.q(), margin));
}

double max_abs_interior(const TwoForm& w, std::size_t margin) {
  return max_abs_interior(w.r(), margin);
}

void write_csv(std::ostream& out, const ScalarField& f, std::string_view value_name) {
  const Grid& g = f.grid();
  out << "s,t," << value_name << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < g.ns(); ++i)
    for (std::size_t j = 0; j < g.nt(); ++j)
      out << g.s(i) << ',' << g.t(j) << ',' << f(i, j) << '\n';
}

}  // namespace bonnet
