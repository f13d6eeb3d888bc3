#pragma once

// Sampled scalar fields and differential forms on a rectangular (s,t) grid.
//
// Exterior derivatives use second-order central differences in the
// interior and one-sided stencils on the boundary. Residual norms are taken
// over interior nodes only. A difference of a difference picks up an O(h)
// error one node in from the edge, because the one-sided and central
// stencils have different h^2 terms; such residuals use margin 2.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace bonnet {

/// Uniform node lattice over [s_min, s_max] x [t_min, t_max].
class Grid {
 public:
  Grid(double s_min, double s_max, double t_min, double t_max, std::size_t ns,
       std::size_t nt);

  double s_min() const { return s_min_; }
  double s_max() const { return s_max_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  std::size_t ns() const { return ns_; }
  std::size_t nt() const { return nt_; }
  std::size_t size() const { return ns_ * nt_; }
  double hs() const { return hs_; }
  double ht() const { return ht_; }

  double s(std::size_t i) const;
  double t(std::size_t j) const;
  std::vector<double> s_nodes() const;

  /// Row-major: s is the slow index.
  std::size_t index(std::size_t i, std::size_t j) const { return i * nt_ + j; }

  /// Same lattice with twice as many cells in each direction.
  Grid refined() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double s_min_, s_max_, t_min_, t_max_;
  std::size_t ns_, nt_;
  double hs_, ht_;
};

/// Immutable function sampled at every node of a grid.
class ScalarField {
 public:
  ScalarField(Grid grid, std::vector<double> values);

  static ScalarField constant(const Grid& grid, double value);

  /// Samples f(s, t) at every node.
  template <class F>
  static ScalarField sample(const Grid& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.ns(); ++i)
      for (std::size_t j = 0; j < grid.nt(); ++j)
        v[grid.index(i, j)] = f(grid.s(i), grid.t(j));
    return ScalarField(grid, std::move(v));
  }

  /// Builds the field from node indices, f(i, j).
  template <class F>
  static ScalarField generate(const Grid& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.ns(); ++i)
      for (std::size_t j = 0; j < grid.nt(); ++j) v[grid.index(i, j)] = f(i, j);
    return ScalarField(grid, std::move(v));
  }

  /// Broadcasts per-s-node values along t.
  static ScalarField from_s_profile(const Grid& grid, std::span<const double> values);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[grid_.index(i, j)];
  }

  /// Values along the s-line at fixed t index j (s varies).
  std::vector<double> s_line(std::size_t j) const;
  /// Values along the t-line at fixed s index i (t varies).
  std::vector<double> t_line(std::size_t i) const;

  template <class F>
  ScalarField map(F&& f) const {
    std::vector<double> v(values_.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = f(values_[k]);
    return ScalarField(grid_, std::move(v));
  }

 private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator/(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double c, const ScalarField& a);
ScalarField operator+(const ScalarField& a, double c);
ScalarField operator-(const ScalarField& a);

/// p ds + q dt
class OneForm {
 public:
  OneForm(ScalarField p, ScalarField q);

  static OneForm ds(const Grid& grid);
  static OneForm dt(const Grid& grid);
  static OneForm zero(const Grid& grid);

  const ScalarField& p() const { return p_; }
  const ScalarField& q() const { return q_; }
  const Grid& grid() const { return p_.grid(); }

 private:
  ScalarField p_, q_;
};

OneForm operator+(const OneForm& a, const OneForm& b);
OneForm operator-(const OneForm& a, const OneForm& b);
OneForm operator-(const OneForm& a);
OneForm operator*(const ScalarField& f, const OneForm& w);
OneForm operator*(double c, const OneForm& w);

/// r ds^dt
class TwoForm {
 public:
  explicit TwoForm(ScalarField r) : r_(std::move(r)) {}

  const ScalarField& r() const { return r_; }
  const Grid& grid() const { return r_.grid(); }

 private:
  ScalarField r_;
};

TwoForm operator+(const TwoForm& a, const TwoForm& b);
TwoForm operator-(const TwoForm& a, const TwoForm& b);
TwoForm operator*(const ScalarField& f, const TwoForm& w);
TwoForm operator*(double c, const TwoForm& w);

ScalarField partial_s(const ScalarField& f);
ScalarField partial_t(const ScalarField& f);
ScalarField second_partial_s(const ScalarField& f);
ScalarField second_partial_t(const ScalarField& f);

/// df = f_s ds + f_t dt.
OneForm exterior_derivative(const ScalarField& f);
/// d(p ds + q dt) = (q_s - p_t) ds^dt.
TwoForm exterior_derivative(const OneForm& w);

TwoForm wedge(const OneForm& a, const OneForm& b);

/// *ds = dt, *dt = -ds.
OneForm hodge(const OneForm& w);

/// Coefficients of a 1-form in a moving coframe: w = first*c1 + second*c2.
struct CoframeComponents {
  ScalarField first;
  ScalarField second;
};

/// Solves the pointwise 2x2 system. Throws SingularCoframeError where
/// |det| < 1e-12 * (largest coframe component at the node)^2.
CoframeComponents decompose_in_coframe(const OneForm& w, const OneForm& c1,
                                       const OneForm& c2);

/// Five-point Laplacian; boundary rows use one-sided second differences.
ScalarField laplacian(const ScalarField& f);

double max_abs(const ScalarField& f);
double max_abs_interior(const ScalarField& f, std::size_t margin = 1);
double max_abs_interior(const OneForm& w, std::size_t margin = 1);
double max_abs_interior(const TwoForm& w, std::size_t margin = 1);

/// CSV with header "s,t,<value_name>", row-major, 17 significant digits.
void write_csv(std::ostream& out, const ScalarField& f,
               std::string_view value_name = "value");

}  // namespace bonnet
