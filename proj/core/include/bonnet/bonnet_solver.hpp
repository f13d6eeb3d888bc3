#pragma once

// The s-dependent profile of a Bonnet surface in isothermal coordinates.
//
// Given Q(s) from the solution table and a positive constant tau_c, the
// mean curvature solves the third-order equation
//
//   (H''/H')' + 2 tau_c H' = 2 Q^2 (1 + tau_c H^2 / H'),
//
// and the remaining functions follow algebraically:
//   J = H'/Q,  E = tau_c Q^2 / H',  e = sqrt(E),  A = Q/e,
//   B = (log A)'/Q,  C = (1/Q)'.

#include <cstddef>
#include <span>
#include <vector>

#include "bonnet/q_family.hpp"

namespace bonnet {

class Grid;

struct HInitialData {
  double s0 = 1.0;
  double H0 = 0.0;
  double H0p = 1.0;
  double H0pp = 0.0;
  double tau_c = 1.0;

  /// H0p > 0 and tau_c > 0.
  void validate() const;
};

/// Immutable, sampled profile. All per-sample columns share s().
class SurfaceProfile {
 public:
  enum class Column { H, Hp, Hpp, J, E, e, A, B, C, Q };

  /// Derives J, E, e, A, B, C, Q and (log e)' from samples of H, H', H''.
  /// B uses second-order differences of log A on the samples themselves.
  SurfaceProfile(QFamily family, double tau_c, std::vector<double> s,
                 std::vector<double> H, std::vector<double> Hp,
                 std::vector<double> Hpp);

  const QFamily& family() const { return family_; }
  double tau_c() const { return tau_c_; }
  std::size_t size() const { return s_.size(); }
  /// Uniform sample spacing.
  double step() const { return s_[1] - s_[0]; }

  std::span<const double> s() const { return s_; }
  std::span<const double> H() const { return H_; }
  std::span<const double> Hp() const { return Hp_; }
  std::span<const double> Hpp() const { return Hpp_; }
  std::span<const double> J() const { return J_; }
  std::span<const double> E() const { return E_; }
  std::span<const double> e() const { return e_; }
  std::span<const double> A() const { return A_; }
  std::span<const double> B() const { return B_; }
  std::span<const double> C() const { return C_; }
  std::span<const double> Q() const { return Q_; }
  /// (log e)' = Q'/Q - H''/(2H'), from the analytic Q' and the H'' state.
  std::span<const double> dlog_e() const { return dlog_e_; }
  std::span<const double> column(Column c) const;

  /// K = H^2 - J^2 per sample.
  std::vector<double> gauss_curvature() const;

  /// Copy with one column replaced and nothing re-derived.
  SurfaceProfile with_column(Column c, std::vector<double> values) const;

  /// Every stride-th sample (starting at 0).
  SurfaceProfile every(std::size_t stride) const;

  /// Positivity, E J = tau_c Q and A e = Q (relative 1e-10). Throws
  /// ConsistencyError naming the first violation.
  void validate() const;

 private:
  SurfaceProfile() = default;

  QFamily family_;
  double tau_c_ = 1.0;
  std::vector<double> s_, H_, Hp_, Hpp_, J_, E_, e_, A_, B_, C_, Q_, dlog_e_;
};

/// (Hppp Hp - Hpp^2)/Hp^2 + 2 tau_c Hp - 2 Q^2 (1 + tau_c H^2/Hp).
/// Throws PreconditionError when Hp == 0.
double h_ode_residual(double s, double H, double Hp, double Hpp, double Hppp,
                      const QFamily& fam, double tau_c);

/// H''' isolated from the mean-curvature equation.
double h_third_derivative(double s, double H, double Hp, double Hpp, const QFamily& fam,
                          double tau_c);

/// RK4 on (H, H', H'') from ics.s0 to s1 with the given step (the final step
/// is shortened to land on s1). Throws RegimeExitError if H' <= 0 and
/// BlowUpError if the state exceeds 1e8.
SurfaceProfile integrate_h(const HInitialData& ics, const QFamily& fam, double s1,
                           double step);

/// Profile sampled exactly at the s-nodes of grid, integrated with
/// grid.hs()/substeps and derived quantities computed at the fine spacing.
/// ics.s0 must equal grid.s_min().
SurfaceProfile integrate_h_on_grid(const HInitialData& ics, const QFamily& fam,
                                   const Grid& grid, std::size_t substeps = 4);

/// max over interior samples of |(log E)'' - 2Q^2 + (H''/H')'|.
double gauss_s_residual(const SurfaceProfile& profile);

/// Residuals of the closed differential system along s (interior max).
struct IdealResiduals {
  double log_a;  ///< (log A)' - Q B
  double b;      ///< B' - Q (B C + 1 + (H^2 - J^2) A^-2), two samples in from each end
  double c;      ///< C' - Q (C^2 - 1), analytic C'
  double h;      ///< H' - Q J
  double log_j;  ///< (log J)' - Q (2B + C)
};
IdealResiduals ideal_residuals(const SurfaceProfile& profile);

/// max |e'/e^2 + A (B + C)|.
double geodesic_curvature_residual(const SurfaceProfile& profile);

}  // namespace bonnet
