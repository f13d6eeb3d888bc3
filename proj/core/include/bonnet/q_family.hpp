#pragma once

// Closed-form solutions Q(s) of Q''Q - Q'^2 = Q^4 with the integration
// constants fixed as in the six-row solution table:
//
//   kind       s > 0 column            s < 0 column
//   Rational   1/s       (s > 0)       -1/s        (s < 0)
//   Trig       a/sin(as) (0 < s < pi/a) -a/sin(as) (-pi/a < s < 0)
//   Hyper      a/sinh(as) (s > 0)      -a/sinh(as) (s < 0)
//
// Every row is positive on its domain and satisfies Q(s) = Q_+(-s) for the
// mirrored column.

#include <string>
#include <vector>

namespace bonnet {

enum class QKind { Rational, Trig, Hyper };

std::string to_string(QKind kind);
QKind q_kind_from_string(const std::string& name);

struct Interval {
  double lo;
  double hi;
  bool finite() const;
  double length() const { return hi - lo; }
};

struct QFamily {
  QKind kind = QKind::Rational;
  int sign = 1;    ///< +1 for the s > 0 column, -1 for the s < 0 column.
  double a = 1.0;  ///< Unused for Rational (kept at 1).

  /// Throws PreconditionError on sign not in {-1,+1} or a <= 0.
  void validate() const;
  /// Open natural domain (may be half-infinite).
  Interval domain() const;
  std::string name() const;

  friend bool operator==(const QFamily&, const QFamily&) = default;
};

/// Keeps evaluations a fixed distance away from the poles of Q.
class SingularityGuard {
 public:
  /// Default margin: 1e-3 times the domain length (or 1e-3 for
  /// half-infinite domains).
  explicit SingularityGuard(QFamily family);
  SingularityGuard(QFamily family, double margin);

  const QFamily& family() const { return family_; }
  double margin() const { return margin_; }
  /// Closed interval of admissible s. Half-infinite ends stay infinite.
  Interval guarded() const;
  /// Throws DomainError naming the violated endpoint.
  void check(double s) const;

 private:
  QFamily family_;
  double margin_;
};

struct QDerivatives {
  double q;
  double dq;
  double d2q;
};

double eval_q(const QFamily& fam, double s);
double eval_q(const SingularityGuard& guard, double s);

/// Analytic Q, Q', Q''.
QDerivatives eval_q_derivatives(const QFamily& fam, double s);
QDerivatives eval_q_derivatives(const SingularityGuard& guard, double s);

/// Q''Q - Q'^2 - Q^4 from analytic derivatives.
double q_ode_residual(const QFamily& fam, double s);

/// kappa with (Q')^2 = Q^4 + kappa Q^2, computed from the closed form and
/// checked at 128 guarded sample points (throws ConsistencyError).
double first_integral_kappa(const QFamily& fam);

/// C = (1/Q)'.
double eval_c(const QFamily& fam, double s);
/// C' (analytic).
double eval_c_derivative(const QFamily& fam, double s);

/// C' - Q (C^2 - 1) from analytic derivatives.
double c_ode_residual(const QFamily& fam, double s);

/// (log Q)' = Q'/Q.
double eval_log_q_derivative(const QFamily& fam, double s);

/// Uniform samples over a bounded sub-interval of the guarded domain used by
/// sweeps: the guarded interval itself when finite, else a window of
/// length 4/a starting at the guarded finite end.
std::vector<double> guarded_sweep(const QFamily& fam, std::size_t count);

struct QTrajectory {
  std::vector<double> s;
  std::vector<double> q;
  std::vector<double> dq;
  double kappa = 0.0;
  bool truncated = false;  ///< Blow-up guard fired before reaching s1.
};

/// Classical RK4 for Q'' = 2Q^3 + kappa Q, kappa = q0p^2/q0^2 - q0^2.
/// Integrates from s0 toward s1 (either direction) with |step|. Stops with
/// truncated = true once Q exceeds 1e6.
QTrajectory integrate_q_ode(double q0, double q0p, double s0, double s1, double step);

}  // namespace bonnet
