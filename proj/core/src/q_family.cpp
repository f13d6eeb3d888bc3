#include "bonnet/q_family.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bonnet/errors.hpp"

namespace bonnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQBlowUp = 1e6;

}  // namespace

std::string to_string(QKind kind) {
  switch (kind) {
    case QKind::Rational: return "rational";
    case QKind::Trig: return "trig";
    case QKind::Hyper: return "hyper";
  }
  return "unknown";
}

QKind q_kind_from_string(const std::string& name) {
  if (name == "rational") return QKind::Rational;
  if (name == "trig") return QKind::Trig;
  if (name == "hyper") return QKind::Hyper;
  throw PreconditionError("unknown Q family kind '" + name + "'");
}

bool Interval::finite() const { return std::isfinite(lo) && std::isfinite(hi); }

void QFamily::validate() const {
  if (sign != 1 && sign != -1) throw PreconditionError("family sign must be +1 or -1");
  if (kind != QKind::Rational && !(a > 0.0 && std::isfinite(a))) {
    throw PreconditionError("family parameter a must be positive");
  }
}

Interval QFamily::domain() const {
  validate();
  double far = kInf;
  if (kind == QKind::Trig) far = std::numbers::pi / a;
  return sign > 0 ? Interval{0.0, far} : Interval{-far, 0.0};
}

std::string QFamily::name() const {
  std::ostringstream out;
  out << to_string(kind) << (sign > 0 ? "+" : "-");
  if (kind != QKind::Rational) out << "(a=" << a << ")";
  return out.str();
}

SingularityGuard::SingularityGuard(QFamily family)
    : SingularityGuard(family, [&] {
        const Interval d = family.domain();
        return d.finite() ? 1e-3 * d.length() : 1e-3;
      }()) {}

SingularityGuard::SingularityGuard(QFamily family, double margin)
    : family_(family), margin_(margin) {
  family_.validate();
  if (!(margin > 0.0)) throw PreconditionError("guard margin must be positive");
  const Interval g = guarded();
  if (!(g.hi > g.lo)) throw PreconditionError("guarded interval is empty");
}

Interval SingularityGuard::guarded() const {
  const Interval d = family_.domain();
  return {d.lo + margin_, d.hi - margin_};
}

void SingularityGuard::check(double s) const {
  const Interval d = family_.domain();
  const Interval g = guarded();
  if (!std::isfinite(s)) throw DomainError("non-finite s", s);
  if (s < g.lo) {
    std::ostringstream msg;
    msg << "s = " << s << " violates the lower endpoint " << d.lo << " of "
        << family_.name() << " (guard margin " << margin_ << ")";
    throw DomainError(msg.str(), d.lo);
  }
  if (s > g.hi) {
    std::ostringstream msg;
    msg << "s = " << s << " violates the upper endpoint " << d.hi << " of "
        << family_.name() << " (guard margin " << margin_ << ")";
    throw DomainError(msg.str(), d.hi);
  }
}

namespace {

// Derivatives of the s > 0 column at x = sign * s; the s < 0 column is
// Q_-(s) = Q_+(-s), so d/ds picks up one factor of sign per derivative.
QDerivatives positive_branch(const QFamily& fam, double x) {
  const double a = fam.a;
  switch (fam.kind) {
    case QKind::Rational:
      return {1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x)};
    case QKind::Trig: {
      const double sn = std::sin(a * x), cs = std::cos(a * x);
      const double q = a / sn;
      // d/dx a csc(ax) = -a^2 csc cot; second: a^3 csc (cot^2 + csc^2)
      const double csc = 1.0 / sn, cot = cs / sn;
      return {q, -a * a * csc * cot, a * a * a * csc * (cot * cot + csc * csc)};
    }
    case QKind::Hyper: {
      const double sh = std::sinh(a * x), ch = std::cosh(a * x);
      const double csch = 1.0 / sh, coth = ch / sh;
      return {a * csch, -a * a * csch * coth, a * a * a * csch * (coth * coth + csch * csch)};
    }
  }
  return {0, 0, 0};
}

}  // namespace

QDerivatives eval_q_derivatives(const SingularityGuard& guard, double s) {
  guard.check(s);
  const QFamily& fam = guard.family();
  const double sg = static_cast<double>(fam.sign);
  const QDerivatives p = positive_branch(fam, sg * s);
  return {p.q, sg * p.dq, p.d2q};
}

QDerivatives eval_q_derivatives(const QFamily& fam, double s) {
  return eval_q_derivatives(SingularityGuard(fam), s);
}

double eval_q(const SingularityGuard& guard, double s) {
  return eval_q_derivatives(guard, s).q;
}

double eval_q(const QFamily& fam, double s) { return eval_q(SingularityGuard(fam), s); }

double q_ode_residual(const QFamily& fam, double s) {
  const auto [q, dq, d2q] = eval_q_derivatives(fam, s);
  return d2q * q - dq * dq - q * q * q * q;
}

std::vector<double> guarded_sweep(const QFamily& fam, std::size_t count) {
  const SingularityGuard guard(fam);
  Interval g = guard.guarded();
  const double window = 4.0 / (fam.kind == QKind::Rational ? 1.0 : fam.a);
  if (!std::isfinite(g.hi)) g.hi = g.lo + window;
  if (!std::isfinite(g.lo)) g.lo = g.hi - window;
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = g.lo + (g.hi - g.lo) * static_cast<double>(k) / static_cast<double>(count - 1);
  }
  // the affine formula can overshoot g.hi by an ulp
  if (count > 1) out.back() = g.hi;
  return out;
}

double first_integral_kappa(const QFamily& fam) {
  const auto samples = guarded_sweep(fam, 128);
  // Evaluate at the sample with the smallest Q to limit cancellation.
  double best_s = samples.front();
  double best_q = std::numeric_limits<double>::infinity();
  for (double s : samples) {
    const double q = eval_q(fam, s);
    if (q < best_q) {
      best_q = q;
      best_s = s;
    }
  }
  const auto [q, dq, d2q] = eval_q_derivatives(fam, best_s);
  const double kappa = dq * dq / (q * q) - q * q;
  for (double s : samples) {
    const auto d = eval_q_derivatives(fam, s);
    const double q4 = d.q * d.q * d.q * d.q;
    const double lhs = d.dq * d.dq - q4 - kappa * d.q * d.q;
    if (std::abs(lhs) > 1e-9 * (q4 + d.dq * d.dq)) {
      std::ostringstream msg;
      msg << "first integral violated for " << fam.name() << " at s = " << s
          << ": residual " << lhs;
      throw ConsistencyError(msg.str());
    }
  }
  return kappa;
}

double eval_c(const QFamily& fam, double s) {
  const auto [q, dq, d2q] = eval_q_derivatives(fam, s);
  return -dq / (q * q);
}

double eval_c_derivative(const QFamily& fam, double s) {
  const auto [q, dq, d2q] = eval_q_derivatives(fam, s);
  return -d2q / (q * q) + 2.0 * dq * dq / (q * q * q);
}

double c_ode_residual(const QFamily& fam, double s) {
  const double q = eval_q(fam, s);
  const double c = eval_c(fam, s);
  return eval_c_derivative(fam, s) - q * (c * c - 1.0);
}

double eval_log_q_derivative(const QFamily& fam, double s) {
  const auto [q, dq, d2q] = eval_q_derivatives(fam, s);
  return dq / q;
}

QTrajectory integrate_q_ode(double q0, double q0p, double s0, double s1, double step) {
  if (!(q0 > 0.0)) throw PreconditionError("initial Q must be positive");
  if (!(step > 0.0)) throw PreconditionError("step must be positive");
  QTrajectory out;
  out.kappa = q0p * q0p / (q0 * q0) - q0 * q0;
  const double kappa = out.kappa;
  const double dir = s1 >= s0 ? 1.0 : -1.0;
  const double span = std::abs(s1 - s0);
  const auto n = static_cast<std::size_t>(std::ceil(span / step - 1e-9));
  const double h = n == 0 ? 0.0 : dir * span / static_cast<double>(n);

  auto accel = [kappa](double q) { return 2.0 * q * q * q + kappa * q; };

  double q = q0, dq = q0p;
  out.s.push_back(s0);
  out.q.push_back(q);
  out.dq.push_back(dq);
  for (std::size_t k = 0; k < n; ++k) {
    const double k1q = dq, k1v = accel(q);
    const double k2q = dq + 0.5 * h * k1v, k2v = accel(q + 0.5 * h * k1q);
    const double k3q = dq + 0.5 * h * k2v, k3v = accel(q + 0.5 * h * k2q);
    const double k4q = dq + h * k3v, k4v = accel(q + h * k3q);
    q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    dq += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!std::isfinite(q) || std::abs(q) > kQBlowUp) {
      out.truncated = true;
      break;
    }
    out.s.push_back(k + 1 == n ? s1 : s0 + static_cast<double>(k + 1) * h);
    out.q.push_back(q);
    out.dq.push_back(dq);
  }
  return out;
}

}  // namespace bonnet
