#include "bonnet/lax_psi.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bonnet/bonnet_solver.hpp"
#include "bonnet/errors.hpp"

namespace bonnet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPsiBlowUp = 1e3;
constexpr int kLaxSubsteps = 8;

double principal(double angle) {
  // (-pi/2, pi/2]
  while (angle > 0.5 * kPi) angle -= kPi;
  while (angle <= -0.5 * kPi) angle += kPi;
  return angle;
}

/// tan psi = n/d together with first partials of n and d.
struct Ratio {
  double n, n_s, n_t;
  double d, d_s, d_t;

  PsiPoint point() const {
    const double norm = n * n + d * d;
    return {principal(std::atan2(n, d)), (n_s * d - n * d_s) / norm,
            (n_t * d - n * d_t) / norm};
  }
};

Ratio branch_ratio(const PsiBranch& b, double s, double t) {
  const double a = b.family.a;
  switch (b.kind) {
    case PsiCase::RationalUpper:
      return {-(t + b.sigma), 0.0, -1.0, s, 1.0, 0.0};
    case PsiCase::RationalLower:
      return {s, 1.0, 0.0, t + b.sigma, 0.0, 1.0};
    case PsiCase::TrigAppendix: {
      // tanh(at/2 + eta) * sin((as + pi)/2) / cos((as + pi)/2)
      const double th = std::tanh(0.5 * a * t + b.eta);
      const double sech2 = 1.0 - th * th;
      const double x = 0.5 * (a * s + kPi);
      const double sx = std::sin(x), cx = std::cos(x);
      return {th * sx, th * cx * 0.5 * a, 0.5 * a * sech2 * sx, cx, -sx * 0.5 * a, 0.0};
    }
    case PsiCase::HyperAppendix: {
      // cos(at/2 + eta) cosh(as/2) / (sin(at/2 + eta) sinh(as/2))
      const double y = 0.5 * a * t + b.eta;
      const double cy = std::cos(y), sy = std::sin(y);
      const double ch = std::cosh(0.5 * a * s), sh = std::sinh(0.5 * a * s);
      return {cy * ch, 0.5 * a * cy * sh, -0.5 * a * sy * ch,
              sy * sh, 0.5 * a * sy * ch, 0.5 * a * cy * sh};
    }
    case PsiCase::ConstantZero:
    case PsiCase::ConstantHalfPi:
      break;
  }
  return {0, 0, 0, 1, 0, 0};
}

}  // namespace

std::string to_string(PsiCase c) {
  switch (c) {
    case PsiCase::ConstantZero: return "constant_zero";
    case PsiCase::ConstantHalfPi: return "constant_half_pi";
    case PsiCase::RationalUpper: return "rational_upper";
    case PsiCase::RationalLower: return "rational_lower";
    case PsiCase::TrigAppendix: return "trig_appendix";
    case PsiCase::HyperAppendix: return "hyper_appendix";
  }
  return "unknown";
}

PsiCase psi_case_from_string(const std::string& name) {
  for (PsiCase c : {PsiCase::ConstantZero, PsiCase::ConstantHalfPi, PsiCase::RationalUpper,
                    PsiCase::RationalLower, PsiCase::TrigAppendix, PsiCase::HyperAppendix}) {
    if (to_string(c) == name) return c;
  }
  throw PreconditionError("unknown psi branch '" + name + "'");
}

void PsiBranch::validate() const {
  family.validate();
  auto require = [&](bool ok) {
    if (!ok) {
      throw PreconditionError("psi branch " + to_string(kind) +
                              " does not pair with Q family " + family.name());
    }
  };
  switch (kind) {
    case PsiCase::ConstantZero:
    case PsiCase::ConstantHalfPi:
      break;
    case PsiCase::RationalUpper:
      require(family.kind == QKind::Rational && family.sign > 0);
      break;
    case PsiCase::RationalLower:
      require(family.kind == QKind::Rational && family.sign < 0);
      break;
    case PsiCase::TrigAppendix:
      require(family.kind == QKind::Trig);
      break;
    case PsiCase::HyperAppendix:
      require(family.kind == QKind::Hyper);
      break;
  }
  if (!std::isfinite(sigma) || !std::isfinite(eta)) {
    throw PreconditionError("branch shifts must be finite");
  }
}

bool PsiBranch::derived_mirror() const {
  return (kind == PsiCase::TrigAppendix || kind == PsiCase::HyperAppendix) &&
         family.sign < 0;
}

PsiPoint psi_closed_form_derivatives(const PsiBranch& branch, double s, double t) {
  branch.validate();
  SingularityGuard(branch.family).check(s);
  switch (branch.kind) {
    case PsiCase::ConstantZero: return {0.0, 0.0, 0.0};
    case PsiCase::ConstantHalfPi: return {0.5 * kPi, 0.0, 0.0};
    default: break;
  }
  if (branch.derived_mirror()) {
    const PsiPoint p = branch_ratio(branch, -s, -t).point();
    return {principal(p.psi + 0.5 * kPi), -p.psi_s, -p.psi_t};
  }
  return branch_ratio(branch, s, t).point();
}

double psi_closed_form(const PsiBranch& branch, double s, double t) {
  return psi_closed_form_derivatives(branch, s, t).psi;
}

namespace {

double nearest_lift(double value, double reference) {
  return value + kPi * std::round((reference - value) / kPi);
}

}  // namespace

PsiField sample_psi(const PsiBranch& branch, const Grid& grid) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.ns(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j)
      v[grid.index(i, j)] = psi_closed_form(branch, grid.s(i), grid.t(j));
  for (std::size_t j = 1; j < grid.nt(); ++j)
    v[grid.index(0, j)] = nearest_lift(v[grid.index(0, j)], v[grid.index(0, j - 1)]);
  for (std::size_t j = 0; j < grid.nt(); ++j)
    for (std::size_t i = 1; i < grid.ns(); ++i)
      v[grid.index(i, j)] = nearest_lift(v[grid.index(i, j)], v[grid.index(i - 1, j)]);
  return {ScalarField(grid, std::move(v)), branch};
}

void validate(const PsiField& field) {
  if (!field.branch) return;
  const Grid& g = field.psi.grid();
  for (std::size_t i = 0; i < g.ns(); ++i) {
    for (std::size_t j = 0; j < g.nt(); ++j) {
      const double closed = psi_closed_form(*field.branch, g.s(i), g.t(j));
      const double stored = field.psi(i, j);
      if (std::abs(nearest_lift(closed, stored) - stored) > 1e-12) {
        std::ostringstream msg;
        msg << "psi field disagrees with its closed form at node (" << i << ", " << j << ")";
        throw ConsistencyError(msg.str());
      }
    }
  }
}

std::vector<double> q_on_s_nodes(const QFamily& fam, const Grid& grid) {
  const SingularityGuard guard(fam);
  std::vector<double> q(grid.ns());
  for (std::size_t i = 0; i < grid.ns(); ++i) q[i] = eval_q(guard, grid.s(i));
  return q;
}

namespace {

std::vector<double> dlogq_on_s_nodes(const QFamily& fam, const Grid& grid) {
  std::vector<double> out(grid.ns());
  for (std::size_t i = 0; i < grid.ns(); ++i) out[i] = eval_log_q_derivative(fam, grid.s(i));
  return out;
}

/// Right-hand sides of the Lax system evaluated on the field.
std::pair<ScalarField, ScalarField> lax_rhs(const ScalarField& psi, const QFamily& fam) {
  const Grid& g = psi.grid();
  const auto q = q_on_s_nodes(fam, g);
  const auto dlogq = dlogq_on_s_nodes(fam, g);
  auto fs = ScalarField::generate(
      g, [&](std::size_t i, std::size_t j) { return -0.5 * q[i] * std::sin(2.0 * psi(i, j)); });
  auto ft = ScalarField::generate(g, [&](std::size_t i, std::size_t j) {
    return 0.5 * dlogq[i] - 0.5 * q[i] * std::cos(2.0 * psi(i, j));
  });
  return {std::move(fs), std::move(ft)};
}

}  // namespace

LaxResiduals lax_residuals(const PsiField& psi, const QFamily& fam) {
  auto [fs, ft] = lax_rhs(psi.psi, fam);
  return {partial_s(psi.psi) - fs, partial_t(psi.psi) - ft};
}

LaxResiduals lax_residuals_analytic(const PsiBranch& branch, const Grid& grid) {
  const QFamily& fam = branch.family;
  std::vector<double> r1(grid.size()), r2(grid.size());
  for (std::size_t i = 0; i < grid.ns(); ++i) {
    const double s = grid.s(i);
    const double q = eval_q(fam, s);
    const double dlogq = eval_log_q_derivative(fam, s);
    for (std::size_t j = 0; j < grid.nt(); ++j) {
      const PsiPoint p = psi_closed_form_derivatives(branch, s, grid.t(j));
      r1[grid.index(i, j)] = p.psi_s + 0.5 * q * std::sin(2.0 * p.psi);
      r2[grid.index(i, j)] = p.psi_t - 0.5 * dlogq + 0.5 * q * std::cos(2.0 * p.psi);
    }
  }
  return {ScalarField(grid, std::move(r1)), ScalarField(grid, std::move(r2))};
}

namespace {

/// Classical RK4 for y' = f(x, y) from x0 to x1 in n steps.
template <class F>
double rk4(F&& f, double x0, double x1, double y, int n) {
  const double h = (x1 - x0) / n;
  for (int k = 0; k < n; ++k) {
    const double x = x0 + k * h;
    const double k1 = f(x, y);
    const double k2 = f(x + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = f(x + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = f(x + h, y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

}  // namespace

PsiField integrate_lax(const QFamily& fam, const Grid& grid, double psi0,
                       IntegrationPath path) {
  const SingularityGuard guard(fam);
  guard.check(grid.s_min());
  guard.check(grid.s_max());
  if (!std::isfinite(psi0)) throw PreconditionError("psi0 must be finite");

  auto along_s = [&](double s, double psi) {
    return -0.5 * eval_q(guard, s) * std::sin(2.0 * psi);
  };
  auto along_t_at = [&](double s) {
    const double q = eval_q(guard, s);
    const double dlogq = eval_log_q_derivative(fam, s);
    return [q, dlogq](double, double psi) { return 0.5 * dlogq - 0.5 * q * std::cos(2.0 * psi); };
  };

  std::vector<double> v(grid.size());
  auto store = [&](std::size_t i, std::size_t j, double value) {
    if (!std::isfinite(value) || std::abs(value) > kPsiBlowUp) {
      std::ostringstream msg;
      msg << "psi blew up at node (" << i << ", " << j << ")";
      throw BlowUpError(msg.str(), grid.s(i));
    }
    v[grid.index(i, j)] = value;
  };
  store(0, 0, psi0);

  if (path == IntegrationPath::TEdgeThenSLines) {
    const auto edge = along_t_at(grid.s(0));
    for (std::size_t j = 1; j < grid.nt(); ++j)
      store(0, j, rk4(edge, grid.t(j - 1), grid.t(j), v[grid.index(0, j - 1)], kLaxSubsteps));
    for (std::size_t j = 0; j < grid.nt(); ++j)
      for (std::size_t i = 1; i < grid.ns(); ++i)
        store(i, j,
              rk4(along_s, grid.s(i - 1), grid.s(i), v[grid.index(i - 1, j)], kLaxSubsteps));
  } else {
    for (std::size_t i = 1; i < grid.ns(); ++i)
      store(i, 0, rk4(along_s, grid.s(i - 1), grid.s(i), v[grid.index(i - 1, 0)], kLaxSubsteps));
    for (std::size_t i = 0; i < grid.ns(); ++i) {
      const auto line = along_t_at(grid.s(i));
      for (std::size_t j = 1; j < grid.nt(); ++j)
        store(i, j, rk4(line, grid.t(j - 1), grid.t(j), v[grid.index(i, j - 1)], kLaxSubsteps));
    }
  }
  return {ScalarField(grid, std::move(v)), std::nullopt};
}

double harmonic_residual(const PsiField& psi) {
  return max_abs_interior(laplacian(psi.psi));
}

double compatibility_residual(const PsiField& psi, const QFamily& fam) {
  auto [fs, ft] = lax_rhs(psi.psi, fam);
  return max_abs_interior(partial_t(fs) - partial_s(ft));
}

AlphaCoframe alpha_coframe(const PsiField& psi, std::span<const double> q_nodes) {
  const Grid& g = psi.psi.grid();
  if (q_nodes.size() != g.ns()) throw GridMismatchError("Q samples do not match s-nodes");
  auto comp = [&](auto f) {
    return ScalarField::generate(g, [&](std::size_t i, std::size_t j) {
      return q_nodes[i] * f(2.0 * psi.psi(i, j));
    });
  };
  auto sin2 = [](double x) { return std::sin(x); };
  auto cos2 = [](double x) { return std::cos(x); };
  auto msin2 = [](double x) { return -std::sin(x); };
  return {OneForm(comp(cos2), comp(msin2)), OneForm(comp(sin2), comp(cos2))};
}

namespace {

void require_aligned(const SurfaceProfile& profile, const Grid& grid) {
  if (profile.size() != grid.ns()) {
    throw GridMismatchError("profile samples do not align with grid s-nodes");
  }
  for (std::size_t i = 0; i < grid.ns(); ++i) {
    if (std::abs(profile.s()[i] - grid.s(i)) > 1e-9 * std::max(1.0, std::abs(grid.s(i)))) {
      throw GridMismatchError("profile sample " + std::to_string(i) +
                              " is not at the matching grid s-node");
    }
  }
}

ScalarField sin2(const ScalarField& psi) {
  return psi.map([](double x) { return std::sin(2.0 * x); });
}
ScalarField cos2(const ScalarField& psi) {
  return psi.map([](double x) { return std::cos(2.0 * x); });
}

}  // namespace

ScalarField constraint_residual_514(const PsiField& psi, const QFamily& fam,
                                    const SurfaceProfile& profile) {
  const Grid& g = psi.psi.grid();
  require_aligned(profile, g);
  const SingularityGuard guard(fam);
  guard.check(g.s_min());
  guard.check(g.s_max());
  std::vector<double> q(g.ns());
  for (std::size_t i = 0; i < g.ns(); ++i) q[i] = profile.Hp()[i] / profile.J()[i];
  const AlphaCoframe alpha = alpha_coframe(psi, q);
  const auto [psi1, psi2] =
      decompose_in_coframe(exterior_derivative(psi.psi), alpha.alpha1, alpha.alpha2);
  return 2.0 * psi1 * cos2(psi.psi) + (2.0 * psi2 + 1.0) * sin2(psi.psi);
}

ScalarField alpha_laplace_residual(const PsiField& psi, std::span<const double> q_nodes) {
  const AlphaCoframe alpha = alpha_coframe(psi, q_nodes);
  const auto [psi1, psi2] =
      decompose_in_coframe(exterior_derivative(psi.psi), alpha.alpha1, alpha.alpha2);
  const auto d1 = decompose_in_coframe(exterior_derivative(psi1), alpha.alpha1, alpha.alpha2);
  const auto d2 = decompose_in_coframe(exterior_derivative(psi2), alpha.alpha1, alpha.alpha2);
  return d1.first + d2.second + psi1;
}

ScalarField mixed_partial_residual(const ScalarField& f, const AlphaCoframe& alpha) {
  const auto [f1, f2] = decompose_in_coframe(exterior_derivative(f), alpha.alpha1, alpha.alpha2);
  const auto d1 = decompose_in_coframe(exterior_derivative(f1), alpha.alpha1, alpha.alpha2);
  const auto d2 = decompose_in_coframe(exterior_derivative(f2), alpha.alpha1, alpha.alpha2);
  // f_12 is the alpha_2 coefficient of d f_1; f_21 the alpha_1 coefficient of d f_2.
  return d2.first - d1.second + f2;
}

CRelationResiduals c_relation_residuals(const PsiField& psi, const QFamily& fam) {
  const Grid& g = psi.psi.grid();
  const AlphaCoframe alpha = alpha_coframe(psi, q_on_s_nodes(fam, g));
  const auto [psi1, psi2] =
      decompose_in_coframe(exterior_derivative(psi.psi), alpha.alpha1, alpha.alpha2);
  std::vector<double> c_nodes(g.ns());
  for (std::size_t i = 0; i < g.ns(); ++i) c_nodes[i] = eval_c(fam, g.s(i));
  const ScalarField C = ScalarField::from_s_profile(g, c_nodes);
  const auto [c1, c2] = decompose_in_coframe(exterior_derivative(C), alpha.alpha1, alpha.alpha2);
  const ScalarField s2 = sin2(psi.psi), c2psi = cos2(psi.psi);
  return {2.0 * psi1 - C * s2, (2.0 * psi2 + 1.0) + C * c2psi,
          c1 + C * (2.0 * psi2 + 1.0) + c2psi, c2 - 2.0 * C * psi1 + s2};
}

}  // namespace bonnet
