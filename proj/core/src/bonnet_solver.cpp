#include "bonnet/bonnet_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bonnet/errors.hpp"
#include "bonnet/finite_difference.hpp"
#include "bonnet/forms2d.hpp"

namespace bonnet {

namespace {

constexpr double kStateBlowUp = 1e8;

std::vector<double> map_values(std::span<const double> x, double (*f)(double)) {
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), f);
  return out;
}

double log_of(double x) { return std::log(x); }

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

void HInitialData::validate() const {
  if (!(H0p > 0.0)) throw PreconditionError("initial H' must be positive");
  if (!(tau_c > 0.0)) throw PreconditionError("tau_c must be positive");
  if (!std::isfinite(s0) || !std::isfinite(H0) || !std::isfinite(H0pp) ||
      !std::isfinite(H0p) || !std::isfinite(tau_c)) {
    throw PreconditionError("initial data must be finite");
  }
}

SurfaceProfile::SurfaceProfile(QFamily family, double tau_c, std::vector<double> s,
                               std::vector<double> H, std::vector<double> Hp,
                               std::vector<double> Hpp)
    : family_(family),
      tau_c_(tau_c),
      s_(std::move(s)),
      H_(std::move(H)),
      Hp_(std::move(Hp)),
      Hpp_(std::move(Hpp)) {
  const std::size_t n = s_.size();
  if (n < 5) throw PreconditionError("a profile needs at least 5 samples");
  if (H_.size() != n || Hp_.size() != n || Hpp_.size() != n) {
    throw PreconditionError("profile columns differ in length");
  }
  J_.resize(n);
  E_.resize(n);
  e_.resize(n);
  A_.resize(n);
  C_.resize(n);
  Q_.resize(n);
  dlog_e_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const QDerivatives q = eval_q_derivatives(family_, s_[k]);
    Q_[k] = q.q;
    J_[k] = Hp_[k] / q.q;
    E_[k] = tau_c_ * q.q * q.q / Hp_[k];
    e_[k] = std::sqrt(E_[k]);
    A_[k] = q.q / e_[k];
    C_[k] = -q.dq / (q.q * q.q);
    dlog_e_[k] = q.dq / q.q - 0.5 * Hpp_[k] / Hp_[k];
  }
  const auto dlog_a = fd::first_derivative(map_values(A_, log_of), step());
  B_.resize(n);
  for (std::size_t k = 0; k < n; ++k) B_[k] = dlog_a[k] / Q_[k];
}

std::span<const double> SurfaceProfile::column(Column c) const {
  switch (c) {
    case Column::H: return H_;
    case Column::Hp: return Hp_;
    case Column::Hpp: return Hpp_;
    case Column::J: return J_;
    case Column::E: return E_;
    case Column::e: return e_;
    case Column::A: return A_;
    case Column::B: return B_;
    case Column::C: return C_;
    case Column::Q: return Q_;
  }
  return {};
}

std::vector<double> SurfaceProfile::gauss_curvature() const {
  std::vector<double> K(size());
  for (std::size_t k = 0; k < size(); ++k) K[k] = H_[k] * H_[k] - J_[k] * J_[k];
  return K;
}

SurfaceProfile SurfaceProfile::with_column(Column c, std::vector<double> values) const {
  if (values.size() != size()) throw PreconditionError("replacement column length");
  SurfaceProfile out = *this;
  switch (c) {
    case Column::H: out.H_ = std::move(values); break;
    case Column::Hp: out.Hp_ = std::move(values); break;
    case Column::Hpp: out.Hpp_ = std::move(values); break;
    case Column::J: out.J_ = std::move(values); break;
    case Column::E: out.E_ = std::move(values); break;
    case Column::e: out.e_ = std::move(values); break;
    case Column::A: out.A_ = std::move(values); break;
    case Column::B: out.B_ = std::move(values); break;
    case Column::C: out.C_ = std::move(values); break;
    case Column::Q: out.Q_ = std::move(values); break;
  }
  return out;
}

SurfaceProfile SurfaceProfile::every(std::size_t stride) const {
  if (stride == 0) throw PreconditionError("stride must be positive");
  if ((size() - 1) % stride != 0) {
    throw PreconditionError("stride does not divide the sample count");
  }
  auto pick = [stride](const std::vector<double>& v) {
    std::vector<double> out;
    out.reserve(v.size() / stride + 1);
    for (std::size_t k = 0; k < v.size(); k += stride) out.push_back(v[k]);
    return out;
  };
  SurfaceProfile out;
  out.family_ = family_;
  out.tau_c_ = tau_c_;
  out.s_ = pick(s_);
  out.H_ = pick(H_);
  out.Hp_ = pick(Hp_);
  out.Hpp_ = pick(Hpp_);
  out.J_ = pick(J_);
  out.E_ = pick(E_);
  out.e_ = pick(e_);
  out.A_ = pick(A_);
  out.B_ = pick(B_);
  out.C_ = pick(C_);
  out.Q_ = pick(Q_);
  out.dlog_e_ = pick(dlog_e_);
  if (out.size() < 5) throw PreconditionError("subsampled profile has fewer than 5 samples");
  return out;
}

void SurfaceProfile::validate() const {
  for (std::size_t k = 0; k < size(); ++k) {
    auto fail = [&](const char* what) {
      std::ostringstream msg;
      msg << "profile invariant '" << what << "' violated at s = " << s_[k];
      throw ConsistencyError(msg.str());
    };
    if (!(Hp_[k] > 0.0)) fail("H' > 0");
    if (!(J_[k] > 0.0)) fail("J > 0");
    if (!(E_[k] > 0.0)) fail("E > 0");
    if (!(e_[k] > 0.0)) fail("e > 0");
    if (!(A_[k] > 0.0)) fail("A > 0");
    if (!(Q_[k] > 0.0)) fail("Q > 0");
    if (rel_gap(E_[k] * J_[k], tau_c_ * Q_[k]) > 1e-10) fail("E J = tau_c Q");
    if (rel_gap(J_[k], Hp_[k] / Q_[k]) > 1e-10) fail("J = H'/Q");
    if (rel_gap(A_[k] * e_[k], Q_[k]) > 1e-10) fail("A e = Q");
  }
}

double h_ode_residual(double s, double H, double Hp, double Hpp, double Hppp,
                      const QFamily& fam, double tau_c) {
  if (Hp == 0.0) {
    throw PreconditionError("H' = 0: critical point of the mean curvature");
  }
  const double q = eval_q(fam, s);
  return (Hppp * Hp - Hpp * Hpp) / (Hp * Hp) + 2.0 * tau_c * Hp -
         2.0 * q * q * (1.0 + tau_c * H * H / Hp);
}

double h_third_derivative(double s, double H, double Hp, double Hpp, const QFamily& fam,
                          double tau_c) {
  const double q = eval_q(fam, s);
  return Hpp * Hpp / Hp + Hp * (2.0 * q * q * (1.0 + tau_c * H * H / Hp) - 2.0 * tau_c * Hp);
}

SurfaceProfile integrate_h(const HInitialData& ics, const QFamily& fam, double s1,
                           double step) {
  ics.validate();
  if (!(step > 0.0)) throw PreconditionError("step must be positive");
  const SingularityGuard guard(fam);
  guard.check(ics.s0);
  guard.check(s1);

  const double span = s1 - ics.s0;
  const auto n = static_cast<std::size_t>(std::ceil(std::abs(span) / step - 1e-9));
  if (n < 4) throw PreconditionError("integration interval shorter than 4 steps");
  const double h = span / static_cast<double>(n);

  struct State {
    double H, Hp, Hpp;
  };
  auto rhs = [&](double s, const State& y) {
    if (!(y.Hp > 0.0)) throw PreconditionError("H' <= 0 inside an RK stage");
    return State{y.Hp, y.Hpp, h_third_derivative(s, y.H, y.Hp, y.Hpp, fam, ics.tau_c)};
  };
  auto axpy = [](const State& y, double c, const State& k) {
    return State{y.H + c * k.H, y.Hp + c * k.Hp, y.Hpp + c * k.Hpp};
  };

  std::vector<double> s{ics.s0}, H{ics.H0}, Hp{ics.H0p}, Hpp{ics.H0pp};
  State y{ics.H0, ics.H0p, ics.H0pp};
  for (std::size_t k = 0; k < n; ++k) {
    const double sk = ics.s0 + static_cast<double>(k) * h;
    State next;
    try {
      const State k1 = rhs(sk, y);
      const State k2 = rhs(sk + 0.5 * h, axpy(y, 0.5 * h, k1));
      const State k3 = rhs(sk + 0.5 * h, axpy(y, 0.5 * h, k2));
      const State k4 = rhs(sk + h, axpy(y, h, k3));
      next = {y.H + h / 6.0 * (k1.H + 2.0 * k2.H + 2.0 * k3.H + k4.H),
              y.Hp + h / 6.0 * (k1.Hp + 2.0 * k2.Hp + 2.0 * k3.Hp + k4.Hp),
              y.Hpp + h / 6.0 * (k1.Hpp + 2.0 * k2.Hpp + 2.0 * k3.Hpp + k4.Hpp)};
    } catch (const PreconditionError&) {
      next = {0.0, 0.0, 0.0};
    }
    const double s_next = k + 1 == n ? s1 : ics.s0 + static_cast<double>(k + 1) * h;
    if (!std::isfinite(next.H) || !std::isfinite(next.Hp) || !std::isfinite(next.Hpp) ||
        std::abs(next.H) > kStateBlowUp || std::abs(next.Hp) > kStateBlowUp ||
        std::abs(next.Hpp) > kStateBlowUp) {
      throw BlowUpError("mean-curvature state blew up near s = " + std::to_string(s_next),
                        s_next);
    }
    if (!(next.Hp > 0.0)) {
      std::ostringstream msg;
      msg << "H' reached zero before s = " << s_next << "; last valid s = " << sk;
      throw RegimeExitError(msg.str(), sk);
    }
    y = next;
    s.push_back(s_next);
    H.push_back(y.H);
    Hp.push_back(y.Hp);
    Hpp.push_back(y.Hpp);
  }
  SurfaceProfile profile(fam, ics.tau_c, std::move(s), std::move(H), std::move(Hp),
                         std::move(Hpp));
  profile.validate();
  return profile;
}

SurfaceProfile integrate_h_on_grid(const HInitialData& ics, const QFamily& fam,
                                   const Grid& grid, std::size_t substeps) {
  if (substeps == 0) throw PreconditionError("substeps must be positive");
  if (std::abs(ics.s0 - grid.s_min()) > 1e-12 * std::max(1.0, std::abs(ics.s0))) {
    throw PreconditionError("initial data must sit at the grid's s_min");
  }
  const double fine = grid.hs() / static_cast<double>(substeps);
  return integrate_h(ics, fam, grid.s_max(), fine).every(substeps);
}

double gauss_s_residual(const SurfaceProfile& profile) {
  const std::size_t n = profile.size();
  if (n < 5) throw PreconditionError("gauss residual needs at least 5 samples");
  const double h = profile.step();
  const auto log_e2 = fd::second_derivative(map_values(profile.E(), log_of), h);
  std::vector<double> ratio(n);
  for (std::size_t k = 0; k < n; ++k) ratio[k] = profile.Hpp()[k] / profile.Hp()[k];
  const auto dratio = fd::first_derivative(ratio, h);
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double q = profile.Q()[k];
    worst = std::max(worst, std::abs(log_e2[k] - 2.0 * q * q + dratio[k]));
  }
  return worst;
}

IdealResiduals ideal_residuals(const SurfaceProfile& profile) {
  const std::size_t n = profile.size();
  const double h = profile.step();
  const auto Q = profile.Q();
  const auto B = profile.B();
  const auto C = profile.C();
  const auto dlog_a = fd::first_derivative(map_values(profile.A(), log_of), h);
  const auto dB = fd::first_derivative(B, h);
  const auto dlog_j = fd::first_derivative(map_values(profile.J(), log_of), h);

  IdealResiduals r{0, 0, 0, 0, 0};
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double s = profile.s()[k];
    const double H = profile.H()[k], J = profile.J()[k], A = profile.A()[k];
    const double curvature = (H * H - J * J) / (A * A);
    r.log_a = std::max(r.log_a, std::abs(dlog_a[k] - Q[k] * B[k]));
    // B is itself a difference, so skip the node next to each end
    if (k >= 2 && k + 2 < n)
      r.b = std::max(r.b, std::abs(dB[k] - Q[k] * (B[k] * C[k] + 1.0 + curvature)));
    r.c = std::max(r.c, std::abs(eval_c_derivative(profile.family(), s) -
                                 Q[k] * (C[k] * C[k] - 1.0)));
    r.h = std::max(r.h, std::abs(profile.Hp()[k] - Q[k] * J));
    r.log_j = std::max(r.log_j, std::abs(dlog_j[k] - Q[k] * (2.0 * B[k] + C[k])));
  }
  return r;
}

double geodesic_curvature_residual(const SurfaceProfile& profile) {
  const auto de = fd::first_derivative(profile.e(), profile.step());
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < profile.size(); ++k) {
    const double e = profile.e()[k];
    worst = std::max(worst, std::abs(de[k] / (e * e) +
                                     profile.A()[k] * (profile.B()[k] + profile.C()[k])));
  }
  return worst;
}

}  // namespace bonnet
