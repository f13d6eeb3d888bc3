#include "bonnet/surface_embed.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "bonnet/errors.hpp"
#include "bonnet/finite_difference.hpp"

namespace bonnet {

namespace {

constexpr double kMaxStepRotation = 0.5;

ScalarField cos2(const ScalarField& psi) {
  return psi.map([](double x) { return std::cos(2.0 * x); });
}
ScalarField sin2(const ScalarField& psi) {
  return psi.map([](double x) { return std::sin(2.0 * x); });
}

double max_of(std::initializer_list<double> xs) { return std::max(xs); }

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw GridMismatchError(std::string(what) + ": grids differ");
}

using Vec3Field = std::array<ScalarField, 3>;

Vec3Field components(const Grid& grid, const std::vector<Eigen::Vector3d>& v) {
  auto comp = [&](int c) {
    return ScalarField::generate(grid, [&](std::size_t i, std::size_t j) {
      return v[grid.index(i, j)][c];
    });
  };
  return {comp(0), comp(1), comp(2)};
}

Vec3Field apply3(const Vec3Field& f, ScalarField (*op)(const ScalarField&)) {
  return {op(f[0]), op(f[1]), op(f[2])};
}

ScalarField dot(const Vec3Field& a, const Vec3Field& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// One frame step of length h along a line with midpoint coefficients.
Eigen::Matrix3d step_rotation(double h, double w12, double w13, double w23) {
  const Eigen::Vector3d theta = h * Eigen::Vector3d(-w23, w13, -w12);
  const double angle = theta.norm();
  if (angle > kMaxStepRotation)
    throw RefineGridError("frame rotates by " + std::to_string(angle) +
                          " rad in one step; refine the grid");
  if (angle == 0.0) return Eigen::Matrix3d::Identity();
  return Eigen::AngleAxisd(angle, theta / angle).toRotationMatrix();
}

struct LineCoeffs {
  std::vector<double> w1, w2, w12, w13, w23;
};

LineCoeffs s_line_coeffs(const FrameForms& f, std::size_t j) {
  return {f.omega1.p().s_line(j), f.omega2.p().s_line(j), f.omega12.p().s_line(j),
          f.omega13.p().s_line(j), f.omega23.p().s_line(j)};
}
LineCoeffs t_line_coeffs(const FrameForms& f, std::size_t i) {
  return {f.omega1.q().t_line(i), f.omega2.q().t_line(i), f.omega12.q().t_line(i),
          f.omega13.q().t_line(i), f.omega23.q().t_line(i)};
}

// Rows of F are e1, e2, e3.
void integrate_line(FrameField& fr, const LineCoeffs& c, double h,
                    const std::vector<std::size_t>& nodes) {
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const std::size_t a = nodes[k], b = nodes[k + 1];
    Eigen::Matrix3d F;
    F.row(0) = fr.e1[a].transpose();
    F.row(1) = fr.e2[a].transpose();
    F.row(2) = fr.e3[a].transpose();
    const Eigen::Matrix3d R = step_rotation(h, fd::midpoint_value(c.w12, k),
                                            fd::midpoint_value(c.w13, k),
                                            fd::midpoint_value(c.w23, k));
    const Eigen::Matrix3d Fn = R * F;
    fr.e1[b] = Fn.row(0).transpose();
    fr.e2[b] = Fn.row(1).transpose();
    fr.e3[b] = Fn.row(2).transpose();
    const Eigen::Vector3d va = c.w1[k] * fr.e1[a] + c.w2[k] * fr.e2[a];
    const Eigen::Vector3d vb = c.w1[k + 1] * fr.e1[b] + c.w2[k + 1] * fr.e2[b];
    fr.x[b] = fr.x[a] + 0.5 * h * (va + vb);
  }
}

std::vector<std::size_t> s_line_nodes(const Grid& g, std::size_t j) {
  std::vector<std::size_t> n(g.ns());
  for (std::size_t i = 0; i < g.ns(); ++i) n[i] = g.index(i, j);
  return n;
}
std::vector<std::size_t> t_line_nodes(const Grid& g, std::size_t i) {
  std::vector<std::size_t> n(g.nt());
  for (std::size_t j = 0; j < g.nt(); ++j) n[j] = g.index(i, j);
  return n;
}

double tau_rhs(double tau, double a1, double a2) {
  const double s = std::sin(tau), c = std::cos(tau);
  return s * s * a2 - s * c * a1;
}

// RK4 along one line; a1, a2 are the alpha components in the line direction.
void integrate_tau_line(std::vector<double>& tau, const std::vector<double>& a1,
                        const std::vector<double>& a2, double h,
                        const std::vector<std::size_t>& nodes) {
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double y = tau[nodes[k]];
    const double m1 = fd::midpoint_value(a1, k), m2 = fd::midpoint_value(a2, k);
    const double k1 = tau_rhs(y, a1[k], a2[k]);
    const double k2 = tau_rhs(y + 0.5 * h * k1, m1, m2);
    const double k3 = tau_rhs(y + 0.5 * h * k2, m1, m2);
    const double k4 = tau_rhs(y + h * k3, a1[k + 1], a2[k + 1]);
    tau[nodes[k + 1]] = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

FrameForms rotated_forms(const FrameForms& f, const ScalarField& ct, const ScalarField& st,
                         const OneForm& dtau, const ScalarField& a, const ScalarField& c) {
  OneForm w1 = ct * f.omega1 - st * f.omega2;
  OneForm w2 = st * f.omega1 + ct * f.omega2;
  return {w1, w2, f.omega12 - dtau, a * w1, c * w2};
}

}  // namespace

GridProfile broadcast(const SurfaceProfile& profile, const Grid& grid) {
  if (profile.size() != grid.ns())
    throw GridMismatchError("profile has " + std::to_string(profile.size()) +
                            " samples, grid has " + std::to_string(grid.ns()) + " s-nodes");
  const auto s = profile.s();
  for (std::size_t i = 0; i < grid.ns(); ++i)
    if (std::abs(s[i] - grid.s(i)) > 1e-9 * (1.0 + std::abs(s[i])))
      throw GridMismatchError("profile sample " + std::to_string(i) +
                              " is off the grid s-node");
  auto b = [&](std::span<const double> v) { return ScalarField::from_s_profile(grid, v); };
  const auto K = profile.gauss_curvature();
  return {b(profile.H()), b(profile.J()), b(profile.E()), b(profile.e()),
          b(profile.A()), b(profile.B()), b(profile.C()), b(profile.Q()),
          b(K),           b(profile.dlog_e())};
}

CoframeSet build_coframes(const SurfaceProfile& profile, const PsiField& psi,
                          const Grid& grid) {
  require_same_grid(psi.psi.grid(), grid, "build_coframes");
  const GridProfile gp = broadcast(profile, grid);
  const ScalarField cp = psi.psi.map([](double x) { return std::cos(x); });
  const ScalarField sp = psi.psi.map([](double x) { return std::sin(x); });
  const OneForm ds = OneForm::ds(grid), dt = OneForm::dt(grid);

  OneForm omega1(gp.e * cp, -(gp.e * sp));
  OneForm omega2(gp.e * sp, gp.e * cp);
  OneForm omega12 = gp.dlog_e * dt - exterior_derivative(psi.psi);

  // H_1 = (H'/e) cos psi, H_2 = (H'/e) sin psi
  const ScalarField Hp = ScalarField::from_s_profile(grid, profile.Hp());
  const ScalarField amp = Hp / (gp.e * gp.J);
  ScalarField u = amp * cp, v = amp * sp;

  OneForm theta1 = u * omega1 + v * omega2;
  OneForm theta2 = -(v * omega1) + u * omega2;
  OneForm alpha1 = u * omega1 - v * omega2;
  OneForm alpha2 = v * omega1 + u * omega2;
  OneForm xi1 = gp.e * ds, xi2 = gp.e * dt;
  OneForm xi12 = gp.dlog_e * dt;
  return {omega1, omega2, omega12, theta1, theta2, alpha1, alpha2, xi1, xi2, xi12, u, v};
}

StructureResiduals structure_residuals(const CoframeSet& cf, const SurfaceProfile& profile,
                                       double curvature_factor) {
  const GridProfile gp = broadcast(profile, cf.omega1.grid());
  const OneForm w13 = gp.a() * cf.omega1;
  const OneForm w23 = gp.c() * cf.omega2;
  auto m = [](const TwoForm& f) { return max_abs_interior(f); };
  return {
      m(exterior_derivative(cf.omega1) - wedge(cf.omega12, cf.omega2)),
      m(exterior_derivative(cf.omega2) - wedge(cf.omega1, cf.omega12)),
      m(exterior_derivative(w13) - wedge(cf.omega12, w23)),
      m(exterior_derivative(w23) - wedge(w13, cf.omega12)),
      m(exterior_derivative(cf.omega12) +
        (curvature_factor * gp.K) * wedge(cf.omega1, cf.omega2)),
  };
}

CodazziSummaryResiduals codazzi_summary_residuals(const CoframeSet& cf,
                                                  const SurfaceProfile& profile) {
  const GridProfile gp = broadcast(profile, cf.omega1.grid());
  const ScalarField logJ = gp.J.map([](double x) { return std::log(x); });
  return {
      max_abs_interior(exterior_derivative(gp.H) - gp.J * cf.theta1),
      max_abs_interior(exterior_derivative(logJ) - cf.alpha1 - 2.0 * hodge(cf.omega12)),
      max_abs_interior(exterior_derivative(cf.theta1)),
      max_abs_interior(exterior_derivative(cf.alpha1)),
      max_abs_interior(exterior_derivative(cf.alpha2) - wedge(cf.alpha1, cf.alpha2)),
  };
}

Theta12Residuals theta12_residual(const CoframeSet& cf, const PsiField& psi,
                                  const SurfaceProfile& profile) {
  const Grid& grid = cf.omega1.grid();
  require_same_grid(psi.psi.grid(), grid, "theta12_residual");
  const GridProfile gp = broadcast(profile, grid);
  const ScalarField logA = gp.A.map([](double x) { return std::log(x); });
  const OneForm dpsi = exterior_derivative(psi.psi);
  const OneForm theta12 = -(gp.C * gp.A) * cf.xi2;
  const ScalarField s2 = sin2(psi.psi), c2 = cos2(psi.psi);
  return {
      max_abs_interior(dpsi + cf.omega12 + hodge(exterior_derivative(logA)) - theta12),
      max_abs_interior(hodge(theta12) - gp.C * cf.theta1),
      max_abs_interior(dpsi + (0.5 * s2) * cf.theta1 + (0.5 * (gp.C + c2)) * cf.theta2),
      max_abs_interior(exterior_derivative(hodge(cf.omega12)), 2),
      max_abs_interior(exterior_derivative(hodge(theta12))),
      max_abs_interior(cf.xi12 + ((gp.C + gp.B) * gp.A) * cf.xi2),
  };
}

OneForm connection_form(const OneForm& w1, const OneForm& w2) {
  const Grid& grid = w1.grid();
  require_same_grid(w2.grid(), grid, "connection_form");
  const ScalarField r1 = exterior_derivative(w1).r();
  const ScalarField r2 = exterior_derivative(w2).r();
  std::vector<double> p(grid.size()), q(grid.size());
  // d w1 = w12 ^ w2 and d w2 = w1 ^ w12, linear in w12 = p ds + q dt.
  for (std::size_t i = 0; i < grid.ns(); ++i)
    for (std::size_t j = 0; j < grid.nt(); ++j) {
      const double ap = w1.p()(i, j), aq = w1.q()(i, j);
      const double bp = w2.p()(i, j), bq = w2.q()(i, j);
      const double det = ap * bq - aq * bp;
      const double scale = std::max({std::abs(ap), std::abs(aq), std::abs(bp), std::abs(bq)});
      if (!(std::abs(det) >= 1e-12 * scale * scale)) throw SingularCoframeError(i, j, det);
      const std::size_t k = grid.index(i, j);
      p[k] = (r1(i, j) * ap + r2(i, j) * bp) / det;
      q[k] = (r1(i, j) * aq + r2(i, j) * bq) / det;
    }
  return {ScalarField(grid, std::move(p)), ScalarField(grid, std::move(q))};
}

double rotation_transform_residual(const CoframeSet& cf, const ScalarField& tau_field) {
  require_same_grid(tau_field.grid(), cf.omega1.grid(), "rotation_transform_residual");
  const ScalarField ct = tau_field.map([](double x) { return std::cos(x); });
  const ScalarField st = tau_field.map([](double x) { return std::sin(x); });
  const OneForm w1 = ct * cf.omega1 - st * cf.omega2;
  const OneForm w2 = st * cf.omega1 + ct * cf.omega2;
  return max_abs_interior(connection_form(w1, w2) -
                          (cf.omega12 - exterior_derivative(tau_field)));
}

double scaling_transform_residual(const CoframeSet& cf, const ScalarField& log_scale) {
  require_same_grid(log_scale.grid(), cf.omega1.grid(), "scaling_transform_residual");
  const ScalarField f = log_scale.map([](double x) { return std::exp(x); });
  return max_abs_interior(connection_form(f * cf.omega1, f * cf.omega2) -
                          (cf.omega12 + hodge(exterior_derivative(log_scale))));
}

FrameForms frame_forms(const CoframeSet& cf, const PsiField& psi,
                       const SurfaceProfile& profile) {
  const Grid& grid = cf.omega1.grid();
  require_same_grid(psi.psi.grid(), grid, "frame_forms");
  const GridProfile gp = broadcast(profile, grid);
  const OneForm dpsi((-0.5 * gp.Q) * sin2(psi.psi), (-0.5 * gp.Q) * (gp.C + cos2(psi.psi)));
  const OneForm omega12 = gp.dlog_e * OneForm::dt(grid) - dpsi;
  return {cf.omega1, cf.omega2, omega12, gp.a() * cf.omega1, gp.c() * cf.omega2};
}

FrameField integrate_frame(const FrameForms& forms, const FrameSeed& seed,
                           IntegrationPath path) {
  const Grid& g = forms.omega1.grid();
  const Eigen::Matrix3d F0 = (Eigen::Matrix3d() << seed.e1.transpose(), seed.e2.transpose(),
                              seed.e3.transpose()).finished();
  if ((F0 * F0.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-12 ||
      F0.determinant() < 0.0)
    throw PreconditionError("frame seed is not orthonormal and right-handed");

  FrameField fr{g, std::vector<Eigen::Vector3d>(g.size()), std::vector<Eigen::Vector3d>(g.size()),
                std::vector<Eigen::Vector3d>(g.size()), std::vector<Eigen::Vector3d>(g.size())};
  fr.x[0] = seed.x;
  fr.e1[0] = seed.e1;
  fr.e2[0] = seed.e2;
  fr.e3[0] = seed.e3;
  if (path == IntegrationPath::TEdgeThenSLines) {
    integrate_line(fr, t_line_coeffs(forms, 0), g.ht(), t_line_nodes(g, 0));
    for (std::size_t j = 0; j < g.nt(); ++j)
      integrate_line(fr, s_line_coeffs(forms, j), g.hs(), s_line_nodes(g, j));
  } else {
    integrate_line(fr, s_line_coeffs(forms, 0), g.hs(), s_line_nodes(g, 0));
    for (std::size_t i = 0; i < g.ns(); ++i)
      integrate_line(fr, t_line_coeffs(forms, i), g.ht(), t_line_nodes(g, i));
  }
  return fr;
}

FrameField integrate_frame(const SurfaceProfile& profile, const PsiField& psi,
                           const Grid& grid, const FrameSeed& seed, IntegrationPath path) {
  const CoframeSet cf = build_coframes(profile, psi, grid);
  return integrate_frame(frame_forms(cf, psi, profile), seed, path);
}

double orthonormality_drift(const FrameField& frame) {
  double d = 0.0;
  for (std::size_t k = 0; k < frame.grid.size(); ++k) {
    const std::array<const Eigen::Vector3d*, 3> e{&frame.e1[k], &frame.e2[k], &frame.e3[k]};
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b)
        d = std::max(d, std::abs(e[a]->dot(*e[b]) - (a == b ? 1.0 : 0.0)));
    d = std::max(d, (frame.e3[k] - frame.e1[k].cross(frame.e2[k])).cwiseAbs().maxCoeff());
  }
  return d;
}

double frame_difference(const FrameField& a, const FrameField& b) {
  require_same_grid(a.grid, b.grid, "frame_difference");
  double d = 0.0;
  for (std::size_t k = 0; k < a.grid.size(); ++k)
    d = max_of({d, (a.x[k] - b.x[k]).norm(), (a.e1[k] - b.e1[k]).norm(),
                (a.e2[k] - b.e2[k]).norm(), (a.e3[k] - b.e3[k]).norm()});
  return d;
}

MetricResiduals metric_residuals(const FrameField& frame, const SurfaceProfile& profile) {
  const GridProfile gp = broadcast(profile, frame.grid);
  const Vec3Field x = components(frame.grid, frame.x);
  const Vec3Field xs = apply3(x, partial_s), xt = apply3(x, partial_t);
  return {max_abs_interior(dot(xs, xs) - gp.E), max_abs_interior(dot(xt, xt) - gp.E),
          max_abs_interior(dot(xs, xt))};
}

FundamentalForms fundamental_forms(const SurfaceProfile& profile, const PsiField& psi) {
  const Grid& grid = psi.psi.grid();
  const GridProfile gp = broadcast(profile, grid);
  const ScalarField c2 = cos2(psi.psi), s2 = sin2(psi.psi);
  const ScalarField EJ = gp.E * gp.J;
  FundamentalForms ff{gp.E, gp.E * gp.H + EJ * c2, -(EJ * s2), gp.E * gp.H - EJ * c2};

  const double gap = fundamental_form_identity_gap(profile, psi);
  const double scale = std::max(1.0, max_abs(EJ));
  if (gap > 1e-9 * scale)
    throw ConsistencyError("second fundamental form: E J and tau_c Q forms disagree by " +
                           std::to_string(gap));
  return ff;
}

double fundamental_form_identity_gap(const SurfaceProfile& profile, const PsiField& psi) {
  const Grid& grid = psi.psi.grid();
  const GridProfile gp = broadcast(profile, grid);
  const ScalarField c2 = cos2(psi.psi), s2 = sin2(psi.psi);
  const ScalarField EJ = gp.E * gp.J;
  const ScalarField tQ = profile.tau_c() * gp.Q;
  return std::max(max_abs(EJ * c2 - tQ * c2), max_abs(EJ * s2 - tQ * s2));
}

FundamentalForms forms_from_frame(const FrameField& frame) {
  const Grid& g = frame.grid;
  const Vec3Field x = components(g, frame.x);
  const Vec3Field n = components(g, frame.e3);
  const Vec3Field xs = apply3(x, partial_s), xt = apply3(x, partial_t);
  const Vec3Field xss = apply3(x, second_partial_s), xtt = apply3(x, second_partial_t);
  const Vec3Field xst = apply3(xs, partial_t);
  return {0.5 * (dot(xs, xs) + dot(xt, xt)), dot(xss, n), dot(xst, n), dot(xtt, n)};
}

double second_form_vs_frame(const FundamentalForms& ff, const FrameField& frame) {
  require_same_grid(ff.L.grid(), frame.grid, "second_form_vs_frame");
  const FundamentalForms fd = forms_from_frame(frame);
  return max_of({max_abs_interior(fd.L - ff.L), max_abs_interior(fd.M - ff.M),
                 max_abs_interior(fd.N - ff.N)});
}

DeformationParam integrate_deformation(const CoframeSet& cf, double t0, IntegrationPath path,
                                       std::optional<double> chern_tolerance) {
  if (!std::isfinite(t0)) throw PreconditionError("t0 must be finite");
  const Grid& g = cf.alpha1.grid();

  const double chern = std::max(max_abs_interior(exterior_derivative(cf.alpha1)),
                                max_abs_interior(exterior_derivative(cf.alpha2) -
                                                 wedge(cf.alpha1, cf.alpha2)));
  const double h = std::max(g.hs(), g.ht());
  const double amax = std::max(max_abs(cf.alpha1.p()) + max_abs(cf.alpha1.q()),
                               max_abs(cf.alpha2.p()) + max_abs(cf.alpha2.q()));
  const double tol = chern_tolerance.value_or(25.0 * h * h * amax * amax + 1e-10);
  if (chern > tol)
    throw PreconditionError("Chern criterion residual " + std::to_string(chern) +
                            " exceeds " + std::to_string(tol));

  std::vector<double> tau(g.size(), 0.0);
  tau[0] = std::atan2(1.0, t0);
  auto along_t = [&](std::size_t i) {
    integrate_tau_line(tau, cf.alpha1.q().t_line(i), cf.alpha2.q().t_line(i), g.ht(),
                       t_line_nodes(g, i));
  };
  auto along_s = [&](std::size_t j) {
    integrate_tau_line(tau, cf.alpha1.p().s_line(j), cf.alpha2.p().s_line(j), g.hs(),
                       s_line_nodes(g, j));
  };
  if (path == IntegrationPath::TEdgeThenSLines) {
    along_t(0);
    for (std::size_t j = 0; j < g.nt(); ++j) along_s(j);
  } else {
    along_s(0);
    for (std::size_t i = 0; i < g.ns(); ++i) along_t(i);
  }

  DeformationParam dp{ScalarField(g, tau), std::nullopt, t0, 0};
  // sin tau = 0 is invariant for the angle equation, so a crossing only
  // shows up as a numerical artifact; count them rather than trust cot.
  const double lo = std::floor(tau[0] / std::numbers::pi);
  for (double x : tau)
    if (std::floor(x / std::numbers::pi) != lo) ++dp.pole_crossings;
  if (dp.pole_crossings == 0)
    dp.t_field = dp.tau.map([](double x) { return std::cos(x) / std::sin(x); });
  return dp;
}

DeformedSurface build_deformed_surface(const SurfaceProfile& profile, const PsiField& psi,
                                       const DeformationParam& dp, const Grid& grid,
                                       const FrameSeed& seed) {
  require_same_grid(dp.tau.grid(), grid, "build_deformed_surface");
  const CoframeSet cf = build_coframes(profile, psi, grid);
  const GridProfile gp = broadcast(profile, grid);
  const ScalarField ct = dp.tau.map([](double x) { return std::cos(x); });
  const ScalarField st = dp.tau.map([](double x) { return std::sin(x); });
  // d tau from the angle equation itself, no differencing of tau
  const OneForm dtau = (st * st) * cf.alpha2 - (st * ct) * cf.alpha1;
  const FrameForms forms =
      rotated_forms(frame_forms(cf, psi, profile), ct, st, dtau, gp.a(), gp.c());
  FrameField frame = integrate_frame(forms, seed);
  FundamentalForms ff = forms_from_frame(frame);
  return {std::move(frame), std::move(ff)};
}

DeformationReport compare_deformation(const SurfaceProfile& profile, const PsiField& psi,
                                      const DeformedSurface& deformed) {
  const Grid& grid = deformed.frame.grid;
  const GridProfile gp = broadcast(profile, grid);
  const MetricResiduals mr = metric_residuals(deformed.frame, profile);
  const FundamentalForms& fs = deformed.forms;
  const ScalarField Hstar = (fs.L + fs.N) / (2.0 * fs.E_I);
  const FundamentalForms base = fundamental_forms(profile, psi);
  return {max_of({mr.xs_squared, mr.xt_squared, mr.cross}), max_abs_interior(Hstar - gp.H),
          max_abs_interior(fs.L - base.L)};
}

WeingartenResiduals weingarten_residual(const SurfaceProfile& profile, const PsiField& psi,
                                        const Grid& grid) {
  require_same_grid(psi.psi.grid(), grid, "weingarten_residual");
  const FundamentalForms ff = fundamental_forms(profile, psi);
  const ScalarField K = (ff.L * ff.N - ff.M * ff.M) / (ff.E_I * ff.E_I);
  return weingarten_residual(broadcast(profile, grid).H, K);
}

WeingartenResiduals weingarten_residual(const ScalarField& H, const ScalarField& K) {
  require_same_grid(H.grid(), K.grid(), "weingarten_residual");
  const Grid& g = H.grid();
  double var = 0.0;
  for (std::size_t i = 0; i < g.ns(); ++i) {
    const auto line = K.t_line(i);
    const auto [lo, hi] = std::minmax_element(line.begin(), line.end());
    var = std::max(var, *hi - *lo);
  }
  return {max_abs_interior(wedge(exterior_derivative(H), exterior_derivative(K))), var};
}

std::string obj_string(const FrameField& frame) {
  const Grid& g = frame.grid;
  std::ostringstream out;
  out << std::setprecision(17);
  for (const auto& p : frame.x) {
    if (!p.allFinite()) throw NonFiniteError("non-finite vertex in mesh export");
    out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  }
  for (std::size_t i = 0; i + 1 < g.ns(); ++i)
    for (std::size_t j = 0; j + 1 < g.nt(); ++j) {
      const std::size_t v00 = g.index(i, j) + 1, v01 = g.index(i, j + 1) + 1;
      const std::size_t v10 = g.index(i + 1, j) + 1, v11 = g.index(i + 1, j + 1) + 1;
      out << "f " << v00 << ' ' << v10 << ' ' << v11 << '\n';
      out << "f " << v00 << ' ' << v11 << ' ' << v01 << '\n';
    }
  return out.str();
}

void export_obj(const FrameField& frame, const std::filesystem::path& path) {
  const std::string text = obj_string(frame);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw Error("failed writing " + path.string());
}

}  // namespace bonnet
