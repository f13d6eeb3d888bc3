#pragma once

// Coframes, connection forms and the immersion of a Bonnet surface over
// an isothermal (s, t) rectangle, plus the isometric deformation that
// keeps the mean curvature.
//
// Conventions: the principal frame e1, e2 makes the angle psi with the
// coordinate frame, so
//   omega1 = e (cos psi ds - sin psi dt),  omega2 = e (sin psi ds + cos psi dt),
//   omega12 = (log e)' dt - d psi,
//   omega13 = a omega1, omega23 = c omega2 with a = H + J, c = H - J,
// and the frame obeys
//   dx = omega1 e1 + omega2 e2,  de1 = omega12 e2 + omega13 e3,
//   de2 = -omega12 e1 + omega23 e3,  de3 = -omega13 e1 - omega23 e2.

#include <Eigen/Core>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bonnet/bonnet_solver.hpp"
#include "bonnet/forms2d.hpp"
#include "bonnet/lax_psi.hpp"

namespace bonnet {

/// Profile columns broadcast along t onto the grid.
struct GridProfile {
  ScalarField H, J, E, e, A, B, C, Q, K, dlog_e;

  ScalarField a() const { return H + J; }
  ScalarField c() const { return H - J; }
};

/// Throws GridMismatchError unless the profile samples sit on grid's s-nodes.
GridProfile broadcast(const SurfaceProfile& profile, const Grid& grid);

struct CoframeSet {
  OneForm omega1, omega2, omega12;
  OneForm theta1, theta2;
  OneForm alpha1, alpha2;
  OneForm xi1, xi2, xi12;
  ScalarField u, v;
};

/// omega12 uses a finite-difference d psi; u = H_1/J, v = H_2/J.
CoframeSet build_coframes(const SurfaceProfile& profile, const PsiField& psi,
                          const Grid& grid);

struct StructureResiduals {
  double first_structure_1;  ///< d omega1 - omega12 ^ omega2
  double first_structure_2;  ///< d omega2 - omega1 ^ omega12
  double codazzi_1;          ///< d omega13 - omega12 ^ omega23
  double codazzi_2;          ///< d omega23 - omega13 ^ omega12
  double gauss;              ///< d omega12 + K omega1 ^ omega2
};

/// curvature_factor multiplies K in the Gauss residual (1 for the real check).
StructureResiduals structure_residuals(const CoframeSet& cf, const SurfaceProfile& profile,
                                       double curvature_factor = 1.0);

struct CodazziSummaryResiduals {
  double dH;           ///< dH - J theta1
  double dlogJ;        ///< d log J - alpha1 - 2 *omega12
  double dtheta1;      ///< d theta1
  double dalpha1;      ///< d alpha1
  double dalpha2;      ///< d alpha2 - alpha1 ^ alpha2
};
CodazziSummaryResiduals codazzi_summary_residuals(const CoframeSet& cf,
                                                  const SurfaceProfile& profile);

struct Theta12Residuals {
  double relation;        ///< (d psi + omega12 + *d log A) + C A xi2
  double hodge_relation;  ///< *theta12 - C theta1
  double lemma_dpsi;      ///< d psi + 1/2 sin2psi theta1 + 1/2 (C + cos2psi) theta2
  double d_star_omega12;  ///< d *omega12 (margin 2)
  double d_star_theta12;  ///< d *theta12
  double xi12_relation;   ///< xi12 + (C + B) A xi2
};
Theta12Residuals theta12_residual(const CoframeSet& cf, const PsiField& psi,
                                  const SurfaceProfile& profile);

/// Connection form of an orthonormal coframe recovered from the first
/// structure equations. At each node the two equations form a square
/// system, so the least-squares solution is the exact solve.
OneForm connection_form(const OneForm& w1, const OneForm& w2);

/// Rotates the coframe by tau_field and compares the recovered connection
/// form with omega12 - d tau (interior max).
double rotation_transform_residual(const CoframeSet& cf, const ScalarField& tau_field);
/// Scales the coframe by exp(log_scale) and compares with omega12 + *d log_scale.
double scaling_transform_residual(const CoframeSet& cf, const ScalarField& log_scale);

struct FrameSeed {
  Eigen::Vector3d x{0.0, 0.0, 0.0};
  Eigen::Vector3d e1{1.0, 0.0, 0.0};
  Eigen::Vector3d e2{0.0, 1.0, 0.0};
  Eigen::Vector3d e3{0.0, 0.0, 1.0};
};

/// Immersion and adapted frame at every node (row-major like ScalarField).
struct FrameField {
  Grid grid;
  std::vector<Eigen::Vector3d> x, e1, e2, e3;
};

/// The five forms that drive the moving frame.
struct FrameForms {
  OneForm omega1, omega2, omega12, omega13, omega23;
};

/// omega1, omega2 from the coframe set; omega12 = (log e)' dt - d psi with
/// d psi taken from the Lax system, -1/2 Q sin 2psi ds - 1/2 Q (C + cos 2psi) dt,
/// so the coefficients carry no boundary-stencil error.
FrameForms frame_forms(const CoframeSet& cf, const PsiField& psi,
                       const SurfaceProfile& profile);

/// Second-order Lie-group integration: each step applies the exact
/// rotation exp(h W) of the midpoint skew matrix, x by the trapezoid rule.
/// Throws RefineGridError if a step rotates by more than 0.5 rad.
FrameField integrate_frame(const FrameForms& forms, const FrameSeed& seed = {},
                           IntegrationPath path = IntegrationPath::TEdgeThenSLines);
FrameField integrate_frame(const SurfaceProfile& profile, const PsiField& psi,
                           const Grid& grid, const FrameSeed& seed = {},
                           IntegrationPath path = IntegrationPath::TEdgeThenSLines);

/// max over nodes of |e_i . e_j - delta_ij| and |e3 - e1 x e2|.
double orthonormality_drift(const FrameField& frame);

/// max over nodes of |x_a - x_b| and the frame vector differences.
double frame_difference(const FrameField& a, const FrameField& b);

struct MetricResiduals {
  double xs_squared;  ///< | |x_s|^2 - E |
  double xt_squared;  ///< | |x_t|^2 - E |
  double cross;       ///< | x_s . x_t |
};
MetricResiduals metric_residuals(const FrameField& frame, const SurfaceProfile& profile);

struct FundamentalForms {
  ScalarField E_I;  ///< conformal factor of I = E_I (ds^2 + dt^2)
  ScalarField L, M, N;
};

/// Algebraic second fundamental form L = E(H + J cos 2psi), M = -E J sin 2psi,
/// N = E(H - J cos 2psi). Cross-checks the tau_c forms of L and M.
FundamentalForms fundamental_forms(const SurfaceProfile& profile, const PsiField& psi);

/// max |L - (EH + tau_c Q cos 2psi)|, |M + tau_c Q sin 2psi|.
double fundamental_form_identity_gap(const SurfaceProfile& profile, const PsiField& psi);

/// Finite-difference forms of the immersion: E_I = (|x_s|^2 + |x_t|^2)/2,
/// L = x_ss . e3, M = x_st . e3, N = x_tt . e3.
FundamentalForms forms_from_frame(const FrameField& frame);

/// max interior deviation between FD (L, M, N) and the given forms.
double second_form_vs_frame(const FundamentalForms& ff, const FrameField& frame);

struct DeformationParam {
  ScalarField tau;                     ///< rotation angle, continuous
  std::optional<ScalarField> t_field;  ///< cot tau; empty if tau crosses a pole
  double t0;
  std::size_t pole_crossings = 0;
};

/// Integrates d tau = sin^2 tau alpha2 - sin tau cos tau alpha1, the
/// angle form of dt = t alpha1 - alpha2 with t = cot tau, by RK4 with
/// fourth-order midpoint interpolation of the coefficients. Throws
/// PreconditionError if the Chern residuals exceed chern_tolerance
/// (default: 25 h^2 max|alpha|^2 + 1e-10).
DeformationParam integrate_deformation(const CoframeSet& cf, double t0,
                                       IntegrationPath path = IntegrationPath::TEdgeThenSLines,
                                       std::optional<double> chern_tolerance = std::nullopt);

struct DeformedSurface {
  FrameField frame;
  FundamentalForms forms;  ///< from finite differences of the new immersion
};

/// Rotated coframe omega* = R(tau) omega, omega12* = omega12 - d tau and
/// unchanged principal curvatures.
DeformedSurface build_deformed_surface(const SurfaceProfile& profile, const PsiField& psi,
                                       const DeformationParam& dp, const Grid& grid,
                                       const FrameSeed& seed = {});

struct DeformationReport {
  double metric_deviation;  ///< max | E*_fd - E | and | x*_s . x*_t |
  double H_deviation;       ///< max | (L* + N*)/(2 E*) - H |
  double II_deviation;      ///< max | L* - L |
};
DeformationReport compare_deformation(const SurfaceProfile& profile, const PsiField& psi,
                                      const DeformedSurface& deformed);

struct WeingartenResiduals {
  double wedge;        ///< max interior | dH ^ dK |
  double k_variation;  ///< max over s-lines of (max K - min K) along t
};
WeingartenResiduals weingarten_residual(const SurfaceProfile& profile, const PsiField& psi,
                                        const Grid& grid);
/// Same report for arbitrary H and K fields (negative controls).
WeingartenResiduals weingarten_residual(const ScalarField& H, const ScalarField& K);

/// Wavefront OBJ: one `v` per node (row-major), two triangles per cell split
/// along the (i,j)-(i+1,j+1) diagonal, 1-based indices.
std::string obj_string(const FrameField& frame);
void export_obj(const FrameField& frame, const std::filesystem::path& path);

}  // namespace bonnet
