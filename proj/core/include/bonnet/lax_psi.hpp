#pragma once

// The rotation angle psi(s, t) between the principal frame and the
// isothermal coordinate frame. It solves the first-order system
//
//   psi_s = -1/2 Q sin(2 psi),
//   psi_t =  1/2 (log Q)' - 1/2 Q cos(2 psi),
//
// whose compatibility condition is Q''Q - Q'^2 = Q^4.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bonnet/forms2d.hpp"
#include "bonnet/q_family.hpp"

namespace bonnet {

class SurfaceProfile;

enum class PsiCase {
  ConstantZero,    ///< psi = 0
  ConstantHalfPi,  ///< psi = pi/2
  RationalUpper,   ///< tan psi = -(t + sigma)/s,     Q = 1/s
  RationalLower,   ///< tan psi = s/(t + sigma),      Q = -1/s
  TrigAppendix,    ///< tan psi = tanh(at/2 + eta) tan((as + pi)/2), Q = a/sin(as)
  HyperAppendix,   ///< tan psi = cot(at/2 + eta) coth(as/2),        Q = a/sinh(as)
};

std::string to_string(PsiCase c);
PsiCase psi_case_from_string(const std::string& name);

struct PsiBranch {
  PsiCase kind = PsiCase::ConstantZero;
  double sigma = 0.0;
  double eta = 0.0;
  QFamily family;

  /// Case/family pairing. The two appendix cases also accept the s < 0
  /// column through the mirror psi_-(s,t) = psi_+(-s,-t) + pi/2.
  void validate() const;
  /// True for appendix cases evaluated on the s < 0 column.
  bool derived_mirror() const;
};

struct PsiPoint {
  double psi;
  double psi_s;
  double psi_t;
};

/// Principal value in (-pi/2, pi/2] of the closed form at (s, t).
double psi_closed_form(const PsiBranch& branch, double s, double t);
/// Principal value plus analytic first derivatives.
PsiPoint psi_closed_form_derivatives(const PsiBranch& branch, double s, double t);

struct PsiField {
  ScalarField psi;
  std::optional<PsiBranch> branch;  ///< Empty for integrated fields.
};

/// Closed form on every node, unwrapped by multiples of pi: first along the
/// t-edge at s_min, then along every s-line.
PsiField sample_psi(const PsiBranch& branch, const Grid& grid);

/// Checks finiteness and, for branch-backed fields, agreement with the
/// closed form modulo pi to 1e-12. Throws ConsistencyError.
void validate(const PsiField& field);

struct LaxResiduals {
  ScalarField first;   ///< psi_s + 1/2 Q sin 2psi
  ScalarField second;  ///< psi_t - 1/2 (log Q)' + 1/2 Q cos 2psi
};

/// Finite-difference psi derivatives, analytic Q.
LaxResiduals lax_residuals(const PsiField& psi, const QFamily& fam);
/// Analytic psi derivatives of a closed-form branch.
LaxResiduals lax_residuals_analytic(const PsiBranch& branch, const Grid& grid);

enum class IntegrationPath {
  TEdgeThenSLines,  ///< default
  SEdgeThenTLines,
};

/// RK4 with 8 substeps per grid spacing, starting from psi0 at
/// (s_min, t_min). Throws BlowUpError once |psi| > 1e3.
PsiField integrate_lax(const QFamily& fam, const Grid& grid, double psi0,
                       IntegrationPath path = IntegrationPath::TEdgeThenSLines);

/// max interior |laplacian(psi)|.
double harmonic_residual(const PsiField& psi);

/// max interior |d/dt F_s(psi) - d/ds F_t(psi)| where F_s, F_t are the two
/// right-hand sides of the Lax system evaluated on the field.
double compatibility_residual(const PsiField& psi, const QFamily& fam);

/// Q sampled at the grid's s-nodes.
std::vector<double> q_on_s_nodes(const QFamily& fam, const Grid& grid);

struct AlphaCoframe {
  OneForm alpha1;  ///< Q (cos 2psi ds - sin 2psi dt)
  OneForm alpha2;  ///< Q (sin 2psi ds + cos 2psi dt)
};
AlphaCoframe alpha_coframe(const PsiField& psi, std::span<const double> q_nodes);

/// 2 psi_1 cos 2psi + (2 psi_2 + 1) sin 2psi with d psi = psi_1 alpha_1 +
/// psi_2 alpha_2. Q is taken from the profile as H'/J; the profile must be
/// sampled on the psi grid's s-nodes.
ScalarField constraint_residual_514(const PsiField& psi, const QFamily& fam,
                                    const SurfaceProfile& profile);

/// psi_11 + psi_22 + psi_1 via nested coframe decompositions. Second
/// differences of nested kind: take norms with margin 2.
ScalarField alpha_laplace_residual(const PsiField& psi, std::span<const double> q_nodes);

/// f_21 - f_12 + f_2 for df = f_1 alpha_1 + f_2 alpha_2 (margin 2, as above).
ScalarField mixed_partial_residual(const ScalarField& f, const AlphaCoframe& alpha);

struct CRelationResiduals {
  ScalarField first;   ///< 2 psi_1 - C sin 2psi
  ScalarField second;  ///< 2 psi_2 + 1 + C cos 2psi
  ScalarField dc1;     ///< C_1 + C (2 psi_2 + 1) + cos 2psi
  ScalarField dc2;     ///< C_2 - 2 C psi_1 + sin 2psi
};
CRelationResiduals c_relation_residuals(const PsiField& psi, const QFamily& fam);

}  // namespace bonnet
