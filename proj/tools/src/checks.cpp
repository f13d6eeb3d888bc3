#include "bonnet_cli/checks.hpp"

#include <algorithm>
#include <cmath>

#include "bonnet/convergence.hpp"
#include "bonnet/errors.hpp"

namespace bonnet::cli {

namespace {

double mag(double x) { return std::max(1.0, std::abs(x)); }

double span_max(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

int path_key(IntegrationPath p) { return p == IntegrationPath::TEdgeThenSLines ? 0 : 1; }

// Broadcast profile column magnitudes, used as tolerance scales.
struct Magnitudes {
  double H, J, E, Q;
};
Magnitudes magnitudes(const SurfaceProfile& p) {
  return {span_max(p.H()), span_max(p.J()), span_max(p.E()), span_max(p.Q())};
}

}  // namespace

Pipeline::Pipeline(const RunConfig& cfg, Grid grid) : cfg_(cfg), grid_(std::move(grid)) {}

const SurfaceProfile& Pipeline::profile() {
  if (!profile_) profile_ = integrate_h_on_grid(cfg_.h, cfg_.family, grid_, cfg_.substeps);
  return *profile_;
}

const PsiField& Pipeline::psi() {
  if (!psi_) {
    psi_ = cfg_.psi.branch ? sample_psi(*cfg_.psi.branch, grid_)
                           : integrate_lax(cfg_.family, grid_, cfg_.psi.psi0);
  }
  return *psi_;
}

const CoframeSet& Pipeline::coframes() {
  if (!cf_) cf_ = build_coframes(profile(), psi(), grid_);
  return *cf_;
}

const FrameField& Pipeline::frame(IntegrationPath path) {
  auto it = frames_.find(path_key(path));
  if (it == frames_.end())
    it = frames_.emplace(path_key(path),
                         integrate_frame(frame_forms(coframes(), psi(), profile()), {}, path))
             .first;
  return it->second;
}

const FundamentalForms& Pipeline::forms() {
  if (!forms_) forms_ = fundamental_forms(profile(), psi());
  return *forms_;
}

const DeformationParam& Pipeline::deformation(double t0, IntegrationPath path) {
  const auto key = std::make_pair(t0, path_key(path));
  auto it = deformations_.find(key);
  if (it == deformations_.end())
    it = deformations_.emplace(key, integrate_deformation(coframes(), t0, path)).first;
  return it->second;
}

const DeformedSurface& Pipeline::deformed(double t0) {
  auto it = deformed_.find(t0);
  if (it == deformed_.end())
    it = deformed_
             .emplace(t0, build_deformed_surface(profile(), psi(), deformation(t0), grid_))
             .first;
  return it->second;
}

std::string to_string(CheckKind k) {
  switch (k) {
    case CheckKind::Convergent: return "convergent";
    case CheckKind::Algebraic: return "algebraic";
    case CheckKind::Threshold: return "threshold";
    case CheckKind::LowerBound: return "lower_bound";
  }
  return "?";
}

std::vector<CheckSpec> all_checks(const RunConfig& cfg) {
  using K = CheckKind;
  std::vector<CheckSpec> c;
  auto add = [&](std::string section, std::string name, K kind,
                 std::function<Sample(Pipeline&)> f) {
    c.push_back({std::move(section), std::move(name), kind, std::move(f)});
  };
  const QFamily fam = cfg.family;

  // Q family: exact solutions, independent of the grid
  add("q", "q_ode", K::Algebraic, [fam](Pipeline&) {
    double r = 0.0, q4 = 0.0;
    for (double s : guarded_sweep(fam, 200)) {
      const double q = eval_q(fam, s);
      r = std::max(r, std::abs(q_ode_residual(fam, s)));
      q4 = std::max(q4, q * q * q * q);
    }
    return Sample{r, q4};
  });
  add("q", "q_first_integral", K::Algebraic, [fam](Pipeline&) {
    const double kappa = first_integral_kappa(fam);
    double r = 0.0, q4 = 0.0;
    for (double s : guarded_sweep(fam, 200)) {
      const QDerivatives d = eval_q_derivatives(fam, s);
      const double q2 = d.q * d.q;
      r = std::max(r, std::abs(d.dq * d.dq - q2 * q2 - kappa * q2));
      q4 = std::max(q4, q2 * q2);
    }
    return Sample{r, q4};
  });

  // psi and the Lax system
  add("psi", "lax_pair_s", K::Convergent, [fam](Pipeline& p) {
    return Sample{max_abs_interior(lax_residuals(p.psi(), fam).first), span_max(q_on_s_nodes(fam, p.grid()))};
  });
  add("psi", "lax_pair_t", K::Convergent, [fam](Pipeline& p) {
    return Sample{max_abs_interior(lax_residuals(p.psi(), fam).second), span_max(q_on_s_nodes(fam, p.grid()))};
  });
  if (cfg.psi.branch) {
    const PsiBranch br = *cfg.psi.branch;
    add("psi", "lax_pair_analytic", K::Algebraic, [br](Pipeline& p) {
      const LaxResiduals r = lax_residuals_analytic(br, p.grid());
      return Sample{std::max(max_abs(r.first), max_abs(r.second)),
                    mag(span_max(q_on_s_nodes(br.family, p.grid())))};
    });
  } else {
    const double psi0 = cfg.psi.psi0;
    add("psi", "lax_path_independence", K::Convergent, [fam, psi0](Pipeline& p) {
      const PsiField other =
          integrate_lax(fam, p.grid(), psi0, IntegrationPath::SEdgeThenTLines);
      return Sample{max_abs(p.psi().psi - other.psi), 1.0};
    });
  }
  add("psi", "harmonic_psi", K::Convergent,
      [](Pipeline& p) { return Sample{harmonic_residual(p.psi()), 1.0}; });
  add("psi", "lax_compatibility", K::Convergent, [fam](Pipeline& p) {
    return Sample{compatibility_residual(p.psi(), fam), mag(span_max(q_on_s_nodes(fam, p.grid())))};
  });
  add("psi", "psi_constraint", K::Convergent, [fam](Pipeline& p) {
    return Sample{max_abs_interior(constraint_residual_514(p.psi(), fam, p.profile())), 1.0};
  });
  add("psi", "alpha_laplace", K::Convergent, [fam](Pipeline& p) {
    return Sample{max_abs_interior(alpha_laplace_residual(p.psi(), q_on_s_nodes(fam, p.grid())), 2),
                  1.0};
  });
  add("psi", "c_relations", K::Convergent, [fam](Pipeline& p) {
    const CRelationResiduals r = c_relation_residuals(p.psi(), fam);
    return Sample{std::max({max_abs_interior(r.first), max_abs_interior(r.second),
                            max_abs_interior(r.dc1), max_abs_interior(r.dc2)}),
                  1.0};
  });

  // s-profile
  add("profile", "gauss_s", K::Convergent, [](Pipeline& p) {
    return Sample{gauss_s_residual(p.profile()), mag(magnitudes(p.profile()).Q)};
  });
  add("profile", "ideal_log_a", K::Convergent,
      [](Pipeline& p) { return Sample{ideal_residuals(p.profile()).log_a, 1.0}; });
  add("profile", "ideal_b", K::Convergent,
      [](Pipeline& p) { return Sample{ideal_residuals(p.profile()).b, 1.0}; });
  add("profile", "ideal_c", K::Algebraic,
      [](Pipeline& p) { return Sample{ideal_residuals(p.profile()).c, mag(magnitudes(p.profile()).Q)}; });
  add("profile", "ideal_h", K::Algebraic, [](Pipeline& p) {
    return Sample{ideal_residuals(p.profile()).h, mag(span_max(p.profile().Hp()))};
  });
  add("profile", "ideal_log_j", K::Convergent,
      [](Pipeline& p) { return Sample{ideal_residuals(p.profile()).log_j, 1.0}; });
  add("profile", "geodesic_curvature", K::Convergent,
      [](Pipeline& p) { return Sample{geodesic_curvature_residual(p.profile()), 1.0}; });

  // structure equations
  add("structure", "first_structure_1", K::Convergent, [](Pipeline& p) {
    return Sample{structure_residuals(p.coframes(), p.profile()).first_structure_1,
                  mag(magnitudes(p.profile()).E)};
  });
  add("structure", "first_structure_2", K::Convergent, [](Pipeline& p) {
    return Sample{structure_residuals(p.coframes(), p.profile()).first_structure_2,
                  mag(magnitudes(p.profile()).E)};
  });
  add("structure", "codazzi_1", K::Convergent, [](Pipeline& p) {
    return Sample{structure_residuals(p.coframes(), p.profile()).codazzi_1,
                  mag(magnitudes(p.profile()).E)};
  });
  add("structure", "codazzi_2", K::Convergent, [](Pipeline& p) {
    return Sample{structure_residuals(p.coframes(), p.profile()).codazzi_2,
                  mag(magnitudes(p.profile()).E)};
  });
  add("structure", "gauss_equation", K::Convergent, [](Pipeline& p) {
    return Sample{structure_residuals(p.coframes(), p.profile()).gauss,
                  mag(magnitudes(p.profile()).E)};
  });

  add("codazzi", "codazzi_dH", K::Convergent, [](Pipeline& p) {
    return Sample{codazzi_summary_residuals(p.coframes(), p.profile()).dH, 1.0};
  });
  add("codazzi", "codazzi_dlogJ", K::Convergent, [](Pipeline& p) {
    return Sample{codazzi_summary_residuals(p.coframes(), p.profile()).dlogJ, 1.0};
  });
  add("codazzi", "dtheta1", K::Convergent, [](Pipeline& p) {
    return Sample{codazzi_summary_residuals(p.coframes(), p.profile()).dtheta1, 1.0};
  });
  add("codazzi", "chern_dalpha1", K::Convergent, [](Pipeline& p) {
    return Sample{codazzi_summary_residuals(p.coframes(), p.profile()).dalpha1, 1.0};
  });
  add("codazzi", "chern_dalpha2", K::Convergent, [](Pipeline& p) {
    return Sample{codazzi_summary_residuals(p.coframes(), p.profile()).dalpha2, 1.0};
  });

  add("theta12", "theta12_relation", K::Convergent, [](Pipeline& p) {
    return Sample{theta12_residual(p.coframes(), p.psi(), p.profile()).relation, 1.0};
  });
  add("theta12", "theta12_hodge", K::Algebraic, [](Pipeline& p) {
    return Sample{theta12_residual(p.coframes(), p.psi(), p.profile()).hodge_relation,
                  mag(magnitudes(p.profile()).Q)};
  });
  add("theta12", "lemma_dpsi", K::Convergent, [](Pipeline& p) {
    return Sample{theta12_residual(p.coframes(), p.psi(), p.profile()).lemma_dpsi, 1.0};
  });
  add("theta12", "d_star_omega12", K::Convergent, [](Pipeline& p) {
    return Sample{theta12_residual(p.coframes(), p.psi(), p.profile()).d_star_omega12, 1.0};
  });
  add("theta12", "d_star_theta12", K::Convergent, [](Pipeline& p) {
    return Sample{theta12_residual(p.coframes(), p.psi(), p.profile()).d_star_theta12, 1.0};
  });
  add("theta12", "xi12_relation", K::Convergent, [](Pipeline& p) {
    return Sample{theta12_residual(p.coframes(), p.psi(), p.profile()).xi12_relation, 1.0};
  });

  add("transform", "rotation_transform", K::Convergent, [](Pipeline& p) {
    const ScalarField tau = ScalarField::sample(p.grid(), [](double s, double t) { return s * t; });
    return Sample{rotation_transform_residual(p.coframes(), tau), 1.0};
  });
  add("transform", "scaling_transform", K::Convergent, [](Pipeline& p) {
    const ScalarField logA = ScalarField::from_s_profile(p.grid(), p.profile().A())
                                 .map([](double x) { return std::log(x); });
    return Sample{scaling_transform_residual(p.coframes(), logA), 1.0};
  });

  // immersion
  add("immersion", "frame_orthonormality", K::Threshold,
      [](Pipeline& p) { return Sample{orthonormality_drift(p.frame()), 1e-12}; });
  add("immersion", "frame_path_independence", K::Convergent, [](Pipeline& p) {
    return Sample{frame_difference(p.frame(), p.frame(IntegrationPath::SEdgeThenTLines)), 1.0};
  });
  add("immersion", "metric_xs", K::Convergent, [](Pipeline& p) {
    return Sample{metric_residuals(p.frame(), p.profile()).xs_squared, mag(magnitudes(p.profile()).E)};
  });
  add("immersion", "metric_xt", K::Convergent, [](Pipeline& p) {
    return Sample{metric_residuals(p.frame(), p.profile()).xt_squared, mag(magnitudes(p.profile()).E)};
  });
  add("immersion", "metric_orthogonality", K::Convergent, [](Pipeline& p) {
    return Sample{metric_residuals(p.frame(), p.profile()).cross, mag(magnitudes(p.profile()).E)};
  });
  add("immersion", "second_form_vs_frame", K::Convergent, [](Pipeline& p) {
    const Magnitudes m = magnitudes(p.profile());
    return Sample{second_form_vs_frame(p.forms(), p.frame()), mag(m.E * (m.H + m.J))};
  });

  add("forms", "fundamental_form_identity", K::Algebraic, [](Pipeline& p) {
    const Magnitudes m = magnitudes(p.profile());
    return Sample{fundamental_form_identity_gap(p.profile(), p.psi()), mag(m.E * m.J)};
  });
  add("forms", "mean_curvature_algebra", K::Algebraic, [](Pipeline& p) {
    const FundamentalForms& f = p.forms();
    const ScalarField H = ScalarField::from_s_profile(p.grid(), p.profile().H());
    return Sample{max_abs((f.L + f.N) / (2.0 * f.E_I) - H), mag(magnitudes(p.profile()).H)};
  });
  add("forms", "gauss_curvature_algebra", K::Algebraic, [](Pipeline& p) {
    const FundamentalForms& f = p.forms();
    const ScalarField K = ScalarField::from_s_profile(p.grid(), p.profile().gauss_curvature());
    const Magnitudes m = magnitudes(p.profile());
    return Sample{max_abs((f.L * f.N - f.M * f.M) / (f.E_I * f.E_I) - K),
                  mag((m.H + m.J) * (m.H + m.J))};
  });

  const double t0 = cfg.t0;
  add("deformation", "deformation_path_independence", K::Convergent, [t0](Pipeline& p) {
    return Sample{max_abs(p.deformation(t0).tau -
                          p.deformation(t0, IntegrationPath::SEdgeThenTLines).tau),
                  1.0};
  });
  add("deformation", "deformed_metric", K::Convergent, [t0](Pipeline& p) {
    return Sample{compare_deformation(p.profile(), p.psi(), p.deformed(t0)).metric_deviation,
                  mag(magnitudes(p.profile()).E)};
  });
  add("deformation", "deformed_mean_curvature", K::Convergent, [t0](Pipeline& p) {
    return Sample{compare_deformation(p.profile(), p.psi(), p.deformed(t0)).H_deviation,
                  mag(magnitudes(p.profile()).H)};
  });
  add("deformation", "deformation_nontrivial", K::LowerBound, [t0](Pipeline& p) {
    const Magnitudes m = magnitudes(p.profile());
    return Sample{compare_deformation(p.profile(), p.psi(), p.deformed(t0)).II_deviation,
                  mag(m.E * (m.H + m.J))};
  });

  add("weingarten", "weingarten_wedge", K::Convergent, [](Pipeline& p) {
    return Sample{weingarten_residual(p.profile(), p.psi(), p.grid()).wedge, 1.0};
  });
  add("weingarten", "weingarten_k_variation", K::Threshold, [](Pipeline& p) {
    return Sample{weingarten_residual(p.profile(), p.psi(), p.grid()).k_variation, 1e-10};
  });
  return c;
}

std::vector<CheckResult> run_checks(const RunConfig& cfg, const std::vector<CheckSpec>& checks) {
  std::vector<Pipeline> levels;
  for (std::size_t k = 0; k < cfg.levels; ++k) levels.emplace_back(cfg, level_grid(cfg, k));

  std::vector<CheckResult> out;
  for (const CheckSpec& spec : checks) {
    CheckResult r{spec.section, spec.name, spec.kind, {}, {}, 0.0, std::nan(""), true};
    double scale = 1.0;
    for (Pipeline& p : levels) {
      const Sample smp = spec.eval(p);
      const double h = p.h();
      r.h.push_back(h);
      r.values.push_back(smp.value);
      scale = smp.scale;
      double tol = 0.0;
      switch (spec.kind) {
        case CheckKind::Convergent: tol = kFdFactor * h * h * scale * cfg.tolerance_scale; break;
        case CheckKind::Algebraic: tol = kAlgebraicTolerance * scale * cfg.tolerance_scale; break;
        case CheckKind::Threshold: tol = scale * cfg.tolerance_scale; break;
        case CheckKind::LowerBound: tol = 10.0 * kFdFactor * h * h * scale; break;
      }
      r.tolerance = tol;
      if (!std::isfinite(smp.value)) r.passed = false;
      if (spec.kind == CheckKind::Algebraic || spec.kind == CheckKind::Threshold)
        r.passed = r.passed && smp.value <= tol;
    }
    const double finest = r.values.back();
    if (r.values.size() >= 2 &&
        (spec.kind == CheckKind::Convergent || spec.kind == CheckKind::LowerBound))
      r.observed_order = observed_order(r.h, r.values);
    switch (spec.kind) {
      case CheckKind::Convergent:
        r.passed = r.passed && finest <= r.tolerance &&
                   (r.values.size() < 2 ||
                    converges(r.h, r.values, kMinOrder, kRoundoffFloor * scale));
        break;
      case CheckKind::LowerBound: r.passed = r.passed && finest > r.tolerance; break;
      default: break;
    }
    out.push_back(std::move(r));
  }
  return out;
}

nlohmann::ordered_json to_json(const CheckResult& r) {
  nlohmann::ordered_json j;
  j["max_residual"] = r.values.back();
  j["grid_h"] = r.h.back();
  if (std::isfinite(r.observed_order))
    j["observed_order"] = r.observed_order;
  else
    j["observed_order"] = nullptr;
  j["tolerance"] = r.tolerance;
  j["kind"] = to_string(r.kind);
  j["section"] = r.section;
  j["passed"] = r.passed;
  nlohmann::ordered_json lv = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < r.h.size(); ++k) lv.push_back({{"h", r.h[k]}, {"residual", r.values[k]}});
  j["levels"] = lv;
  return j;
}

nlohmann::ordered_json report(const std::vector<CheckResult>& results) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const CheckResult& r : results) j[r.name] = to_json(r);
  return j;
}

}  // namespace bonnet::cli
