#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <bonnet/errors.hpp>
#include <bonnet/surface_embed.hpp>

#include "demo_data.hpp"
#include "refine.hpp"

using namespace bonnet;

namespace {

const std::vector<std::size_t> kLevels{65, 129, 257};

const demo::Surface& surf(std::size_t n) {
  static std::map<std::size_t, demo::Surface> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, demo::surface(n)).first;
  return it->second;
}

refine::Study study(const std::function<double(const demo::Surface&)>& f) {
  return refine::run(kLevels, 1.0, [&](std::size_t n) { return f(surf(n)); });
}

void expect_second_order(const refine::Study& s, const char* what) {
  EXPECT_TRUE(converges(s.h, s.r, 1.9, 1e-10))
      << what << ": order " << s.order() << " finest " << s.finest();
}

PsiField zero_psi(const Grid& g) {
  PsiBranch b;
  b.kind = PsiCase::ConstantZero;
  b.family = demo::family();
  return sample_psi(b, g);
}

}  // namespace

TEST(SurfaceEmbed, AlignedCoframesWhenPsiVanishes) {
  const auto& d = surf(33);
  auto cf = build_coframes(d.profile, zero_psi(d.grid), d.grid);
  auto gp = broadcast(d.profile, d.grid);
  EXPECT_EQ(max_abs(cf.omega1.p() - gp.e), 0.0);
  EXPECT_EQ(max_abs(cf.omega1.q()), 0.0);
  EXPECT_EQ(max_abs(cf.omega2.p()), 0.0);
  EXPECT_EQ(max_abs(cf.omega2.q() - gp.e), 0.0);
  EXPECT_EQ(max_abs(cf.omega12.p()), 0.0);
  EXPECT_EQ(max_abs(cf.omega12.q() - gp.dlog_e), 0.0);
}

TEST(SurfaceEmbed, CoframeAlgebra) {
  const auto& d = surf(33);
  const auto& cf = d.cf;
  auto gp = broadcast(d.profile, d.grid);
  OneForm h1 = hodge(cf.omega1);
  EXPECT_LT(max_abs(h1.p() - cf.omega2.p()), 1e-15);
  EXPECT_LT(max_abs(h1.q() - cf.omega2.q()), 1e-15);

  auto c2 = d.psi.psi.map([](double x) { return std::cos(2 * x); });
  auto s2 = d.psi.psi.map([](double x) { return std::sin(2 * x); });
  EXPECT_LT(max_abs(cf.alpha1.p() - gp.Q * c2), 1e-13);
  EXPECT_LT(max_abs(cf.alpha1.q() + gp.Q * s2), 1e-13);
  EXPECT_LT(max_abs(cf.alpha2.p() - gp.Q * s2), 1e-13);
  EXPECT_LT(max_abs(cf.alpha2.q() - gp.Q * c2), 1e-13);
  // theta1 = Q ds, theta2 = Q dt
  EXPECT_LT(max_abs(cf.theta1.p() - gp.Q), 1e-13);
  EXPECT_LT(max_abs(cf.theta1.q()), 1e-13);
  EXPECT_LT(max_abs(cf.theta2.q() - gp.Q), 1e-13);
  EXPECT_LT(max_abs(cf.u * cf.u + cf.v * cf.v - gp.A * gp.A), 1e-12);
}

TEST(SurfaceEmbed, BroadcastRejectsMisalignedProfile) {
  EXPECT_THROW(broadcast(surf(33).profile, surf(65).grid), GridMismatchError);
  EXPECT_THROW(build_coframes(surf(33).profile, surf(65).psi, surf(33).grid), GridMismatchError);
}

TEST(SurfaceEmbed, StructureEquationsConverge) {
  auto pick = [](int k) {
    return [k](const demo::Surface& d) {
      auto r = structure_residuals(d.cf, d.profile);
      const double v[] = {r.first_structure_1, r.first_structure_2, r.codazzi_1, r.codazzi_2,
                          r.gauss};
      return v[k];
    };
  };
  const char* names[] = {"first_1", "first_2", "codazzi_1", "codazzi_2", "gauss"};
  for (int k = 0; k < 5; ++k) expect_second_order(study(pick(k)), names[k]);
}

TEST(SurfaceEmbed, GaussEquationDetectsScaledCurvature) {
  const auto& d = surf(65);
  double good = structure_residuals(d.cf, d.profile).gauss;
  double bad = structure_residuals(d.cf, d.profile, 1.01).gauss;
  EXPECT_GT(bad, 1e-3);
  EXPECT_GT(bad, 100 * good);
}

TEST(SurfaceEmbed, CodazziSummaryConverges) {
  auto pick = [](int k) {
    return [k](const demo::Surface& d) {
      auto r = codazzi_summary_residuals(d.cf, d.profile);
      const double v[] = {r.dH, r.dlogJ, r.dtheta1, r.dalpha1, r.dalpha2};
      return v[k];
    };
  };
  const char* names[] = {"dH", "dlogJ", "dtheta1", "dalpha1", "dalpha2"};
  for (int k = 0; k < 5; ++k) expect_second_order(study(pick(k)), names[k]);
}

TEST(SurfaceEmbed, Theta12RelationsConverge) {
  auto pick = [](int k) {
    return [k](const demo::Surface& d) {
      auto r = theta12_residual(d.cf, d.psi, d.profile);
      const double v[] = {r.relation,       r.hodge_relation, r.lemma_dpsi,
                          r.d_star_omega12, r.d_star_theta12, r.xi12_relation};
      return v[k];
    };
  };
  const char* names[] = {"relation", "hodge", "lemma", "d*w12", "d*theta12", "xi12"};
  for (int k = 0; k < 6; ++k) expect_second_order(study(pick(k)), names[k]);
}

TEST(SurfaceEmbed, Theta12RelationFixesTheRotationSign) {
  // omega12 = (log e)' dt - d psi drives the relation to zero; the opposite
  // sign, (log e)' dt + d psi, leaves 2 d psi behind.
  const auto& d = surf(65);
  auto flipped = d.cf;
  flipped.omega12 = d.cf.omega12 + 2.0 * exterior_derivative(d.psi.psi);
  double good = theta12_residual(d.cf, d.psi, d.profile).relation;
  double bad = theta12_residual(flipped, d.psi, d.profile).relation;
  EXPECT_LT(good, 1e-3);
  EXPECT_GT(bad, 0.5);
}

TEST(SurfaceEmbed, RotationAndScalingTransforms) {
  expect_second_order(study([](const demo::Surface& d) {
                        return rotation_transform_residual(d.cf,
                                                           ScalarField::constant(d.grid, 0.8));
                      }),
                      "constant rotation");
  expect_second_order(study([](const demo::Surface& d) {
                        return rotation_transform_residual(
                            d.cf, ScalarField::sample(d.grid, [](double s, double t) {
                              return s * t;
                            }));
                      }),
                      "s t rotation");
  expect_second_order(study([](const demo::Surface& d) {
                        auto logA = broadcast(d.profile, d.grid).A.map(
                            [](double x) { return std::log(x); });
                        return scaling_transform_residual(d.cf, logA);
                      }),
                      "scaling by A");
}

TEST(SurfaceEmbed, ConnectionFormOfCoordinateCoframeVanishes) {
  Grid g(0.0, 1.0, 0.0, 1.0, 9, 9);
  OneForm w12 = connection_form(OneForm::ds(g), OneForm::dt(g));
  EXPECT_EQ(max_abs(w12.p()), 0.0);
  EXPECT_EQ(max_abs(w12.q()), 0.0);
  EXPECT_THROW(connection_form(OneForm::ds(g), OneForm::ds(g)), SingularCoframeError);
}

TEST(SurfaceEmbed, FrameStaysOrthonormal) {
  for (std::size_t n : kLevels) {
    const auto& d = surf(n);
    auto f = integrate_frame(d.profile, d.psi, d.grid);
    EXPECT_LT(orthonormality_drift(f), 1e-12) << n;
  }
}

TEST(SurfaceEmbed, FrameSeedIsRespected) {
  const auto& d = surf(33);
  FrameSeed seed;
  seed.x = {1.0, 2.0, 3.0};
  seed.e1 = {0.0, 1.0, 0.0};
  seed.e2 = {-1.0, 0.0, 0.0};
  auto f = integrate_frame(d.profile, d.psi, d.grid, seed);
  EXPECT_EQ(f.x[0], seed.x);
  EXPECT_EQ(f.e1[0], seed.e1);
  // rigid motion of the default frame
  auto f0 = integrate_frame(d.profile, d.psi, d.grid);
  Eigen::Matrix3d R;
  R << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  double gap = 0.0;
  for (std::size_t k = 0; k < f.x.size(); ++k)
    gap = std::max(gap, (f.x[k] - (seed.x + R * f0.x[k])).norm());
  EXPECT_LT(gap, 1e-12);
  FrameSeed bad;
  bad.e3 = {0.0, 0.0, -1.0};
  EXPECT_THROW(integrate_frame(d.profile, d.psi, d.grid, bad), PreconditionError);
}

TEST(SurfaceEmbed, CoarseGridAsksForRefinement) {
  const auto& d = surf(33);
  auto forms = frame_forms(d.cf, d.psi, d.profile);
  forms.omega12 = 100.0 * forms.omega12;
  EXPECT_THROW(integrate_frame(forms), RefineGridError);
}

TEST(SurfaceEmbed, FramePathIndependenceAndMetric) {
  expect_second_order(study([](const demo::Surface& d) {
                        auto forms = frame_forms(d.cf, d.psi, d.profile);
                        return frame_difference(
                            integrate_frame(forms, {}, IntegrationPath::TEdgeThenSLines),
                            integrate_frame(forms, {}, IntegrationPath::SEdgeThenTLines));
                      }),
                      "two paths");
  for (int k = 0; k < 3; ++k)
    expect_second_order(study([k](const demo::Surface& d) {
                          auto m = metric_residuals(integrate_frame(d.profile, d.psi, d.grid),
                                                    d.profile);
                          const double v[] = {m.xs_squared, m.xt_squared, m.cross};
                          return v[k];
                        }),
                        "metric");
}

TEST(SurfaceEmbed, AlgebraicFundamentalForms) {
  const auto& d = surf(33);
  auto gp = broadcast(d.profile, d.grid);
  auto ff0 = fundamental_forms(d.profile, zero_psi(d.grid));
  EXPECT_LT(max_abs(ff0.L - gp.E * (gp.H + gp.J)), 1e-13);
  EXPECT_LT(max_abs(ff0.N - gp.E * (gp.H - gp.J)), 1e-13);
  EXPECT_EQ(max_abs(ff0.M), 0.0);

  auto ff = fundamental_forms(d.profile, d.psi);
  EXPECT_LT(max_abs((ff.L + ff.N) / (2.0 * ff.E_I) - gp.H), 1e-13);
  EXPECT_LT(max_abs((ff.L * ff.N - ff.M * ff.M) / (ff.E_I * ff.E_I) - gp.K), 1e-12);
  EXPECT_LT(fundamental_form_identity_gap(d.profile, d.psi), 1e-13);
  for (double x : ff.E_I.values()) EXPECT_GT(x, 0.0);
}

TEST(SurfaceEmbed, SecondFormFromFrameConverges) {
  auto s = study([](const demo::Surface& d) {
    return second_form_vs_frame(fundamental_forms(d.profile, d.psi),
                                integrate_frame(d.profile, d.psi, d.grid));
  });
  expect_second_order(s, "second form");
  EXPECT_GT(s.r[1] / s.r[2], 3.5);
  EXPECT_LT(s.r[1] / s.r[2], 4.5);

  const auto& d = surf(65);
  PsiField bumped{d.psi.psi + 0.05, std::nullopt};
  double bad = second_form_vs_frame(fundamental_forms(d.profile, bumped),
                                    integrate_frame(d.profile, d.psi, d.grid));
  EXPECT_GT(bad, 1e-2);
  EXPECT_GT(bad, 100 * s.r[1]);
}

TEST(SurfaceEmbed, DeformationStartsWithDtEqualMinusAlpha2) {
  // t0 = 0: t_s = -alpha2_s and t_t = -alpha2_t at the corner
  const auto& d = surf(129);
  auto dp = integrate_deformation(d.cf, 0.0);
  ASSERT_TRUE(dp.t_field.has_value());
  EXPECT_NEAR((*dp.t_field)(0, 0), 0.0, 1e-15);
  auto dt = exterior_derivative(*dp.t_field);
  EXPECT_NEAR(dt.p()(0, 0), -d.cf.alpha2.p()(0, 0), 1e-4);
  EXPECT_NEAR(dt.q()(0, 0), -d.cf.alpha2.q()(0, 0), 1e-4);
}

TEST(SurfaceEmbed, StaticFormsKeepTheParameterConstant) {
  auto cf = surf(33).cf;
  cf.alpha1 = OneForm::zero(cf.alpha1.grid());
  cf.alpha2 = OneForm::zero(cf.alpha2.grid());
  auto dp = integrate_deformation(cf, 1.7);
  ASSERT_TRUE(dp.t_field.has_value());
  EXPECT_LT(max_abs(*dp.t_field + (-1.7)), 1e-14);
  EXPECT_EQ(dp.pole_crossings, 0u);
}

TEST(SurfaceEmbed, DeformationPreconditions) {
  auto cf = surf(33).cf;
  EXPECT_THROW(integrate_deformation(cf, NAN), PreconditionError);
  // Chern criterion broken on purpose
  cf.alpha1 = cf.alpha1 + OneForm(ScalarField::constant(cf.alpha1.grid(), 0.0),
                                  ScalarField::sample(cf.alpha1.grid(),
                                                      [](double s, double) { return s; }));
  EXPECT_THROW(integrate_deformation(cf, 1.0), PreconditionError);
}

TEST(SurfaceEmbed, DeformationPathsAgree) {
  expect_second_order(study([](const demo::Surface& d) {
                        auto a = integrate_deformation(d.cf, 1.0, IntegrationPath::TEdgeThenSLines);
                        auto b = integrate_deformation(d.cf, 1.0, IntegrationPath::SEdgeThenTLines);
                        return max_abs(a.tau - b.tau);
                      }),
                      "deformation paths");
}

TEST(SurfaceEmbed, DeformedSurfaceIsIsometricWithSameMeanCurvature) {
  std::vector<double> metric, H, II;
  for (std::size_t n : kLevels) {
    const auto& d = surf(n);
    auto def = build_deformed_surface(d.profile, d.psi, integrate_deformation(d.cf, 1.0), d.grid);
    auto rep = compare_deformation(d.profile, d.psi, def);
    metric.push_back(rep.metric_deviation);
    H.push_back(rep.H_deviation);
    II.push_back(rep.II_deviation);
    EXPECT_LT(orthonormality_drift(def.frame), 1e-12);
  }
  std::vector<double> h;
  for (std::size_t n : kLevels) h.push_back(1.0 / (n - 1));
  EXPECT_GE(observed_order(h, metric), 1.9);
  EXPECT_GE(observed_order(h, H), 1.9);
  // II* stays put while the other two shrink
  EXPECT_GT(II.back(), 0.5);
  EXPECT_LT(std::abs(II.back() - II.front()) / II.back(), 0.05);
  EXPECT_GT(II.back(), 10 * 25 * h.back() * h.back());
}

TEST(SurfaceEmbed, DistinctParametersGiveDistinctSecondForms) {
  const auto& d = surf(65);
  std::vector<double> II;
  for (double t0 : {0.5, 1.0, 2.0}) {
    auto def = build_deformed_surface(d.profile, d.psi, integrate_deformation(d.cf, t0), d.grid);
    II.push_back(compare_deformation(d.profile, d.psi, def).II_deviation);
  }
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      EXPECT_GT(std::abs(II[a] - II[b]), 1e-2 * std::max(II[a], II[b])) << a << " " << b;
}

TEST(SurfaceEmbed, WeingartenProperty) {
  auto s = study([](const demo::Surface& d) {
    return weingarten_residual(d.profile, d.psi, d.grid).wedge;
  });
  expect_second_order(s, "dH ^ dK");
  const auto& d = surf(65);
  EXPECT_LT(weingarten_residual(d.profile, d.psi, d.grid).k_variation, 1e-10);

  auto gp = broadcast(d.profile, d.grid);
  EXPECT_EQ(max_abs(wedge(exterior_derivative(gp.H), exterior_derivative(gp.H)).r()), 0.0);
  ScalarField corrupted = gp.K * (d.psi.psi.map([](double x) { return 1.0 + 0.1 * x; }));
  auto bad = weingarten_residual(gp.H, corrupted);
  EXPECT_GT(bad.wedge, 1e-2);
  EXPECT_GT(bad.k_variation, 1e-3);
}

TEST(SurfaceEmbed, ObjLayout) {
  auto d = demo::surface(10);
  auto frame = integrate_frame(d.profile, d.psi, d.grid);
  std::istringstream in(obj_string(frame));
  std::string line;
  std::size_t v = 0, f = 0;
  double rmax = 0.0;
  for (const auto& x : frame.x) rmax = std::max(rmax, x.norm());
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string tag;
    row >> tag;
    if (tag == "v") {
      Eigen::Vector3d p;
      row >> p.x() >> p.y() >> p.z();
      // 17 digits round-trip exactly, in row-major order
      EXPECT_EQ(p, frame.x[v]);
      EXPECT_LE(p.norm(), rmax);
      ++v;
    } else if (tag == "f") {
      std::size_t a, b, c;
      row >> a >> b >> c;
      EXPECT_GE(std::min({a, b, c}), 1u);
      EXPECT_LE(std::max({a, b, c}), 100u);
      ++f;
    }
  }
  EXPECT_EQ(v, 100u);
  EXPECT_EQ(f, 162u);
}

TEST(SurfaceEmbed, ObjFirstCellSplitsAlongDiagonal) {
  auto d = demo::surface(5);
  std::string text = obj_string(integrate_frame(d.profile, d.psi, d.grid));
  // node (i,j) is vertex i*nt + j + 1
  EXPECT_NE(text.find("f 1 6 7\nf 1 7 2\n"), std::string::npos);
}

TEST(SurfaceEmbed, ExportWritesFileOrThrows) {
  auto d = demo::surface(6);
  auto frame = integrate_frame(d.profile, d.psi, d.grid);
  std::filesystem::create_directories(BONNET_TEST_TMP);
  auto path = std::filesystem::path(BONNET_TEST_TMP) / "six.obj";
  export_obj(frame, path);
  std::ifstream f(path, std::ios::binary);
  std::stringstream buf;
  buf << f.rdbuf();
  EXPECT_EQ(buf.str(), obj_string(frame));
  EXPECT_THROW(export_obj(frame, std::filesystem::path(BONNET_TEST_TMP) / "no/such/dir/x.obj"),
               Error);
}
