#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include <bonnet/convergence.hpp>
#include <bonnet/errors.hpp>
#include <bonnet/forms2d.hpp>

using namespace bonnet;

namespace {

Grid unit_grid(std::size_t n) { return Grid(0.0, 1.0, 0.0, 1.0, n, n); }

ScalarField random_field(const Grid& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return ScalarField::generate(g, [&](std::size_t, std::size_t) { return u(rng); });
}

}  // namespace

TEST(Forms2d, GridNodesAndIndexing) {
  Grid g(1.0, 2.0, 0.0, 1.0, 5, 9);
  EXPECT_DOUBLE_EQ(g.hs(), 0.25);
  EXPECT_DOUBLE_EQ(g.ht(), 0.125);
  EXPECT_DOUBLE_EQ(g.s(4), 2.0);
  EXPECT_DOUBLE_EQ(g.t(8), 1.0);
  EXPECT_EQ(g.index(1, 2), 11u);
  Grid r = g.refined();
  EXPECT_EQ(r.ns(), 9u);
  EXPECT_EQ(r.nt(), 17u);
  EXPECT_DOUBLE_EQ(r.hs(), 0.125);
}

TEST(Forms2d, GridRejectsDegenerateInput) {
  EXPECT_THROW(Grid(0, 1, 0, 1, 4, 10), PreconditionError);
  EXPECT_THROW(Grid(1, 1, 0, 1, 10, 10), PreconditionError);
  EXPECT_THROW(Grid(0, INFINITY, 0, 1, 10, 10), PreconditionError);
}

TEST(Forms2d, FieldRejectsNonFiniteAndWrongSize) {
  Grid g = unit_grid(5);
  EXPECT_THROW(ScalarField(g, std::vector<double>(24, 0.0)), GridMismatchError);
  std::vector<double> v(25, 0.0);
  v[7] = NAN;
  EXPECT_THROW(ScalarField(g, v), NonFiniteError);
  EXPECT_THROW(ScalarField::constant(g, 1.0) + ScalarField::constant(unit_grid(6), 1.0),
               GridMismatchError);
}

TEST(Forms2d, DerivativeOfProduct) {
  // d(s t) = t ds + s dt, exact for a bilinear function
  Grid g = unit_grid(5);
  auto f = ScalarField::sample(g, [](double s, double t) { return s * t; });
  OneForm df = exterior_derivative(f);
  EXPECT_NEAR(df.p()(2, 2), 0.5, 1e-14);
  EXPECT_NEAR(df.q()(2, 2), 0.5, 1e-14);
  EXPECT_NEAR(df.p()(0, 4), 1.0, 1e-14);
  EXPECT_NEAR(df.q()(4, 0), 1.0, 1e-14);
}

TEST(Forms2d, DerivativeOfCoordinateForms) {
  Grid g = unit_grid(7);
  auto s = ScalarField::sample(g, [](double s, double) { return s; });
  auto t = ScalarField::sample(g, [](double, double t) { return t; });
  TwoForm a = exterior_derivative(t * OneForm::ds(g));
  TwoForm b = exterior_derivative(s * OneForm::dt(g));
  EXPECT_NEAR(max_abs(a.r() + 1.0), 0.0, 1e-13);
  EXPECT_NEAR(max_abs(b.r() + (-1.0)), 0.0, 1e-13);
}

TEST(Forms2d, WedgeOfCoordinateForms) {
  Grid g = unit_grid(5);
  EXPECT_DOUBLE_EQ(max_abs(wedge(OneForm::ds(g), OneForm::dt(g)).r() + (-1.0)), 0.0);
  EXPECT_DOUBLE_EQ(max_abs(wedge(OneForm::dt(g), OneForm::ds(g)).r() + 1.0), 0.0);
  EXPECT_DOUBLE_EQ(max_abs(wedge(OneForm::ds(g), OneForm::ds(g)).r()), 0.0);
}

TEST(Forms2d, HodgeOnCoordinateForms) {
  Grid g = unit_grid(5);
  OneForm a = hodge(OneForm::ds(g));
  EXPECT_DOUBLE_EQ(max_abs(a.p()), 0.0);
  EXPECT_DOUBLE_EQ(max_abs(a.q() + (-1.0)), 0.0);
  OneForm b = hodge(OneForm::dt(g));
  EXPECT_DOUBLE_EQ(max_abs(b.p() + 1.0), 0.0);
  EXPECT_DOUBLE_EQ(max_abs(b.q()), 0.0);
}

TEST(Forms2d, DecomposeInRotatedCoframe) {
  const double phi = 0.7;
  Grid g = unit_grid(6);
  auto c = ScalarField::constant(g, std::cos(phi));
  auto s = ScalarField::constant(g, std::sin(phi));
  OneForm c1(c, s);    // cos ds + sin dt
  OneForm c2(-s, c);   // -sin ds + cos dt
  auto k = decompose_in_coframe(OneForm::ds(g), c1, c2);
  EXPECT_NEAR(max_abs(k.first + (-std::cos(phi))), 0.0, 1e-15);
  EXPECT_NEAR(max_abs(k.second + std::sin(phi)), 0.0, 1e-15);
}

TEST(Forms2d, SingularCoframeReportsNode) {
  Grid g = unit_grid(5);
  try {
    decompose_in_coframe(OneForm::ds(g), OneForm::ds(g), 2.0 * OneForm::ds(g));
    FAIL() << "expected SingularCoframeError";
  } catch (const SingularCoframeError& e) {
    EXPECT_EQ(e.i(), 0u);
    EXPECT_EQ(e.j(), 0u);
    EXPECT_EQ(e.determinant(), 0.0);
  }
}

TEST(Forms2d, LaplacianOfQuadratics) {
  Grid g = unit_grid(9);
  auto harmonic = ScalarField::sample(g, [](double s, double t) { return s * s - t * t; });
  auto sq = ScalarField::sample(g, [](double s, double) { return s * s; });
  EXPECT_LT(max_abs(laplacian(harmonic)), 1e-11);
  EXPECT_LT(max_abs(laplacian(sq) + (-2.0)), 1e-11);
}

TEST(Forms2d, EndStencilsExactOnCubics) {
  Grid g = unit_grid(9);
  auto f = ScalarField::sample(g, [](double s, double t) { return s * s * s + t * t * t; });
  auto fs = partial_s(f);
  auto fss = second_partial_s(f);
  for (std::size_t i : {0u, 8u}) {
    EXPECT_NEAR(fs(i, 3), 3 * g.s(i) * g.s(i), 1e-12);
    EXPECT_NEAR(fss(i, 3), 6 * g.s(i), 1e-10);
  }
}

TEST(Forms2d, ExteriorDerivativeConvergesAtSecondOrder) {
  // d(sin s cos t ds + e^{st} dt) = (t e^{st} + sin s sin t) ds^dt
  std::vector<double> h, err;
  for (std::size_t n : {33u, 65u, 129u, 257u}) {
    Grid g = unit_grid(n);
    OneForm w(ScalarField::sample(g, [](double s, double t) { return std::sin(s) * std::cos(t); }),
              ScalarField::sample(g, [](double s, double t) { return std::exp(s * t); }));
    auto exact = ScalarField::sample(
        g, [](double s, double t) { return t * std::exp(s * t) + std::sin(s) * std::sin(t); });
    h.push_back(g.hs());
    err.push_back(max_abs_interior(exterior_derivative(w).r() - exact));
  }
  EXPECT_GE(observed_order(h, err), 1.9);
  EXPECT_NEAR(err[2] / err[3], 4.0, 0.4);
}

TEST(Forms2d, CsvLayout) {
  Grid g(0.0, 1.0, 0.0, 2.0, 5, 6);
  auto f = ScalarField::sample(g, [](double s, double t) { return s + 10 * t; });
  std::ostringstream out;
  write_csv(out, f, "psi");
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "s,t,psi");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    // row-major: s is the slow index
    std::size_t i = rows / g.nt(), j = rows % g.nt();
    double s = 0, t = 0, v = 0;
    char c1 = 0, c2 = 0;
    std::istringstream row(line);
    row >> s >> c1 >> t >> c2 >> v;
    EXPECT_EQ(s, g.s(i));
    EXPECT_EQ(t, g.t(j));
    EXPECT_EQ(v, f(i, j));
    ++rows;
  }
  EXPECT_EQ(rows, g.size());
}

TEST(Forms2d, InteriorNormSkipsBoundary) {
  Grid g = unit_grid(7);
  auto f = ScalarField::generate(g, [](std::size_t i, std::size_t j) {
    return (i == 0 || j == 6) ? 100.0 : (i == 1 ? 5.0 : 1.0);
  });
  EXPECT_DOUBLE_EQ(max_abs(f), 100.0);
  EXPECT_DOUBLE_EQ(max_abs_interior(f), 5.0);
  EXPECT_DOUBLE_EQ(max_abs_interior(f, 2), 1.0);
  EXPECT_THROW(max_abs_interior(f, 4), PreconditionError);
}

// Randomised algebraic properties on arbitrary (non-smooth) samples.

TEST(Forms2dProperty, HodgeSquaredIsMinusIdentity) {
  std::mt19937 rng(11);
  Grid g = unit_grid(8);
  for (int trial = 0; trial < 20; ++trial) {
    OneForm w(random_field(g, rng), random_field(g, rng));
    OneForm hh = hodge(hodge(w));
    EXPECT_EQ(max_abs(hh.p() + w.p()), 0.0);
    EXPECT_EQ(max_abs(hh.q() + w.q()), 0.0);
  }
}

TEST(Forms2dProperty, WedgeAntisymmetricAndHodgeNorm) {
  std::mt19937 rng(12);
  Grid g = unit_grid(8);
  for (int trial = 0; trial < 20; ++trial) {
    OneForm a(random_field(g, rng), random_field(g, rng));
    OneForm b(random_field(g, rng), random_field(g, rng));
    EXPECT_LT(max_abs((wedge(a, b) + wedge(b, a)).r()), 1e-14);
    EXPECT_LT(max_abs(wedge(a, a).r()), 1e-14);
    // a ^ *a = |a|^2 ds^dt
    auto norm2 = a.p() * a.p() + a.q() * a.q();
    EXPECT_LT(max_abs(wedge(a, hodge(a)).r() - norm2), 1e-13);
  }
}

TEST(Forms2dProperty, DSquaredVanishes) {
  std::mt19937 rng(13);
  Grid g = unit_grid(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_field(g, rng);
    EXPECT_LT(max_abs(exterior_derivative(exterior_derivative(f)).r()), 1e-9);
  }
}

TEST(Forms2dProperty, DecomposeRecomposes) {
  std::mt19937 rng(14);
  std::uniform_real_distribution<double> ang(-3.0, 3.0), scl(0.5, 2.0);
  Grid g = unit_grid(6);
  for (int trial = 0; trial < 20; ++trial) {
    auto phi = ScalarField::generate(g, [&](std::size_t, std::size_t) { return ang(rng); });
    auto e = ScalarField::generate(g, [&](std::size_t, std::size_t) { return scl(rng); });
    auto c = phi.map([](double x) { return std::cos(x); });
    auto s = phi.map([](double x) { return std::sin(x); });
    OneForm c1(e * c, -(e * s));
    OneForm c2(e * s, e * c);
    OneForm w(random_field(g, rng), random_field(g, rng));
    auto k = decompose_in_coframe(w, c1, c2);
    OneForm back = k.first * c1 + k.second * c2;
    EXPECT_LT(max_abs(back.p() - w.p()), 1e-13);
    EXPECT_LT(max_abs(back.q() - w.q()), 1e-13);
  }
}
