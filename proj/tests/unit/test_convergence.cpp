#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <bonnet/convergence.hpp>
#include <bonnet/errors.hpp>

using bonnet::converges;
using bonnet::observed_order;

TEST(Convergence, ExactPowerLaw) {
  std::vector<double> h{0.1, 0.05, 0.025}, r;
  for (double x : h) r.push_back(3.0 * x * x);
  EXPECT_NEAR(observed_order(h, r), 2.0, 1e-12);
}

TEST(Convergence, UnevenSpacingUsesLeastSquares) {
  // spacings 1/63, 1/127, 1/255 are not exact halves
  std::vector<double> h{1.0 / 63, 1.0 / 127, 1.0 / 255}, r;
  for (double x : h) r.push_back(std::pow(x, 1.5));
  EXPECT_NEAR(observed_order(h, r), 1.5, 1e-12);
}

TEST(Convergence, DegenerateInput) {
  EXPECT_TRUE(std::isnan(observed_order(std::vector<double>{0.1}, std::vector<double>{1.0})));
  EXPECT_TRUE(std::isnan(
      observed_order(std::vector<double>{0.1, 0.05}, std::vector<double>{1.0, 0.0})));
  EXPECT_THROW(observed_order(std::vector<double>{0.1, 0.05}, std::vector<double>{1.0}),
               bonnet::PreconditionError);
}

TEST(Convergence, PassRule) {
  std::vector<double> h{0.1, 0.05, 0.025};
  EXPECT_TRUE(converges(h, std::vector<double>{4e-2, 1e-2, 2.5e-3}, 1.9, 1e-10));
  EXPECT_FALSE(converges(h, std::vector<double>{4e-2, 2e-2, 1e-2}, 1.9, 1e-10));
  // already at the roundoff floor: no order to observe
  EXPECT_TRUE(converges(h, std::vector<double>{3e-15, 5e-15, 2e-15}, 1.9, 1e-10));
  EXPECT_FALSE(converges(h, std::vector<double>{3e-5, 5e-5, 2e-5}, 1.9, 1e-10));
}
