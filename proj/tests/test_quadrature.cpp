#include "doctest.h"

#include <cmath>

#include "sfqfi/quadrature.hpp"

using namespace sfqfi;

TEST_CASE("5-point Gauss-Legendre nodes and weights") {
  const Rule r = gauss_legendre(5, -1.0, 1.0);
  const double x[] = {-0.906179845938664, -0.5384693101056831, 0.0, 0.5384693101056831, 0.906179845938664};
  const double w[] = {0.23692688505618942, 0.4786286704993662, 0.568888888888889, 0.4786286704993662,
                      0.23692688505618942};
  for (int i = 0; i < 5; ++i) {
    CHECK(r.nodes(i) == doctest::Approx(x[i]).epsilon(1e-14));
    CHECK(r.weights(i) == doctest::Approx(w[i]).epsilon(1e-14));
  }
}

TEST_CASE("n-point rule integrates degree 2n-1 exactly") {
  const Rule r = gauss_legendre(8, 0.5, 2.0);
  const Eigen::ArrayXd f = r.nodes.pow(15);
  const double exact = (std::pow(2.0, 16) - std::pow(0.5, 16)) / 16.0;
  CHECK(r.apply(f) == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("composite rule covers the interval") {
  const Rule r = composite_gauss_legendre(7, 6, -3.0, 4.0);
  CHECK(r.size() == 42);
  CHECK(r.weights.sum() == doctest::Approx(7.0).epsilon(1e-14));
  for (Eigen::Index i = 1; i < r.size(); ++i) CHECK(r.nodes(i) > r.nodes(i - 1));
  const Eigen::ArrayXd f = r.nodes.sin();
  CHECK(r.apply(f) == doctest::Approx(std::cos(-3.0) - std::cos(4.0)).epsilon(1e-12));
}

TEST_CASE("invalid rules are rejected") {
  CHECK_THROWS(gauss_legendre(0, 0.0, 1.0));
  CHECK_THROWS(composite_gauss_legendre(0, 4, 0.0, 1.0));
}
