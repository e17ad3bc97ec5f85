#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "semidirac/model.hpp"

using namespace semidirac;
using Catch::Approx;

namespace {

ScalarField2D disk_chi(double amplitude, double radius = 2.0) {
  return ScalarField2D::disk_indicator({0, 0}, radius, amplitude);
}

/// Independent oracle for the dispersion relation: numerically diagonalize
/// the 2x2 Fourier symbol [[k_y, k_x^2 + delta], [k_x^2 + delta, -k_y]].
std::pair<double, double> dispersion_oracle(Vec2 k, double delta) {
  Eigen::Matrix2d symbol;
  symbol << k.y, k.x * k.x + delta, k.x * k.x + delta, -k.y;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(symbol);
  return {es.eigenvalues()(0), es.eigenvalues()(1)};
}

}  // namespace

TEST_CASE("field evaluation follows the descriptor", "[model]") {
  CHECK(ScalarField2D::zero().eval({3.7, -1.0}) == cplx(0.0));

  const auto chi = disk_chi(-1.0);
  CHECK(chi.eval({1.0, 1.0}) == cplx(-1.0));
  CHECK(chi.eval({2.1, 0.0}) == cplx(0.0));

  const auto sum = ScalarField2D::sum({disk_chi(-1.0, 2.0), disk_chi(0.5, 1.0)});
  CHECK(sum.eval({0.5, 0.0}) == cplx(-0.5));
}

TEST_CASE("gaussian field evaluates the closed form", "[model]") {
  const auto g = ScalarField2D::gaussian_decay({1.0, 0.0}, 2.0, cplx(3.0, -1.0));
  const Vec2 p{2.0, 2.0};
  const cplx expect = cplx(3.0, -1.0) * std::exp(-(1.0 + 4.0) / 4.0);
  CHECK(std::abs(g.eval(p) - expect) < 1e-15);
}

TEST_CASE("real fields have exactly zero imaginary part on random points", "[model]") {
  const auto f = ScalarField2D::sum(
      {disk_chi(-1.0), ScalarField2D::gaussian_decay({0.5, -0.5}, 1.5, 2.25),
       disk_chi(0.125, 0.75)});
  REQUIRE(f.is_real());
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 10000; ++i) {
    const cplx v = f.eval({u(rng), u(rng)});
    CHECK(v.imag() == 0.0);
    CHECK(std::abs(v) <= f.amplitude_bound() + 1e-15);
  }
}

TEST_CASE("compact support radius is sharp", "[model]") {
  const auto f = ScalarField2D::sum(
      {ScalarField2D::disk_indicator({1.0, 1.0}, 2.0, -1.0), disk_chi(1.0, 0.5)});
  const auto r = f.compact_support_radius();
  REQUIRE(r.has_value());
  CHECK(*r == Approx(std::sqrt(2.0) + 2.0));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> rad(*r + 1e-9, *r + 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = angle(rng), rr = rad(rng);
    CHECK(f.eval({rr * std::cos(a), rr * std::sin(a)}) == cplx(0.0));
  }
  CHECK_FALSE(ScalarField2D::gaussian_decay({0, 0}, 1.0, 1.0).compact_support_radius());
}

TEST_CASE("potential validation", "[model]") {
  Potential ok;
  ok.v12 = disk_chi(-1.0);
  CHECK(validate_potential(ok).passed);

  Potential fig1_lower;
  fig1_lower.v11 = disk_chi(0.2);
  fig1_lower.v22 = disk_chi(-0.9);
  fig1_lower.v12 = disk_chi(-1.0);
  CHECK(validate_potential(fig1_lower).passed);

  Potential bad;
  bad.v11 = ScalarField2D::disk_indicator({0, 0}, 2.0, cplx(0.0, 0.25));
  bad.v12 = disk_chi(-1.0);
  const auto report = validate_potential(bad);
  CHECK_FALSE(report.passed);
  CHECK(report.first_failure == "v11 real-valued");
}

TEST_CASE("validation is stable under Sum reassociation", "[model]") {
  Potential flat;
  flat.v12 = ScalarField2D::sum({disk_chi(-0.5), disk_chi(-0.25), disk_chi(-0.25)});
  Potential nested;
  nested.v12 = ScalarField2D::sum(
      {disk_chi(-0.5), ScalarField2D::sum({disk_chi(-0.25), disk_chi(-0.25)})});
  CHECK(validate_potential(flat).passed == validate_potential(nested).passed);
}

TEST_CASE("dispersion at the band edge and at a frozen point", "[model]") {
  const auto [lo0, hi0] = dispersion({0, 0}, 5.0);
  CHECK(lo0 == Approx(-5.0).epsilon(1e-15));
  CHECK(hi0 == Approx(5.0).epsilon(1e-15));

  const auto [lo, hi] = dispersion({1.0, 2.0}, 5.0);
  CHECK(hi == Approx(6.324555320336759).epsilon(1e-14));
  CHECK(lo == Approx(-6.324555320336759).epsilon(1e-14));
}

TEST_CASE("dispersion matches the 2x2 symbol diagonalization oracle", "[model]") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uk(-4.0, 4.0);
  std::uniform_real_distribution<double> ud(0.1, 9.0);
  for (int i = 0; i < 200; ++i) {
    const Vec2 k{uk(rng), uk(rng)};
    const double delta = ud(rng);
    const auto [lo, hi] = dispersion(k, delta);
    const auto [olo, ohi] = dispersion_oracle(k, delta);
    CHECK(lo == Approx(olo).epsilon(1e-12).margin(1e-12));
    CHECK(hi == Approx(ohi).epsilon(1e-12).margin(1e-12));
  }
}

TEST_CASE("upper band attains its minimum delta exactly at k = 0", "[model]") {
  const double delta = 5.0;
  double min_e = std::numeric_limits<double>::infinity();
  Vec2 argmin{1e9, 1e9};
  for (int i = -40; i <= 40; ++i) {
    for (int j = -40; j <= 40; ++j) {
      const Vec2 k{0.1 * i, 0.1 * j};
      const double e = dispersion(k, delta).second;
      CHECK(e >= delta);
      if (e < min_e) {
        min_e = e;
        argmin = k;
      }
    }
  }
  CHECK(min_e == Approx(delta).epsilon(1e-15));
  CHECK(argmin.x == 0.0);
  CHECK(argmin.y == 0.0);
}

TEST_CASE("dispersion has the symbol parity symmetries", "[model]") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const Vec2 k{u(rng), u(rng)};
    const double e = dispersion(k, 2.5).second;
    CHECK(dispersion({-k.x, k.y}, 2.5).second == e);
    CHECK(dispersion({k.x, -k.y}, 2.5).second == e);
    CHECK(dispersion(k, 2.5).first == -e);
  }
}

TEST_CASE("spectral edges", "[model]") {
  const auto gap5 = spectral_edges(5.0);
  CHECK(gap5.lo == -5.0);
  CHECK(gap5.hi == 5.0);
  const auto gap1 = spectral_edges(1.0);
  CHECK(gap1.lo == -1.0);
  CHECK(gap1.hi == 1.0);
  CHECK(gap5.contains(0.0));
  CHECK_FALSE(gap5.contains(5.0));
  for (double d : {0.25, 1.75, 12.0}) CHECK(spectral_edges(d).lo == -spectral_edges(d).hi);
  CHECK_THROWS_AS(spectral_edges(0.0), std::invalid_argument);
  CHECK_THROWS_AS(dispersion({0, 0}, -1.0), std::invalid_argument);
}

TEST_CASE("model construction validates parameters", "[model]") {
  Potential p;
  CHECK_THROWS_AS(Model(-1.0, 0.0, p), std::invalid_argument);
  CHECK_THROWS_AS(Model(1.0, -0.5, p), std::invalid_argument);
  const Model m(5.0, 2.5, p);
  CHECK(m.delta == 5.0);
}
