#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "semidirac/testfn.hpp"

using namespace semidirac;
using Catch::Approx;

namespace {

Model symmetric_model(double eps) {
  Potential p;
  p.v12 = ScalarField2D::disk_indicator({0, 0}, 2.0, -1.0);
  return Model(5.0, eps, p);
}

}  // namespace

TEST_CASE("cutoff plateau, transition and support", "[testfn]") {
  RegularizedTestFunction t(CutoffProfile(), 4.0, SpinorSign::Plus);
  CHECK(t.value({4.0, 0.0}) == 1.0);
  CHECK(t.value({0.0, 16.0}) == 0.0);
  CHECK(t.value({2.0, 0.0}) == 1.0);        // interior plateau
  CHECK(t.value({100.0, 100.0}) == 0.0);    // far field
  // r = 8 = n^(3/2): f(r) = log_4(16/8) = 1/2; the default profile is
  // symmetric about t = 1/2.
  CHECK(t.value({8.0, 0.0}) == Approx(0.5).epsilon(1e-13));
  CHECK(t.value({0.0, -8.0}) == Approx(0.5).epsilon(1e-13));
}

TEST_CASE("cutoff is continuous across the region boundaries", "[testfn]") {
  RegularizedTestFunction t(CutoffProfile(), 4.0, SpinorSign::Plus);
  // The profile's flat margins make the piecewise definition agree on a
  // neighbourhood of r = n and r = n^2, not just at the seam.
  CHECK(t.value({4.0 + 1e-9, 0.0}) == 1.0);
  CHECK(t.value({4.2, 0.0}) == 1.0);
  CHECK(t.value({15.9, 0.0}) == 0.0);
  CHECK(t.value({16.0 - 1e-9, 0.0}) == 0.0);
}

TEST_CASE("cutoff derivatives vanish off the transition annulus", "[testfn]") {
  RegularizedTestFunction t(CutoffProfile(), 4.0, SpinorSign::Plus);
  for (Vec2 p : {Vec2{0.0, 2.0}, Vec2{1.0, 1.0}, Vec2{3.9, 0.0}, Vec2{17.0, 3.0},
                 Vec2{0.0, 400.0}}) {
    CHECK(t.dx(p) == 0.0);
    CHECK(t.dy(p) == 0.0);
    CHECK(t.dxx(p) == 0.0);
  }
  // Inside the transition the gradient points radially inward (phi decays).
  const Vec2 q{8.0, 0.0};
  CHECK(t.dx(q) < 0.0);
  CHECK(t.dy(q) == Approx(0.0).margin(1e-15));
}

TEST_CASE("norm of phi_n stays below pi n^4 and above the plateau", "[testfn]") {
  for (double n : {4.0, 8.0, 16.0}) {
    RegularizedTestFunction t(CutoffProfile(), n, SpinorSign::Plus);
    const double norm2 = phi_norm2(t);
    CHECK(norm2 <= M_PI * n * n * n * n);
    CHECK(norm2 >= M_PI * n * n);
  }
}

TEST_CASE("annulus quadrature matches the 1D reduction of ||dx phi||^2", "[testfn]") {
  // Exact reduction: ||dx phi_n||^2 = (pi / log n) * int_0^1 xi'(t)^2 dt.
  const CutoffProfile xi;
  auto [tn, tw] = gauss_legendre(200);
  double xi_d1_sq = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double t = 0.5 * (tn[i] + 1.0);
    xi_d1_sq += 0.5 * tw[i] * xi.d1(t) * xi.d1(t);
  }
  for (double n : {8.0, 32.0}) {
    RegularizedTestFunction t(xi, n, SpinorSign::Plus);
    const double expect = M_PI * xi_d1_sq / std::log(n);
    CHECK(dx_phi_norm2(t) == Approx(expect).epsilon(1e-10));
    CHECK(dy_phi_norm2(t) == Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("cutoff derivative estimates hold with the module constants", "[testfn]") {
  const CutoffProfile xi;
  const auto cc = cutoff_constants(xi, 5.0);
  for (double n : {8.0, 16.0, 32.0}) {
    RegularizedTestFunction t(xi, n, SpinorSign::Plus);
    CHECK(dx_phi_norm2(t) <= cc.c1 / std::log(n));
    CHECK(dxx_phi_norm2(t) <= cc.c2 / std::log(n));
  }
}

TEST_CASE("unperturbed quadratic form is positive and decays", "[testfn]") {
  const Model model = symmetric_model(0.0);
  const CutoffProfile xi;
  double prev = std::numeric_limits<double>::infinity();
  for (double n : {8.0, 16.0, 32.0}) {
    RegularizedTestFunction t(xi, n, SpinorSign::Plus);
    const double q = qform(model, t);
    CHECK(q > 0.0);
    CHECK(q < prev);
    prev = q;
  }
  CHECK(prev < 30.0);  // tends to zero like c / log n
}

TEST_CASE("quadratic form approaches I_eps for the symmetric setting", "[testfn]") {
  const Model model = symmetric_model(2.5);
  const CutoffProfile xi;
  const auto cc = cutoff_constants(xi, model.delta);
  RegularizedTestFunction t(xi, 32.0, SpinorSign::Plus);
  const double q = qform(model, t);
  CHECK(std::abs(q - (-75.0 * M_PI)) <= cc.c / std::log(32.0));
}

TEST_CASE("plus and minus forms coincide for diagonal-free potentials", "[testfn]") {
  const Model model = symmetric_model(2.5);
  RegularizedTestFunction plus(CutoffProfile(), 8.0, SpinorSign::Plus);
  RegularizedTestFunction minus(CutoffProfile(), 8.0, SpinorSign::Minus);
  CHECK(qform(model, plus) == qform(model, minus));
}

TEST_CASE("qform rejects unseparated or non-compact supports", "[testfn]") {
  const Model model = symmetric_model(1.0);
  RegularizedTestFunction too_small(CutoffProfile(), 1.5, SpinorSign::Plus);
  CHECK_THROWS_AS(qform(model, too_small), std::invalid_argument);

  Potential gaussian;
  gaussian.v12 = ScalarField2D::gaussian_decay({0, 0}, 1.0, -1.0);
  const Model gmodel(5.0, 1.0, gaussian);
  RegularizedTestFunction t(CutoffProfile(), 8.0, SpinorSign::Plus);
  CHECK_THROWS_AS(qform(gmodel, t), std::invalid_argument);

  CHECK_THROWS_AS(RegularizedTestFunction(CutoffProfile(), 0.9, SpinorSign::Plus),
                  std::invalid_argument);
}

TEST_CASE("convergence table verdict on the paper grid", "[testfn]") {
  const Model model = symmetric_model(2.5);
  const auto table = qform_convergence(model, CutoffProfile(), {8.0, 16.0, 32.0});
  REQUIRE(table.rows.size() == 3);
  for (const auto& row : table.rows) {
    CHECK(row.i_val == Approx(-75.0 * M_PI).epsilon(1e-12));
    CHECK(row.within_bound);
    CHECK(row.diff > 0.0);  // Q approaches I from above (positive derivative terms)
  }
  CHECK(table.decreasing);
  CHECK(table.pass);

  const std::string csv = qform_table_csv(table);
  CHECK(csv.rfind("n,Q,I,diff,bound,pass\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("convergence table rejects bad grids", "[testfn]") {
  const Model model = symmetric_model(2.5);
  CHECK_THROWS_AS(qform_convergence(model, CutoffProfile(), {}), std::invalid_argument);
  CHECK_THROWS_AS(qform_convergence(model, CutoffProfile(), {8.0, 8.0}), std::invalid_argument);
  CHECK_THROWS_AS(qform_convergence(model, CutoffProfile(), {2.0, 8.0}), std::invalid_argument);
}
