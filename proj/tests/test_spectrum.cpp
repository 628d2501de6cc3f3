#include "oseledets/errors.hpp"
#include "oseledets/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace oseledets;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd m2(double a, double b, double c, double d) { return (MatrixXd(2, 2) << a, b, c, d).finished(); }

MatrixXd random_matrix(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n;
  MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = n(rng);
  return m;
}

const OrbitWindow& constant_orbit() {
  static const OrbitWindow o = generate_orbit(FiniteCycle{1, 0}, 1, 400, 2100);
  return o;
}

}  // namespace

TEST_CASE("diagonal and identity spectra") {
  const LyapunovSpectrum s = lyapunov_exponents(CocycleGenerator::constant(m2(2, 0, 0, 0.5)), constant_orbit(), 200);
  REQUIRE(s.exponents.size() == 2);
  CHECK(std::abs(s.exponents[0] - std::log(2.0)) < 1e-10);
  CHECK(std::abs(s.exponents[1] + std::log(2.0)) < 1e-10);
  CHECK(s.multiplicities == std::vector<int>{1, 1});
  CHECK_FALSE(s.degenerate);

  const LyapunovSpectrum id = lyapunov_exponents(CocycleGenerator::constant(MatrixXd::Identity(4, 4)), constant_orbit(), 50);
  REQUIRE(id.exponents.size() == 1);
  CHECK(id.exponents[0] == doctest::Approx(0.0));
  CHECK(id.multiplicities[0] == 4);
  CHECK(id.max_exponent() == doctest::Approx(0.0));

  CHECK_THROWS_AS(lyapunov_exponents(CocycleGenerator::constant(MatrixXd::Identity(2, 2)), constant_orbit(), 3),
                  ParameterError);
}

TEST_CASE("period-2 exponents from the period product") {
  std::mt19937_64 rng(12);
  const OrbitWindow o = generate_orbit(FiniteCycle{2, 0}, 1, 0, 1010);
  for (int it = 0; it < 5; ++it) {
    const MatrixXd a = random_matrix(rng, 3), b = random_matrix(rng, 3);
    Eigen::EigenSolver<MatrixXd> es(MatrixXd(b * a));
    std::vector<double> expected;
    for (int i = 0; i < 3; ++i) expected.push_back(0.5 * std::log(std::abs(es.eigenvalues()(i))));
    std::sort(expected.rbegin(), expected.rend());
    const LyapunovSpectrum s = lyapunov_exponents(CocycleGenerator::tabulated({a, b}), o, 1000, 1e-3);
    std::vector<double> got;
    for (std::size_t j = 0; j < s.exponents.size(); ++j)
      for (int m = 0; m < s.multiplicities[j]; ++m) got.push_back(s.exponents[j]);
    REQUIRE(got.size() == 3);
    // Conjugate eigenvalue pairs share a modulus and cluster together.
    for (int i = 0; i < 3; ++i) CHECK(got[static_cast<std::size_t>(i)] == doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(0.01));
  }
}

TEST_CASE("kernel directions are reported separately") {
  const LyapunovSpectrum s = lyapunov_exponents(CocycleGenerator::constant(m2(1, 0, 0, 0)), constant_orbit(), 50);
  REQUIRE(s.exponents.size() == 1);
  CHECK(s.exponents[0] == doctest::Approx(0.0));
  CHECK(s.kernel_dim == 1);
}

TEST_CASE("degeneracy warning near the gap threshold") {
  const LyapunovSpectrum s =
      lyapunov_exponents(CocycleGenerator::constant(m2(std::exp(0.07), 0, 0, 1)), constant_orbit(), 400, 0.05);
  CHECK(s.exponents.size() == 2);
  CHECK(s.degenerate);
  CHECK_FALSE(s.warnings.empty());
}

TEST_CASE("QR and SVD rates agree") {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 20; ++it) {
    const int d = 2 + it % 5;
    const CocycleGenerator g = CocycleGenerator::tabulated({random_matrix(rng, d), random_matrix(rng, d)});
    const OrbitWindow o = generate_orbit(BernoulliShift{{0.5, 0.5}}, 30 + it, 0, 60);
    for (std::size_t n : {10, 25, 50}) {
      std::vector<double> seq = sequential_qr_rates(g, o, 0, n);
      std::vector<double> prod = product_qr_rates(g, o, 0, n);
      const std::vector<double> svd = svd_rates(g, o, 0, n);
      // The R diagonals multiply to |det|. The explicit product loses its
      // small singular values to rounding, so only its top entry is compared.
      double seq_sum = 0, det_sum = 0;
      for (int i = 0; i < d; ++i) seq_sum += seq[i];
      for (std::size_t i = 0; i < n; ++i) det_sum += std::log(std::abs(g(o.state(static_cast<std::ptrdiff_t>(i))).determinant()));
      CHECK(seq_sum == doctest::Approx(det_sum / static_cast<double>(n)).epsilon(1e-9));
      CHECK(seq[0] == doctest::Approx(prod[0]).epsilon(1e-9));
      if (n == 10) CHECK((*std::max_element(prod.begin(), prod.end())) <= svd.front() + 1e-9);
      std::sort(seq.rbegin(), seq.rend());
      // The QR and SVD values differ by an O(1/n) term: the top value is
      // squeezed between them.
      CHECK(seq.front() <= svd.front() + 1e-9);
    }
  }
}

TEST_CASE("QR-SVD gap shrinks like 1/n") {
  std::mt19937_64 rng(4);
  const CocycleGenerator g = CocycleGenerator::tabulated({random_matrix(rng, 3), random_matrix(rng, 3)});
  const OrbitWindow o = generate_orbit(BernoulliShift{{0.5, 0.5}}, 5, 0, 1700);
  auto gap = [&](std::size_t n) {
    std::vector<double> seq = sequential_qr_rates(g, o, 0, n);
    std::sort(seq.rbegin(), seq.rend());
    const std::vector<double> svd = svd_rates(g, o, 0, n);
    // Only the top value: the explicit product is too ill-conditioned to
    // resolve the rest at n = 1600.
    return std::abs(seq[0] - svd[0]);
  };
  CHECK(gap(1600) * 1600 < 20.0);
  CHECK(gap(1600) < gap(50));
}

TEST_CASE("sigma-invariance of exponents") {
  std::mt19937_64 rng(9);
  const CocycleGenerator g = CocycleGenerator::tabulated({random_matrix(rng, 3), random_matrix(rng, 3)});
  const OrbitWindow o = generate_orbit(BernoulliShift{{0.5, 0.5}}, 21, 0, 2100);
  LyapunovOptions a, b;
  b.offset = 5;
  const LyapunovSpectrum s0 = lyapunov_exponents(g, o, 2000, a), s5 = lyapunov_exponents(g, o, 2000, b);
  REQUIRE(s0.raw.size() == s5.raw.size());
  for (std::size_t i = 0; i < s0.raw.size(); ++i) CHECK(std::abs(s0.raw[i] - s5.raw[i]) < 0.02);
}

TEST_CASE("filtration examples") {
  const CocycleGenerator diag = CocycleGenerator::constant(m2(2, 0, 0, 0.5));
  const LyapunovSpectrum s = lyapunov_exponents(diag, constant_orbit(), 100);
  const FiltrationAt f = filtration_at(diag, constant_orbit(), 0, 40, s);
  REQUIRE(f.levels.size() == 3);
  CHECK(f.levels[0].dim() == 2);
  CHECK(grassmann_distance(f.levels[1], Subspace::span({VectorXd::Unit(2, 1)})) < 1e-12);
  CHECK(f.levels[2].dim() == 0);

  const CocycleGenerator id = CocycleGenerator::constant(MatrixXd::Identity(2, 2));
  const FiltrationAt g = filtration_at(id, constant_orbit(), 0, 40, lyapunov_exponents(id, constant_orbit(), 50));
  CHECK(g.levels.front().dim() == 2);
  CHECK(g.levels.back().dim() == 0);

  const CocycleGenerator proj = CocycleGenerator::constant(m2(1, 0, 0, 0));
  const FiltrationAt h = filtration_at(proj, constant_orbit(), 0, 40, lyapunov_exponents(proj, constant_orbit(), 50));
  REQUIRE(h.levels.size() >= 2);
  CHECK(grassmann_distance(h.levels[1], Subspace::span({VectorXd::Unit(2, 1)})) < 1e-12);
}

TEST_CASE("filtration is carried forward") {
  std::mt19937_64 rng(14);
  // Upper-triangular factors with separated diagonals keep a clean spectrum.
  std::vector<MatrixXd> table;
  for (int s = 0; s < 2; ++s) {
    MatrixXd m = random_matrix(rng, 3).triangularView<Eigen::Upper>();
    m.diagonal() << 3.0 + s, 1.0, 0.2;
    table.push_back(m);
  }
  const CocycleGenerator g = CocycleGenerator::tabulated(table);
  const OrbitWindow o = generate_orbit(BernoulliShift{{0.5, 0.5}}, 3, 0, 200);
  const LyapunovSpectrum s = lyapunov_exponents(g, o, 150);
  const FiltrationAt here = filtration_at(g, o, 0, 40, s);
  const FiltrationAt next = filtration_at(g, o, 1, 40, s);
  const MatrixXd l = g(o.state(0));
  for (std::size_t j = 1; j + 1 < here.levels.size(); ++j) {
    const Subspace image(MatrixXd(l * here.levels[j].orthonormal()));
    CHECK(one_sided_distance(image, next.levels[j]) < 1e-4);
    CHECK(here.levels[j - 1].dim() - here.levels[j].dim() == s.multiplicities[j - 1]);
  }
}

TEST_CASE("growth rates") {
  const CocycleGenerator diag = CocycleGenerator::constant(m2(2, 0, 0, 0.5));
  const std::size_t n = 100;
  CHECK(growth_rate(diag, constant_orbit(), VectorXd::Unit(2, 0), n) == doctest::Approx(std::log(2.0)));
  CHECK(growth_rate(diag, constant_orbit(), VectorXd::Unit(2, 1), n) == doctest::Approx(-std::log(2.0)));
  // |(2^n, 2^-n)| / |(1,1)| in closed form.
  const double exact = (n * std::log(2.0) + 0.5 * std::log1p(std::pow(4.0, -static_cast<double>(n))) - 0.5 * std::log(2.0)) / n;
  CHECK(growth_rate(diag, constant_orbit(), Eigen::Vector2d(1, 1), n) == doctest::Approx(exact).epsilon(1e-12));
  CHECK(growth_rate(CocycleGenerator::constant(m2(0, 1, 0, 0)), constant_orbit(), VectorXd::Unit(2, 1), 5) == -INFINITY);
}

TEST_CASE("Hennion bound") {
  const OrbitWindow c1 = generate_orbit(FiniteCycle{1, 0}, 1, 0, 20);
  CHECK(hennion_kappa_bound([](std::ptrdiff_t) { return 0.5; }, c1, 10) == doctest::Approx(std::log(0.5)));
  CHECK(hennion_kappa_bound([](std::ptrdiff_t) { return 1.0; }, c1, 10) == doctest::Approx(0.0));
  const OrbitWindow c2 = generate_orbit(FiniteCycle{2, 0}, 1, 0, 20);
  const OffsetSeries b = [&](std::ptrdiff_t k) { return c2.state(k).symbol == 0 ? 1.0 : 0.25; };
  CHECK(hennion_kappa_bound(b, c2, 10) == doctest::Approx(std::log(0.5)));
  CHECK_THROWS_AS(hennion_kappa_bound([](std::ptrdiff_t) { return 0.0; }, c1, 5), ParameterError);
}

TEST_CASE("index of compactness proxy") {
  CHECK(index_of_compactness_proxy(CocycleGenerator::constant(MatrixXd::Identity(2, 2)), constant_orbit(), 50, 0) ==
        doctest::Approx(0.0));
  CHECK(index_of_compactness_proxy(CocycleGenerator::constant(m2(2, 0, 0, 0.5)), constant_orbit(), 50, 1) ==
        doctest::Approx(-std::log(2.0)));
  CHECK(index_of_compactness_proxy(CocycleGenerator::constant(m2(1, 1, 1, 1)), constant_orbit(), 50, 1) == -INFINITY);
}

TEST_CASE("positive generic frame keeps the leading direction positive") {
  // Two invariant blocks: the identity frame sees only one top direction.
  MatrixXd p = MatrixXd::Zero(4, 4);
  p.topLeftCorner(2, 2).setConstant(0.5);
  p.bottomRightCorner(2, 2).setConstant(0.5);
  LyapunovOptions o;
  o.norm = NormTag::l1;
  o.frame = StartFrame::positive_generic;
  const LyapunovSpectrum s = lyapunov_exponents(CocycleGenerator::constant(p), constant_orbit(), 100, o);
  CHECK(std::abs(s.max_exponent()) < 1e-12);
  CHECK(s.multiplicities.front() == 2);
}
