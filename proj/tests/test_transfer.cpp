#include "oseledets/errors.hpp"
#include "oseledets/spectrum.hpp"
#include "oseledets/transfer.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace oseledets;
using Eigen::MatrixXd;

namespace {

// Ulam entry by brute force: fraction of a fine uniform sample of bin i
// that lands in bin j.
MatrixXd sampled_ulam(const PiecewiseExpandingMap1D& t, int bins, int samples) {
  MatrixXd p = MatrixXd::Zero(bins, bins);
  for (int i = 0; i < bins; ++i)
    for (int s = 0; s < samples; ++s) {
      const double x = (i + (s + 0.5) / samples) / bins;
      const int j = std::min(bins - 1, static_cast<int>(t(x) * bins));
      p(i, j) += 1.0 / samples;
    }
  return p;
}

}  // namespace

TEST_CASE("Ulam matrices of doubling and tripling") {
  const UlamOperator d = ulam_matrix(presets::doubling(), 4);
  MatrixXd expected(4, 4);
  expected << 0.5, 0.5, 0, 0, 0, 0, 0.5, 0.5, 0.5, 0.5, 0, 0, 0, 0, 0.5, 0.5;
  CHECK((d.matrix - expected).norm() == 0.0);
  CHECK(d.exactly_row_stochastic());
  CHECK(d.exact_rows[1].at(2) == Rational(1, 2));

  const UlamOperator t = ulam_matrix(presets::tripling(), 3);
  CHECK((t.matrix - MatrixXd::Constant(3, 3, 1.0 / 3)).norm() < 1e-16);
  CHECK(t.exact_rows[0].at(0) == Rational(1, 3));

  // Pushforward of the uniform bin density stays uniform.
  const UlamOperator big = ulam_matrix(presets::doubling(), 64);
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(64, 1.0 / 64);
  CHECK((big.matrix.transpose() * u - u).norm() < 1e-15);
}

TEST_CASE("Ulam entries against sampling") {
  for (const auto& m : {presets::mixture_a(), presets::partial_two_branch(Rational(1, 10)), presets::buzzi_swap(),
                        presets::smooth_doubling(0.05)}) {
    const MatrixXd exact = ulam_matrix(m, 16).matrix;
    CHECK((exact - sampled_ulam(m, 16, 20000)).cwiseAbs().maxCoeff() < 2e-3);
  }
}

TEST_CASE("exact and floating Ulam agree") {
  UlamOptions fp;
  fp.exact = false;
  for (const auto& m : {presets::mixture_b(), presets::full_two_branch(Rational(7, 3))}) {
    const UlamOperator a = ulam_matrix(m, 50), b = ulam_matrix(m, 50, fp);
    CHECK(a.exactly_row_stochastic());
    CHECK_FALSE(b.exact);
    CHECK((a.matrix - b.matrix).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(b.row_sum_defect() <= 1e-12);
  }
  UlamOptions threaded;
  threaded.threads = 3;
  CHECK((ulam_matrix(presets::mixture_a(), 40, threaded).matrix - ulam_matrix(presets::mixture_a(), 40).matrix).norm() == 0.0);
  const UlamOperator smooth = ulam_matrix(presets::smooth_doubling(0.05), 32);
  CHECK_FALSE(smooth.exact);
  CHECK(smooth.row_sum_defect() <= 1e-12);
}

TEST_CASE("CSV export") {
  std::ostringstream os;
  write_ulam_csv(os, ulam_matrix(presets::doubling(), 2));
  CHECK(os.str() == "p0,p1\n0.5,0.5\n0.5,0.5\n");
}

TEST_CASE("Ulam cocycles") {
  const auto sys = presets::constant_system(presets::doubling());
  const CocycleGenerator g = random_ulam_cocycle(sys, 8);
  const MatrixXd p = ulam_matrix(presets::doubling(), 8).matrix;
  CHECK((g(BaseState{0, 0.0}) - p.transpose()).norm() == 0.0);

  const auto alt = presets::alternating_system(presets::doubling(), presets::tripling());
  const CocycleGenerator ga = random_ulam_cocycle(alt, 9);
  CHECK((ga(BaseState{0, 0.0}) - ulam_matrix(presets::doubling(), 9).matrix.transpose()).norm() == 0.0);
  CHECK((ga(BaseState{1, 0.0}) - ulam_matrix(presets::tripling(), 9).matrix.transpose()).norm() == 0.0);

  const auto mix = presets::bernoulli_mixture_system();
  const OrbitWindow o = generate_orbit(mix.driver, 3, 0, 520);
  LyapunovOptions opt;
  opt.norm = NormTag::l1;
  opt.frame = StartFrame::positive_generic;
  opt.count = 3;
  CHECK(std::abs(lyapunov_exponents(random_ulam_cocycle(mix, 32), o, 500, opt).max_exponent()) < 1e-6);

  const auto fam = presets::random_slope_system(2.0, 3.0);
  const CocycleGenerator gf = random_ulam_cocycle(fam, 16);
  CHECK(gf.kind() == "ulam");
  const BaseState s{0, 0.25};
  CHECK((gf(s) - ulam_matrix(fam.map_at(s), 16, UlamOptions{false}).matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exact transfer of polynomial densities") {
  using P = PiecewisePolynomial<Rational>;
  const auto one = transfer_apply_exact(presets::doubling(), P::constant(Rational(1)));
  for (const Rational x : {Rational(0), Rational(1, 3), Rational(9, 10)}) CHECK(one(x) == Rational(1));

  const auto lin = transfer_apply_exact(presets::doubling(), P::polynomial({Rational(0), Rational(1)}));
  for (const Rational x : {Rational(0), Rational(1, 7), Rational(5, 6)}) CHECK(lin(x) == x / 2 + Rational(1, 4));

  const auto three = transfer_apply_exact(presets::tripling(), P::constant(Rational(3)));
  CHECK(three(Rational(1, 2)) == Rational(3));

  CHECK_THROWS_AS(transfer_apply_exact(presets::smooth_doubling(0.05), P::constant(Rational(1))),
                  UnsupportedFormError);
}

TEST_CASE("exact transfer conserves mass") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> num(-5, 5), den(1, 7);
  for (int it = 0; it < 30; ++it) {
    std::vector<std::vector<Rational>> c(3);
    for (auto& piece : c)
      for (int d = 0; d < 4; ++d) piece.push_back(Rational(num(rng), den(rng)));
    const PiecewisePolynomial<Rational> f({Rational(0), Rational(1, 5), Rational(2, 3), Rational(1)}, c);
    for (const auto& m : {presets::doubling(), presets::buzzi_swap(), presets::partial_two_branch(Rational(1, 10)),
                          presets::mixture_a()})
      CHECK(transfer_apply_exact(m, f).integral() == f.integral());
  }
  // Double precision only up to rounding.
  const PiecewisePolynomial<double> g = PiecewisePolynomial<double>::polynomial({0.1, 0.7, -0.3});
  CHECK(transfer_apply_exact(presets::mixture_b(), g).integral() == doctest::Approx(g.integral()).epsilon(1e-14));
}

TEST_CASE("complexity counters") {
  const auto d = presets::doubling();
  const auto one = complexity_counters({d});
  CHECK(one.c_b == 2);
  CHECK(one.c_e == 2);
  const auto two = complexity_counters({d, d});
  CHECK(two.c_b == 2);
  CHECK(two.c_e == 4);
  CHECK(two.branches == 4);
  CHECK(complexity_counters({presets::tripling(), d, presets::mixture_a()}).c_b == 2);
  CHECK_THROWS_AS(complexity_counters({}), ParameterError);
}

TEST_CASE("Lasota-Yorke constants") {
  const auto dsys = presets::constant_system(presets::doubling());
  const OrbitWindow o = generate_orbit(dsys.driver, 1, 0, 20);
  CHECK(ly_bound_B(dsys, o, 1, 2.0, 0.25, 1.0) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-14));
  CHECK(ly_bound_B(dsys, o, 1, 2.0, 0.25, 0.0) == 0.0);
  const auto tsys = presets::constant_system(presets::tripling());
  CHECK(ly_bound_B(tsys, o, 1, 2.0, 0.25, 1.0) ==
        doctest::Approx(std::sqrt(3.0) * std::sqrt(2.0) * std::pow(3.0, -0.75)).epsilon(1e-14));
  CHECK_THROWS_AS(ly_bound_B(dsys, o, 1, 1.0, 0.25), ParameterError);
  CHECK_THROWS_AS(ly_bound_B(dsys, o, 1, 2.0, 0.6), ParameterError);

  const KappaStarBound k = kappa_star_bound(dsys, o, 1, 2.0, 0.25);
  CHECK(k.value == doctest::Approx(-0.25 * std::log(2.0)).epsilon(1e-15));
  CHECK(k.c_e_star == doctest::Approx(2.0));
  CHECK(k.chi == doctest::Approx(0.5));
  CHECK(k.quasi_compact);
  const KappaStarBound kt = kappa_star_bound(tsys, o, 6, 2.0, 0.25);
  CHECK(kt.value == doctest::Approx(0.25 * std::log(1.0 / 3)).epsilon(1e-12));
  // Toward t -> 0 and p -> 1 the certificate degenerates.
  const KappaStarBound lim = kappa_star_bound(dsys, o, 1, 1.0001, 1e-6);
  CHECK(std::abs(lim.value) < 1e-3);
}
