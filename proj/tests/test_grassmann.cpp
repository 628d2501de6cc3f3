#include "oseledets/errors.hpp"
#include "oseledets/grassmann.hpp"
#include "support/properties.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace oseledets;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

VectorXd e(int i, int d) { return VectorXd::Unit(d, i); }

MatrixXd col(std::initializer_list<double> v) {
  MatrixXd m(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

// Brute force for lines in the plane: grid over y in Y cap B, ternary search
// over the convex function s -> |y - s w| on the segment W cap B.
double brute_one_sided(Vector2d y, Vector2d w, NormTag norm) {
  y /= vector_norm(y, norm);
  w /= vector_norm(w, norm);
  double sup = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const Vector2d p = (-1.0 + i / 200.0) * y;
    double lo = -1.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (vector_norm(Vector2d(p - m1 * w), norm) < vector_norm(Vector2d(p - m2 * w), norm))
        hi = m2;
      else
        lo = m1;
    }
    sup = std::max(sup, vector_norm(Vector2d(p - 0.5 * (lo + hi) * w), norm));
  }
  return sup;
}

}  // namespace

TEST_CASE("distance examples") {
  const Subspace y = Subspace::span({e(0, 3), e(1, 3)});
  CHECK(grassmann_distance(y, y) == doctest::Approx(0.0));
  CHECK(grassmann_distance(Subspace::span({e(0, 2)}), Subspace::span({e(1, 2)})) == doctest::Approx(1.0));
  // dim 1 against dim 2: at least 2^-1/8.
  CHECK(grassmann_distance(Subspace::span({e(0, 3)}), y) >= 1.0 / 16);
  CHECK_THROWS_AS(grassmann_distance(Subspace::span({e(0, 2)}), Subspace::span({e(0, 3)})), ParameterError);
  CHECK_THROWS_AS(grassmann_distance(Subspace::span({e(0, 2)}), Subspace::span({e(0, 2)}, NormTag::l1)),
                  ParameterError);
}

TEST_CASE("distance against brute force for plane lines") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (NormTag norm : {NormTag::l1, NormTag::l2, NormTag::linf}) {
    for (int it = 0; it < 15; ++it) {
      const Vector2d y(n(rng), n(rng)), w(n(rng), n(rng));
      const double brute = std::max(brute_one_sided(y, w, norm), brute_one_sided(w, y, norm));
      const double d = grassmann_distance(Subspace(MatrixXd(y), norm), Subspace(MatrixXd(w), norm));
      CHECK(d == doctest::Approx(brute).epsilon(1e-6));
    }
  }
}

TEST_CASE("l2 distance agrees with principal angles") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  for (int it = 0; it < 50; ++it) {
    const int d = 3 + it % 4, k = 1 + it % (d - 1);
    MatrixXd a(d, k), b(d, k);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < k; ++j) a(i, j) = n(rng), b(i, j) = n(rng);
    CHECK(grassmann_distance(Subspace(a), Subspace(b)) ==
          doctest::Approx(principal_angle_distance(Subspace(a), Subspace(b))).epsilon(1e-10));
  }
}

TEST_CASE("distance to a subspace") {
  const VectorXd x = e(0, 2);
  CHECK(distance_point_subspace(x, Subspace::span({e(0, 2)})) == doctest::Approx(0.0));
  CHECK(distance_point_subspace(x, Subspace::span({e(1, 2)})) == doctest::Approx(1.0));
  CHECK(distance_point_subspace(x, Subspace(col({1, 1}))) == doctest::Approx(1 / std::sqrt(2.0)));
  // l1: min_s |1 - s| + |s| = 1; linf: min_s max(|1 - s|, |s|) = 1/2.
  CHECK(distance_point_subspace(x, Subspace(col({1, 1}), NormTag::l1)) == doctest::Approx(1.0));
  CHECK(distance_point_subspace(x, Subspace(col({1, 1}), NormTag::linf)) == doctest::Approx(0.5));
}

TEST_CASE("nice bases") {
  const MatrixXd b1 = nice_basis(Subspace::span({e(0, 3)}));
  CHECK(std::abs(b1(0, 0)) == doctest::Approx(1.0));
  CHECK(b1.col(0).tail(2).norm() == doctest::Approx(0.0));

  const MatrixXd b2 = nice_basis(Subspace::span({e(0, 2), Vector2d(1, 1)}));
  CHECK(std::abs(b2(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(b2(1, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(b2(0, 1)) == doctest::Approx(0.0));

  const MatrixXd b3 = nice_basis(Subspace::whole(2, NormTag::linf));
  CHECK(is_eps_nice(b3, 1e-6, NormTag::linf));

  MatrixXd dep(2, 2);
  dep << 1, 2, 1, 2;
  CHECK_THROWS_AS(Subspace{dep}, RankError);
}

TEST_CASE("eps-nice predicate") {
  CHECK(is_eps_nice(MatrixXd::Identity(3, 3), 1e-3, NormTag::l2));
  MatrixXd twice(2, 2);
  twice << 1, 1, 0, 0;
  CHECK_FALSE(is_eps_nice(twice, 1e-3, NormTag::l2));
  MatrixXd short_second(2, 2);
  short_second << 1, 0, 0, 1 - 2e-2;
  CHECK_FALSE(is_eps_nice(short_second, 1e-2, NormTag::l2));
  CHECK(nice_eps_admissible(1e-3, 3));
  CHECK_FALSE(nice_eps_admissible(0.1, 3));
}

TEST_CASE("oblique projections") {
  const ProjectionPair p = projection(Subspace::span({e(0, 2)}), Subspace::span({e(1, 2)}));
  CHECK((p.matrix - Eigen::Vector2d(1, 0).asDiagonal().toDenseMatrix()).norm() < 1e-14);

  const ProjectionPair q = projection(Subspace::span({e(0, 2)}), Subspace(col({1, 1})));
  MatrixXd expected(2, 2);
  expected << 1, -1, 0, 0;
  CHECK((q.matrix - expected).norm() < 1e-12);
  CHECK((q.matrix * q.matrix - q.matrix).norm() <= 1e-8 * q.matrix.norm());

  CHECK_THROWS_AS(projection(Subspace::span({e(0, 2)}), Subspace::span({e(0, 2)})), ComplementarityError);
  CHECK_THROWS_AS(projection(Subspace::span({e(0, 3)}), Subspace::span({e(1, 3)})), ParameterError);
}

TEST_CASE("projection norms vary continuously") {
  // Y = span(e1), Z_eta = span(cos(t + eta), sin(t + eta)): |Pi| = 1/sin(angle).
  const double t = 0.7;
  const Subspace y = Subspace::span({e(0, 2)});
  const double base = operator_norm(projection(y, Subspace(col({std::cos(t), std::sin(t)}))).matrix, NormTag::l2);
  double previous = INFINITY;
  for (int k = 1; k <= 12; ++k) {
    const double eta = std::ldexp(1.0, -k);
    const Subspace z(col({std::cos(t + eta), std::sin(t + eta)}));
    const double change = std::abs(operator_norm(projection(y, z).matrix, NormTag::l2) - base);
    CHECK(change < 3.0 * eta);
    CHECK(change < previous);
    previous = change;
  }
}

TEST_CASE("operator norms") {
  CHECK(operator_norm(MatrixXd::Identity(3, 3), NormTag::l1) == doctest::Approx(1.0));
  CHECK(operator_norm(MatrixXd(Eigen::Vector2d(3, -5).asDiagonal()), NormTag::linf) == doctest::Approx(5.0));
  MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  for (NormTag n : {NormTag::l1, NormTag::l2, NormTag::linf}) CHECK(operator_norm(swap, n) == doctest::Approx(1.0));
}

TEST_CASE("good complements") {
  {
    const auto gc = good_complement({Subspace::whole(2), Subspace::span({e(1, 2)})});
    REQUIRE(gc.complements.size() == 1);
    CHECK(grassmann_distance(gc.complements[0], Subspace::span({e(0, 2)})) < 1e-12);
    CHECK(gc.nice);
  }
  {
    const auto gc = good_complement({Subspace::whole(2), Subspace::whole(2)});
    CHECK(gc.complements.empty());
  }
  {
    const auto gc =
        good_complement({Subspace::whole(3), Subspace::span({e(1, 3), e(2, 3)}), Subspace::span({e(2, 3)})});
    REQUIRE(gc.complements.size() == 2);
    CHECK(grassmann_distance(gc.complements[0], Subspace::span({e(0, 3)})) < 1e-12);
    CHECK(grassmann_distance(gc.complements[1], Subspace::span({e(1, 3)})) < 1e-12);
    for (double n : gc.complement_projection_norms) CHECK(n <= 1.0 / (1.0 - 1e-8) + 1e-12);
  }
  CHECK_THROWS_AS(good_complement({Subspace::span({e(0, 2)}), Subspace::span({e(1, 2)})}), FiltrationError);
}

TEST_CASE("good complements in polyhedral norms") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n;
  for (NormTag norm : {NormTag::l1, NormTag::linf}) {
    MatrixXd b(4, 3);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 3; ++j) b(i, j) = n(rng);
    const Subspace v2(b, norm), v3(MatrixXd(b.leftCols(1)), norm);
    const auto gc = good_complement({Subspace::whole(4, norm), v2, v3});
    REQUIRE(gc.complements.size() == 2);
    CHECK(gc.complements[0].dim() == 1);
    CHECK(gc.complements[1].dim() == 2);
    CHECK(grassmann_distance(direct_sum(gc.complements[1], v3), v2) < 1e-9);
    // The first step is far from V_2 alone, so Riesz gives distance 1.
    CHECK(gc.step_distances[0] > 1.0 - 1e-8);
    // Later steps are the best achievable: no sampled unit vector of V_2
    // beats the chosen one.
    const Subspace w = direct_sum(gc.complements[0], v3);
    double sampled = 0.0;
    for (int it = 0; it < 2000; ++it) {
      Eigen::VectorXd x = v2.basis() * Eigen::Vector3d(n(rng), n(rng), n(rng));
      x /= vector_norm(x, norm);
      sampled = std::max(sampled, distance_point_subspace(x, w));
    }
    CHECK(gc.step_distances[1] >= sampled - 1e-9);
    CHECK(gc.nice == (gc.step_distances[1] > 1.0 - 1e-8 && gc.step_distances[2] > 1.0 - 1e-8));
    for (double p : gc.complement_projection_norms) CHECK(std::isfinite(p));
  }

  // Birkhoff orthogonality is not symmetric in linf: U_1 = span(1,-1) is at
  // distance 1 from V_2 = span(1, 1/2), but not the other way round.
  const Subspace v2 = Subspace::span({Eigen::Vector2d(1, 0.5)}, NormTag::linf);
  const auto gc = good_complement({Subspace::whole(2, NormTag::linf), v2, Subspace::zero(2, NormTag::linf)});
  REQUIRE(gc.step_distances.size() == 2);
  CHECK(gc.step_distances[0] == doctest::Approx(1.0));
  CHECK(grassmann_distance(gc.complements[0], Subspace::span({Eigen::Vector2d(1, -1)}, NormTag::linf)) < 1e-12);
  CHECK(gc.step_distances[1] == doctest::Approx(0.75));
  CHECK_FALSE(gc.nice);
}

TEST_CASE("Grassmann property suite, reduced size") {
  for (const auto& p : testing::grassmann_suite(100, 11)) {
    INFO(p.name << " " << to_string(p.norm) << " worst margin " << p.worst_margin);
    CHECK(p.passed());
  }
}
