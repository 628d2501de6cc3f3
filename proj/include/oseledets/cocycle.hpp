#pragma once

// Matrix cocycles over an orbit window and their products.
//
// Products follow composition order: the newest factor sits on the left,
// L^(n)(omega) = L(sigma^{n-1} omega) ... L(omega).

#include "oseledets/base.hpp"
#include "oseledets/grassmann.hpp"
#include "oseledets/norms.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace oseledets {

class CocycleGenerator {
 public:
  using Evaluator = std::function<Eigen::MatrixXd(const BaseState&)>;

  /// symbol -> table[symbol]; all entries square of one size.
  static CocycleGenerator tabulated(std::vector<Eigen::MatrixXd> table);
  static CocycleGenerator constant(Eigen::MatrixXd a);
  /// `f` must be deterministic and return d x d matrices.
  static CocycleGenerator callback(Eigen::Index dim, Evaluator f, std::string kind = "callback");

  Eigen::Index dim() const noexcept { return dim_; }
  const std::string& kind() const noexcept { return kind_; }

  /// L(state). Throws ParameterError on a bad symbol or a wrongly sized result.
  Eigen::MatrixXd operator()(const BaseState& state) const;

  /// Tabulated entries (empty for callbacks).
  const std::vector<Eigen::MatrixXd>& table() const noexcept { return *table_; }

 private:
  CocycleGenerator(Eigen::Index dim, Evaluator f, std::string kind,
                   std::shared_ptr<const std::vector<Eigen::MatrixXd>> table);

  Eigen::Index dim_ = 0;
  Evaluator f_;
  std::string kind_;
  std::shared_ptr<const std::vector<Eigen::MatrixXd>> table_;
};

/// matrix * exp(log_scale), for products whose entries would overflow.
struct ScaledMatrix {
  Eigen::MatrixXd matrix;
  double log_scale = 0.0;

  Eigen::MatrixXd value() const { return matrix * std::exp(log_scale); }
  /// log of the operator norm; -infinity for the zero matrix.
  double log_norm(NormTag norm = NormTag::l2) const;
};

/// L(sigma^{start+n-1} omega) ... L(sigma^start omega), renormalized whenever
/// the running norm leaves [1e-100, 1e100]. n = 0 gives the identity.
ScaledMatrix forward_product_scaled(const CocycleGenerator& gen, const OrbitWindow& orbit,
                                    std::ptrdiff_t start, std::size_t n);

Eigen::MatrixXd forward_product(const CocycleGenerator& gen, const OrbitWindow& orbit, std::ptrdiff_t start,
                                std::size_t n);

/// L^(n)_{sigma^{-n} omega}, i.e. forward_product(gen, orbit, -n, n).
Eigen::MatrixXd pullback_product(const CocycleGenerator& gen, const OrbitWindow& orbit, std::size_t n);
ScaledMatrix pullback_product_scaled(const CocycleGenerator& gen, const OrbitWindow& orbit, std::size_t n);

/// Splitting data at one base point: X = U_minus (+) U (+) V_plus.
struct Framing {
  Subspace v_plus;
  Subspace u;
  Subspace u_minus;
};

using FramingField = std::function<Framing(std::ptrdiff_t offset)>;

struct FramingProjections {
  Eigen::MatrixXd onto_v;  ///< onto V_plus along U (+) U_minus
  Eigen::MatrixXd onto_u;  ///< onto U along V_plus (+) U_minus
};

/// Throws ComplementarityError when the three pieces are not complementary.
FramingProjections framing_projections(const Framing& framing);

struct BlockDecomposition {
  Eigen::MatrixXd l00;
  Eigen::MatrixXd l01;
  Eigen::MatrixXd l10;
  Eigen::MatrixXd l11;
  /// |L01| / |L|.
  double l01_relative = 0.0;
  /// l01_relative <= 1e-8, i.e. V_plus is carried into V_plus(sigma omega).
  bool equivariant = false;
};

/// Blocks at offset, using the framing at omega and at sigma omega:
/// L00 = P_V' L P_V, L01 = P_U' L P_V, L10 = P_V' L P_U, L11 = P_U' L P_U.
BlockDecomposition block_components(const CocycleGenerator& gen, const OrbitWindow& orbit, std::ptrdiff_t offset,
                                    const Framing& here, const Framing& next);

/// Same framing at omega and sigma omega.
BlockDecomposition block_components(const CocycleGenerator& gen, const OrbitWindow& orbit, std::ptrdiff_t offset,
                                    const Subspace& v_plus, const Subspace& u, const Subspace& u_minus);

/// Relative residual of
///   L10^(n)(omega) = sum_i L00^(i)(sigma^{n-i} omega) L10(sigma^{n-i-1} omega) L11^(n-i-1)(omega),
/// where the left side is P_V(sigma^n omega) L^(n) P_U(omega). Scaled by |L^(n)|.
double l10_identity_residual(const CocycleGenerator& gen, const OrbitWindow& orbit, std::ptrdiff_t offset,
                             std::size_t n, const FramingField& framing);

/// (1/n) log |L^(n)(omega)| for n = 1..n_max; -infinity once the product vanishes.
std::vector<double> cocycle_norm_series(const CocycleGenerator& gen, const OrbitWindow& orbit, std::size_t n_max,
                                        NormTag norm = NormTag::l2);

/// (1/n) sum_{i<n} log+ |L(sigma^i omega)|. Diagnostic only; it cannot
/// certify integrability.
double log_plus_norm_average(const CocycleGenerator& gen, const OrbitWindow& orbit, std::size_t n,
                             NormTag norm = NormTag::l2);

}  // namespace oseledets
