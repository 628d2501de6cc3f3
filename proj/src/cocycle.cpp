#include "oseledets/cocycle.hpp"

#include "oseledets/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace oseledets {

using Eigen::Index;
using Eigen::MatrixXd;

namespace {

constexpr double kRenormLow = 1e-100;
constexpr double kRenormHigh = 1e100;

void renormalize(ScaledMatrix& m) {
  const double n = m.matrix.cwiseAbs().maxCoeff();
  if (n == 0.0 || (n >= kRenormLow && n <= kRenormHigh)) return;
  m.matrix /= n;
  m.log_scale += std::log(n);
}

}  // namespace

CocycleGenerator::CocycleGenerator(Index dim, Evaluator f, std::string kind,
                                   std::shared_ptr<const std::vector<MatrixXd>> table)
    : dim_(dim), f_(std::move(f)), kind_(std::move(kind)), table_(std::move(table)) {}

CocycleGenerator CocycleGenerator::tabulated(std::vector<MatrixXd> table) {
  if (table.empty()) throw ParameterError("tabulated generator needs at least one matrix");
  const Index d = table.front().rows();
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i].rows() != d || table[i].cols() != d)
      throw ParameterError("generator table entry " + std::to_string(i) + " is not " + std::to_string(d) + "x" +
                           std::to_string(d));
  auto shared = std::make_shared<const std::vector<MatrixXd>>(std::move(table));
  const std::vector<MatrixXd>* raw = shared.get();
  Evaluator f = [raw](const BaseState& s) -> MatrixXd {
    if (s.symbol < 0 || static_cast<std::size_t>(s.symbol) >= raw->size())
      throw ParameterError("symbol " + std::to_string(s.symbol) + " has no generator table entry");
    return (*raw)[static_cast<std::size_t>(s.symbol)];
  };
  return CocycleGenerator(d, std::move(f), "tabulated", std::move(shared));
}

CocycleGenerator CocycleGenerator::constant(MatrixXd a) {
  if (a.rows() != a.cols() || a.rows() == 0) throw ParameterError("constant generator must be square");
  const Index d = a.rows();
  auto shared = std::make_shared<const std::vector<MatrixXd>>(std::vector<MatrixXd>{std::move(a)});
  const std::vector<MatrixXd>* raw = shared.get();
  Evaluator f = [raw](const BaseState&) -> MatrixXd { return raw->front(); };
  return CocycleGenerator(d, std::move(f), "constant", std::move(shared));
}

CocycleGenerator CocycleGenerator::callback(Index dim, Evaluator f, std::string kind) {
  if (dim <= 0) throw ParameterError("callback generator needs a positive dimension");
  if (!f) throw ParameterError("callback generator needs an evaluator");
  return CocycleGenerator(dim, std::move(f), std::move(kind), std::make_shared<const std::vector<MatrixXd>>());
}

MatrixXd CocycleGenerator::operator()(const BaseState& state) const {
  MatrixXd m = f_(state);
  if (m.rows() != dim_ || m.cols() != dim_) {
    std::ostringstream os;
    os << "generator returned a " << m.rows() << "x" << m.cols() << " matrix, expected " << dim_ << "x" << dim_;
    throw ParameterError(os.str());
  }
  return m;
}

double ScaledMatrix::log_norm(NormTag norm) const {
  const double n = operator_norm(matrix, norm);
  if (n == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(n) + log_scale;
}

ScaledMatrix forward_product_scaled(const CocycleGenerator& gen, const OrbitWindow& orbit, std::ptrdiff_t start,
                                    std::size_t n) {
  const auto len = static_cast<std::ptrdiff_t>(n);
  orbit.require(start, start + len - 1);
  ScaledMatrix acc{MatrixXd::Identity(gen.dim(), gen.dim()), 0.0};
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    acc.matrix = gen(orbit.state(start + i)) * acc.matrix;
    renormalize(acc);
  }
  return acc;
}

MatrixXd forward_product(const CocycleGenerator& gen, const OrbitWindow& orbit, std::ptrdiff_t start,
                         std::size_t n) {
  return forward_product_scaled(gen, orbit, start, n).value();
}

ScaledMatrix pullback_product_scaled(const CocycleGenerator& gen, const OrbitWindow& orbit, std::size_t n) {
  return forward_product_scaled(gen, orbit, -static_cast<std::ptrdiff_t>(n), n);
}

MatrixXd pullback_product(const CocycleGenerator& gen, const OrbitWindow& orbit, std::size_t n) {
  return pullback_product_scaled(gen, orbit, n).value();
}

FramingProjections framing_projections(const Framing& f) {
  const Subspace u_rest = direct_sum(f.u, f.u_minus);
  const Subspace v_rest = direct_sum(f.v_plus, f.u_minus);
  return {projection(f.v_plus, u_rest).matrix, projection(f.u, v_rest).matrix};
}

BlockDecomposition block_components(const CocycleGenerator& gen, const OrbitWindow& orbit, std::ptrdiff_t offset,
                                    const Framing& here, const Framing& next) {
  const MatrixXd l = gen(orbit.state(offset));
  const FramingProjections p = framing_projections(here);
  const FramingProjections q = framing_projections(next);
  BlockDecomposition b;
  b.l00 = q.onto_v * l * p.onto_v;
  b.l01 = q.onto_u * l * p.onto_v;
  b.l10 = q.onto_v * l * p.onto_u;
  b.l11 = q.onto_u * l * p.onto_u;
  const double nl = operator_norm(l, NormTag::l2);
  b.l01_relative = nl > 0.0 ? operator_norm(b.l01, NormTag::l2) / nl : 0.0;
  b.equivariant = b.l01_relative <= 1e-8;
  return b;
}

BlockDecomposition block_components(const CocycleGenerator& gen, const OrbitWindow& orbit, std::ptrdiff_t offset,
                                    const Subspace& v_plus, const Subspace& u, const Subspace& u_minus) {
  const Framing f{v_plus, u, u_minus};
  return block_components(gen, orbit, offset, f, f);
}

double l10_identity_residual(const CocycleGenerator& gen, const OrbitWindow& orbit, std::ptrdiff_t offset,
                             std::size_t n, const FramingField& framing) {
  if (n == 0) throw ParameterError("l10 identity needs n >= 1");
  const auto len = static_cast<std::ptrdiff_t>(n);
  orbit.require(offset, offset + len - 1);
  const Index d = gen.dim();

  std::vector<FramingProjections> proj;
  proj.reserve(n + 1);
  for (std::ptrdiff_t i = 0; i <= len; ++i) proj.push_back(framing_projections(framing(offset + i)));

  std::vector<MatrixXd> l00(n), l10(n), l11(n);
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    const MatrixXd l = gen(orbit.state(offset + i));
    const auto& p = proj[static_cast<std::size_t>(i)];
    const auto& q = proj[static_cast<std::size_t>(i + 1)];
    l00[static_cast<std::size_t>(i)] = q.onto_v * l * p.onto_v;
    l10[static_cast<std::size_t>(i)] = q.onto_v * l * p.onto_u;
    l11[static_cast<std::size_t>(i)] = q.onto_u * l * p.onto_u;
  }
  // Products of blocks over [a, a+m): newest on the left.
  auto block_power = [&](const std::vector<MatrixXd>& blocks, std::ptrdiff_t a, std::ptrdiff_t m) {
    MatrixXd acc = MatrixXd::Identity(d, d);
    if (m == 0) return acc;
    acc = blocks[static_cast<std::size_t>(a)];
    for (std::ptrdiff_t k = 1; k < m; ++k) acc = blocks[static_cast<std::size_t>(a + k)] * acc;
    return acc;
  };

  const MatrixXd full = forward_product(gen, orbit, offset, n);
  const MatrixXd lhs = proj.back().onto_v * full * proj.front().onto_u;
  MatrixXd rhs = MatrixXd::Zero(d, d);
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    // L00^(i) at sigma^{n-i}, L10 at sigma^{n-i-1}, L11^(n-i-1) at omega.
    const MatrixXd a = block_power(l00, len - i, i);
    const MatrixXd c = block_power(l11, 0, len - i - 1);
    rhs += a * l10[static_cast<std::size_t>(len - i - 1)] * c;
  }
  const double scale = std::max(operator_norm(full, NormTag::l2), 1e-300);
  return operator_norm(MatrixXd(lhs - rhs), NormTag::l2) / scale;
}

std::vector<double> cocycle_norm_series(const CocycleGenerator& gen, const OrbitWindow& orbit, std::size_t n_max,
                                        NormTag norm) {
  orbit.require(0, static_cast<std::ptrdiff_t>(n_max) - 1);
  std::vector<double> out;
  out.reserve(n_max);
  ScaledMatrix acc{MatrixXd::Identity(gen.dim(), gen.dim()), 0.0};
  for (std::size_t n = 1; n <= n_max; ++n) {
    acc.matrix = gen(orbit.state(static_cast<std::ptrdiff_t>(n) - 1)) * acc.matrix;
    renormalize(acc);
    out.push_back(acc.log_norm(norm) / static_cast<double>(n));
  }
  return out;
}

double log_plus_norm_average(const CocycleGenerator& gen, const OrbitWindow& orbit, std::size_t n, NormTag norm) {
  return birkhoff_average(
      orbit,
      [&](const BaseState& s) {
        const double v = operator_norm(gen(s), norm);
        return v > 1.0 ? std::log(v) : 0.0;
      },
      n);
}

}  // namespace oseledets
