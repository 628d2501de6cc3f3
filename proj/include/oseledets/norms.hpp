#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>

namespace oseledets {

/// The ambient norm on R^d.
enum class NormTag { l1, l2, linf };

std::string_view to_string(NormTag tag) noexcept;
/// Throws ParameterError for unknown names.
NormTag norm_from_string(std::string_view name);

template <typename Derived>
typename Derived::RealScalar vector_norm(const Eigen::MatrixBase<Derived>& v, NormTag tag) {
  switch (tag) {
    case NormTag::l1:
      return v.template lpNorm<1>();
    case NormTag::linf:
      return v.size() == 0 ? typename Derived::RealScalar(0) : v.template lpNorm<Eigen::Infinity>();
    case NormTag::l2:
    default:
      return v.norm();
  }
}

/// Induced operator norm: column sums for l1, row sums for linf, largest
/// singular value for l2.
template <typename Derived>
typename Derived::RealScalar operator_norm(const Eigen::MatrixBase<Derived>& m, NormTag tag) {
  using Real = typename Derived::RealScalar;
  if (m.size() == 0) return Real(0);
  switch (tag) {
    case NormTag::l1:
      return m.cwiseAbs().colwise().sum().maxCoeff();
    case NormTag::linf:
      return m.cwiseAbs().rowwise().sum().maxCoeff();
    case NormTag::l2:
    default: {
      using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
      Eigen::BDCSVD<Plain> svd(Plain(m.derived()));
      return svd.singularValues()(0);
    }
  }
}

}  // namespace oseledets
