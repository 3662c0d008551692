#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diffusense {

struct JacobiOptions {
  double tolerance = 1e-12;  // relative to the initial off-diagonal norm
  int max_sweeps = 100;
};

namespace detail {

template <typename Derived>
typename Derived::Scalar off_diagonal_norm(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  Scalar sum = Scalar(0);
  for (Eigen::Index p = 0; p < a.rows(); ++p)
    for (Eigen::Index q = p + 1; q < a.cols(); ++q) sum += a(p, q) * a(p, q);
  return std::sqrt(Scalar(2) * sum);
}

}  // namespace detail

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations, sorted
/// in decreasing order. Meant for the small matrices this library works with
/// (at most a few dozen rows). Throws on asymmetric input and when the sweep
/// budget is exhausted before the off-diagonal norm drops below
/// tolerance * initial norm.
template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> jacobi_eigenvalues(
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a, const JacobiOptions& opts = {}) {
  const Eigen::Index n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("jacobi_eigenvalues: matrix must be square");
  const Scalar scale = a.cwiseAbs().maxCoeff();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * std::max(scale, Scalar(1)))
    throw std::invalid_argument("jacobi_eigenvalues: matrix is not symmetric");
  a = ((a + a.transpose()) / Scalar(2)).eval();

  const Scalar initial_off = detail::off_diagonal_norm(a);
  const Scalar target = std::max(opts.tolerance * initial_off,
                                 std::numeric_limits<Scalar>::denorm_min());
  int sweep = 0;
  while (detail::off_diagonal_norm(a) > target) {
    if (++sweep > opts.max_sweeps)
      throw std::runtime_error("jacobi_eigenvalues: no convergence within sweep budget");
    // Rotations below the threshold cannot help convergence this sweep.
    const Scalar threshold = detail::off_diagonal_norm(a) / (Scalar(n) * Scalar(n));
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (std::abs(apq) <= threshold) continue;
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        Scalar t = Scalar(1) / (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        if (theta < Scalar(0)) t = -t;
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }

  Eigen::Vector<Scalar, Eigen::Dynamic> values = a.diagonal();
  std::sort(values.begin(), values.end(), std::greater<Scalar>());
  return values;
}

}  // namespace diffusense
