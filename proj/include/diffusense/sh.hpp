#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>

#include "diffusense/direction.hpp"

namespace diffusense {

/// Ambisonic Channel Number of the (l, m) harmonic.
constexpr int acn_index(int l, int m) noexcept { return l * l + l + m; }

constexpr int acn_order(int acn) noexcept {
  int l = 0;
  while ((l + 1) * (l + 1) <= acn) ++l;
  return l;
}

constexpr int acn_degree(int acn) noexcept {
  const int l = acn_order(acn);
  return acn - l * l - l;
}

constexpr int channel_count(int order) noexcept { return (order + 1) * (order + 1); }

namespace detail {

// Fully-normalized associated Legendre recurrence, A_l^m = K_l^m * P_l^m with
// K_l^m = sqrt((2l+1)(l-m)!/(l+m)!) and no Condon-Shortley phase. Stable for
// high orders because the normalization is folded into the recurrence itself.
template <typename Scalar>
struct LegendreChain {
  // x = cos(colatitude) = sin(elevation), y = sin(colatitude) >= 0
  Scalar x, y;

  Scalar seed(int m) const {
    Scalar amm = Scalar(1);
    for (int k = 1; k <= m; ++k) amm *= y * std::sqrt(Scalar(2 * k + 1) / Scalar(2 * k));
    return amm;
  }

  Scalar step_first(int m, Scalar amm) const { return x * std::sqrt(Scalar(2 * m + 3)) * amm; }

  Scalar step(int l, int m, Scalar prev, Scalar prev2) const {
    const Scalar a = std::sqrt(Scalar(4 * l * l - 1) / Scalar(l * l - m * m));
    const Scalar b =
        std::sqrt(Scalar((l - 1) * (l - 1) - m * m) / Scalar(4 * (l - 1) * (l - 1) - 1));
    return a * (x * prev - b * prev2);
  }
};

template <typename Scalar>
Scalar sector_factor(int m, Scalar azimuth) {
  if (m == 0) return Scalar(1);
  const Scalar sqrt2 = std::sqrt(Scalar(2));
  return m > 0 ? sqrt2 * std::cos(Scalar(m) * azimuth) : sqrt2 * std::sin(Scalar(-m) * azimuth);
}

}  // namespace detail

/// Real fully-normalized (N3D) spherical harmonic Y_l^m, ambisonics convention
/// (no Condon-Shortley phase). Satisfies sum_m Y_l^m(dir)^2 = 2l+1.
template <typename Scalar>
Scalar eval_sh(int l, int m, Scalar azimuth, Scalar elevation) {
  if (l < 0 || std::abs(m) > l)
    throw std::invalid_argument("eval_sh: require 0 <= |m| <= l");
  const int ma = std::abs(m);
  const detail::LegendreChain<Scalar> chain{std::sin(elevation), std::cos(elevation)};
  Scalar a = chain.seed(ma);
  if (l > ma) {
    Scalar prev2 = a;
    a = chain.step_first(ma, a);
    for (int k = ma + 2; k <= l; ++k) {
      const Scalar next = chain.step(k, ma, a, prev2);
      prev2 = a;
      a = next;
    }
  }
  return a * detail::sector_factor(m, azimuth);
}

inline double eval_sh(int l, int m, const Direction& dir) {
  return eval_sh<double>(l, m, dir.azimuth, dir.elevation);
}

/// All harmonics up to `order` in ACN order, entry l*l+l+m = Y_l^m(dir).
template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> sh_vector(int order, Scalar azimuth, Scalar elevation) {
  if (order < 0) throw std::invalid_argument("sh_vector: order must be non-negative");
  Eigen::Vector<Scalar, Eigen::Dynamic> y(channel_count(order));
  const detail::LegendreChain<Scalar> chain{std::sin(elevation), std::cos(elevation)};
  for (int m = 0; m <= order; ++m) {
    const Scalar cos_f = detail::sector_factor(m, azimuth);
    const Scalar sin_f = m == 0 ? Scalar(0) : detail::sector_factor(-m, azimuth);
    Scalar prev2 = Scalar(0);
    Scalar a = chain.seed(m);
    for (int l = m; l <= order; ++l) {
      if (l > m) {
        const Scalar next = l == m + 1 ? chain.step_first(m, a) : chain.step(l, m, a, prev2);
        prev2 = a;
        a = next;
      }
      y[acn_index(l, m)] = a * cos_f;
      if (m > 0) y[acn_index(l, -m)] = a * sin_f;
    }
  }
  return y;
}

inline Eigen::VectorXd sh_vector(int order, const Direction& dir) {
  return sh_vector<double>(order, dir.azimuth, dir.elevation);
}

/// Rows are directions, columns are ACN channels.
inline Eigen::MatrixXd sh_basis_matrix(int order, const DirectionSet& set) {
  Eigen::MatrixXd basis(static_cast<Eigen::Index>(set.size()), channel_count(order));
  for (Eigen::Index n = 0; n < basis.rows(); ++n)
    basis.row(n) = sh_vector(order, set.directions[static_cast<std::size_t>(n)]).transpose();
  return basis;
}

}  // namespace diffusense
