// Test-only reference computations, kept independent of the library's own
// numerical paths: spherical quadrature for SH orthonormality, power
// iteration with deflation for eigenvalues, cofactor expansion for small
// determinants.
#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracles {

struct QuadratureNode {
  double elevation;
  double azimuth;
  double weight;  // weights sum to 1 (mean over the sphere)
};

// Gauss-Legendre nodes in cos(colatitude) crossed with a uniform azimuth
// grid. Exact for spherical polynomials of degree < 2 * gl_points.
inline std::vector<QuadratureNode> sphere_quadrature(int gl_points, int azimuth_points) {
  std::vector<double> nodes(gl_points), weights(gl_points);
  for (int i = 0; i < gl_points; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (gl_points + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence for P_n(x) and P'_n(x)
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= gl_points; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = gl_points * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }

  std::vector<QuadratureNode> quad;
  quad.reserve(static_cast<std::size_t>(gl_points) * azimuth_points);
  for (int i = 0; i < gl_points; ++i) {
    for (int j = 0; j < azimuth_points; ++j) {
      const double az = 2.0 * std::numbers::pi * j / azimuth_points;
      // weights[i] sums to 2 over nodes; normalize the sphere mean to 1
      quad.push_back({std::asin(nodes[i]), az, weights[i] / (2.0 * azimuth_points)});
    }
  }
  return quad;
}

// Mean over the sphere of f(elevation, azimuth) * g(elevation, azimuth).
inline double sphere_mean(const std::function<double(double, double)>& f,
                          const std::vector<QuadratureNode>& quad) {
  double sum = 0.0;
  for (const auto& node : quad) sum += node.weight * f(node.elevation, node.azimuth);
  return sum;
}

// All eigenvalues of a symmetric matrix by shifted power iteration with
// deflation, sorted in decreasing order.
inline Eigen::VectorXd power_iteration_eigenvalues(const Eigen::MatrixXd& a,
                                                   double residual_tol = 1e-11,
                                                   int max_iterations = 500000) {
  const Eigen::Index n = a.rows();
  const double gershgorin = a.cwiseAbs().rowwise().sum().maxCoeff();
  const double shift = gershgorin + 0.01 * gershgorin + 1e-6;
  Eigen::MatrixXd b = a + shift * Eigen::MatrixXd::Identity(n, n);
  const double tol = residual_tol * (2.0 * shift + 1.0);

  std::mt19937 rng(12345);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd values(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
    v.normalize();
    double lambda = 0.0;
    bool converged = false;
    for (int it = 0; it < max_iterations; ++it) {
      const Eigen::VectorXd w = b * v;
      lambda = v.dot(w);
      const double res = (w - lambda * v).norm();
      if (w.norm() == 0.0) {  // v is exactly in the deflated null space
        lambda = 0.0;
        converged = true;
        break;
      }
      v = w.normalized();
      if (res <= tol) {
        converged = true;
        break;
      }
    }
    if (!converged) throw std::runtime_error("power iteration oracle failed to converge");
    values[k] = lambda - shift;
    b -= lambda * v * v.transpose();
  }
  std::sort(values.begin(), values.end(), std::greater<double>());
  return values;
}

// Determinant by cofactor expansion, n <= 4.
inline double cofactor_determinant(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (n == 1) return a(0, 0);
  double det = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::MatrixXd minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index cc = 0;
      for (Eigen::Index c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = a(r, c);
      }
    }
    det += (j % 2 == 0 ? 1.0 : -1.0) * a(0, j) * cofactor_determinant(minor);
  }
  return det;
}

// Deterministic rotation used to probe grid-orientation sensitivity.
inline Eigen::Matrix3d test_rotation(double angle) {
  return Eigen::AngleAxisd(angle, Eigen::Vector3d(1.0, 2.0, 3.0).normalized()).toRotationMatrix();
}

// Random symmetric matrix with entries of scale ~1 (seeded, reproducible).
inline Eigen::MatrixXd random_symmetric(Eigen::Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = gauss(rng);
  return (a + a.transpose()) / 2.0;
}

// Random positive semidefinite matrix (seeded, reproducible).
inline Eigen::MatrixXd random_psd(Eigen::Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = gauss(rng);
  return a * a.transpose() / double(n);
}

}  // namespace oracles
