#pragma once

#include <Eigen/Core>

#include <string>

#include "diffusense/block.hpp"
#include "diffusense/jacobi.hpp"

namespace diffusense {

/// Symmetric (L+1)^2 x (L+1)^2 covariance of SH signals in ACN order. The
/// constructor enforces the size and symmetry invariants; positive
/// semidefiniteness is only guaranteed for matrices built by this library.
class CovarianceMatrix {
 public:
  CovarianceMatrix(int order, Eigen::MatrixXd data);

  int order() const { return order_; }
  Eigen::Index dim() const { return data_.rows(); }
  const Eigen::MatrixXd& data() const { return data_; }

 private:
  int order_;
  Eigen::MatrixXd data_;
};

/// Eigenvalues sorted in decreasing order.
struct EigenSpectrum {
  Eigen::VectorXd values;
};

/// Time-average covariance (1/T) B B^T. The signal model is zero-mean, so no
/// mean subtraction is applied.
CovarianceMatrix estimate_covariance(const SHSignalBlock& block);

EigenSpectrum eigenvalues(const CovarianceMatrix& cov, const JacobiOptions& opts = {});

/// Leading (l+1)^2 principal submatrix: exactly the covariance of the
/// order-l SH signals thanks to ACN ordering.
CovarianceMatrix truncate(const CovarianceMatrix& cov, int order);

/// Normalized energy mismatch between the covariance pattern and the identity
/// pattern of a perfectly diffuse field:
///   xi = ||C / ||C||_2 - I||_F^2 / (L+1)^2,  ||C||_2 = largest eigenvalue.
double mismatch_xi(const CovarianceMatrix& cov);

/// Row-major CSV with a header row of ACN channel labels.
std::string covariance_to_csv(const CovarianceMatrix& cov);

}  // namespace diffusense
