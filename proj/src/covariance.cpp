#include "diffusense/covariance.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace diffusense {

CovarianceMatrix::CovarianceMatrix(int order, Eigen::MatrixXd data)
    : order_(order), data_(std::move(data)) {
  if (order_ < 0) throw std::invalid_argument("CovarianceMatrix: negative order");
  if (data_.rows() != data_.cols() || data_.rows() != channel_count(order_))
    throw std::invalid_argument("CovarianceMatrix: size does not match (order+1)^2");
  const double scale = data_.cwiseAbs().maxCoeff();
  if ((data_ - data_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
    throw std::invalid_argument("CovarianceMatrix: matrix is not symmetric");
}

CovarianceMatrix estimate_covariance(const SHSignalBlock& block) {
  validate(block);
  const Eigen::MatrixXd outer = block.data * block.data.transpose() / double(block.samples());
  return {block.order, (outer + outer.transpose()) / 2.0};
}

EigenSpectrum eigenvalues(const CovarianceMatrix& cov, const JacobiOptions& opts) {
  return {jacobi_eigenvalues<double>(cov.data(), opts)};
}

CovarianceMatrix truncate(const CovarianceMatrix& cov, int order) {
  if (order < 0 || order > cov.order())
    throw std::invalid_argument("truncate: order must be within [0, source order]");
  const Eigen::Index dim = channel_count(order);
  return {order, cov.data().topLeftCorner(dim, dim)};
}

double mismatch_xi(const CovarianceMatrix& cov) {
  if (cov.data().cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("mismatch_xi: zero matrix");
  const double spectral_norm = jacobi_eigenvalues<double>(cov.data())(0);
  if (spectral_norm <= 0.0)
    throw std::invalid_argument("mismatch_xi: matrix has no positive eigenvalue");
  const Eigen::MatrixXd diff =
      cov.data() / spectral_norm - Eigen::MatrixXd::Identity(cov.dim(), cov.dim());
  return diff.squaredNorm() / double(cov.dim());
}

std::string covariance_to_csv(const CovarianceMatrix& cov) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(17);
  for (Eigen::Index j = 0; j < cov.dim(); ++j) {
    const int acn = static_cast<int>(j);
    out << (j ? "," : "") << "Y" << acn_order(acn) << "_" << acn_degree(acn);
  }
  out << "\n";
  for (Eigen::Index i = 0; i < cov.dim(); ++i) {
    for (Eigen::Index j = 0; j < cov.dim(); ++j) out << (j ? "," : "") << cov.data()(i, j);
    out << "\n";
  }
  return out.str();
}

}  // namespace diffusense
