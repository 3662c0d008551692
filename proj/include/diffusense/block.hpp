#pragma once

#include <Eigen/Core>

#include <stdexcept>

#include "diffusense/sh.hpp"

namespace diffusense {

/// A block of time-domain SH expansion signals. Rows are ACN channels,
/// columns are samples.
struct SHSignalBlock {
  int order = 0;
  Eigen::MatrixXd data;  // (order+1)^2 x samples

  Eigen::Index samples() const { return data.cols(); }
  Eigen::Index channels() const { return data.rows(); }
};

inline void validate(const SHSignalBlock& block) {
  if (block.order < 0) throw std::invalid_argument("SHSignalBlock: negative order");
  if (block.data.rows() != channel_count(block.order))
    throw std::invalid_argument("SHSignalBlock: row count does not match (order+1)^2");
  if (block.data.cols() < 1) throw std::invalid_argument("SHSignalBlock: no samples");
  if (!block.data.allFinite()) throw std::invalid_argument("SHSignalBlock: non-finite entries");
}

}  // namespace diffusense
