#pragma once

#include <cstdint>
#include <optional>

#include "fmstdp/matrix.hpp"

namespace fmstdp {

// w <- w + delta_w. Throws SimulationFault if any result is not finite.
void apply_plain(Matrix& w, const Matrix& delta_w);

// Adam applied as gradient ascent on the supplied direction.
struct AdamState {
  Matrix m;
  Matrix v;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t t = 0;

  AdamState() = default;
  AdamState(std::size_t rows, std::size_t cols, double lr, double beta1, double beta2, double epsilon = 1e-8);
};

// w <- w + lr * m_hat / (sqrt(v_hat) + eps), with bias-corrected moments.
void apply_adam(AdamState& st, Matrix& w, const Matrix& grad_estimate);

// Sums one update per episode and releases their mean every batch_size episodes.
struct BatchAccumulator {
  Matrix pending;
  std::size_t episodes_accumulated = 0;
  std::size_t batch_size = 1;

  BatchAccumulator() = default;
  BatchAccumulator(std::size_t rows, std::size_t cols, std::size_t batch_size);
};

std::optional<Matrix> batch_commit(BatchAccumulator& acc, const Matrix& episode_update);

}  // namespace fmstdp
