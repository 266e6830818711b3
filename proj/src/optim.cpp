#include "fmstdp/optim.hpp"

#include <cmath>
#include <string>

#include "fmstdp/errors.hpp"

namespace fmstdp {

void apply_plain(Matrix& w, const Matrix& delta_w) {
  if (!w.same_shape(delta_w)) throw ConfigError("apply_plain: shape mismatch");
  bool finite = true;
  for (std::size_t k = 0; k < w.data.size(); ++k) {
    w.data[k] += delta_w.data[k];
    finite &= std::isfinite(w.data[k]);
  }
  if (!finite) {
    for (std::size_t k = 0; k < w.data.size(); ++k) {
      if (!std::isfinite(w.data[k])) {
        throw SimulationFault("apply_plain: non-finite weight at (" + std::to_string(k / w.cols) + ", " +
                              std::to_string(k % w.cols) + ")");
      }
    }
  }
}

AdamState::AdamState(std::size_t rows, std::size_t cols, double lr_, double beta1_, double beta2_, double epsilon_)
    : m(rows, cols), v(rows, cols), lr(lr_), beta1(beta1_), beta2(beta2_), epsilon(epsilon_) {}

void apply_adam(AdamState& st, Matrix& w, const Matrix& grad_estimate) {
  if (!w.same_shape(grad_estimate)) throw ConfigError("apply_adam: shape mismatch");
  if (!st.m.same_shape(w)) {
    st.m = Matrix(w.rows, w.cols);
    st.v = Matrix(w.rows, w.cols);
  }
  ++st.t;
  const double t = static_cast<double>(st.t);
  const double c1 = 1.0 - std::pow(st.beta1, t);
  const double c2 = 1.0 - std::pow(st.beta2, t);
  for (std::size_t k = 0; k < w.data.size(); ++k) {
    const double g = grad_estimate.data[k];
    st.m.data[k] = st.beta1 * st.m.data[k] + (1.0 - st.beta1) * g;
    st.v.data[k] = st.beta2 * st.v.data[k] + (1.0 - st.beta2) * g * g;
    const double m_hat = c1 > 0.0 ? st.m.data[k] / c1 : st.m.data[k];
    const double v_hat = c2 > 0.0 ? st.v.data[k] / c2 : st.v.data[k];
    w.data[k] += st.lr * m_hat / (std::sqrt(v_hat) + st.epsilon);
    if (!std::isfinite(w.data[k])) {
      throw SimulationFault("apply_adam: non-finite weight at (" + std::to_string(k / w.cols) + ", " +
                            std::to_string(k % w.cols) + ")");
    }
  }
}

BatchAccumulator::BatchAccumulator(std::size_t rows, std::size_t cols, std::size_t batch)
    : pending(rows, cols), batch_size(batch) {
  if (batch_size < 1) throw ConfigError("batch size must be at least 1");
}

std::optional<Matrix> batch_commit(BatchAccumulator& acc, const Matrix& episode_update) {
  if (!acc.pending.same_shape(episode_update)) {
    if (acc.episodes_accumulated != 0) throw ConfigError("batch_commit: shape mismatch");
    acc.pending = Matrix(episode_update.rows, episode_update.cols);
  }
  for (std::size_t k = 0; k < episode_update.data.size(); ++k) acc.pending.data[k] += episode_update.data[k];
  ++acc.episodes_accumulated;
  if (acc.episodes_accumulated < acc.batch_size) return std::nullopt;

  Matrix out = acc.pending;
  const double inv = 1.0 / static_cast<double>(acc.batch_size);
  for (auto& x : out.data) x *= inv;
  acc.pending.fill(0.0);
  acc.episodes_accumulated = 0;
  return out;
}

}  // namespace fmstdp
