#include "fmstdp/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fmstdp/actor.hpp"
#include "fmstdp/errors.hpp"

namespace fmstdp {

FourierEncoder::FourierEncoder(std::size_t order, std::vector<std::pair<double, double>> bounds, bool cross_terms)
    : order_(order), bounds_(std::move(bounds)), cross_terms_(cross_terms) {
  if (bounds_.empty()) throw ConfigError("FourierEncoder: state_dim must be positive");
  for (const auto& [lo, hi] : bounds_) {
    if (!(hi > lo)) throw ConfigError("FourierEncoder: every bound needs high > low");
  }
  const std::size_t d = bounds_.size();
  if (cross_terms_) {
    std::vector<int> c(d, 0);
    while (true) {
      coeffs_.push_back(c);
      // Increment the last component first so the first one is most significant.
      std::size_t pos = d;
      while (pos > 0) {
        --pos;
        if (static_cast<std::size_t>(c[pos]) < order_) {
          ++c[pos];
          break;
        }
        c[pos] = 0;
        if (pos == 0) return;
      }
    }
  }
  for (std::size_t dim = 0; dim < d; ++dim) {
    for (std::size_t m = 1; m <= order_; ++m) {
      std::vector<int> c(d, 0);
      c[dim] = static_cast<int>(m);
      coeffs_.push_back(std::move(c));
    }
  }
}

std::span<const int> FourierEncoder::coefficients(std::size_t k) const { return coeffs_.at(k); }

std::vector<double> FourierEncoder::normalize(std::span<const double> state) const {
  if (state.size() != bounds_.size()) {
    throw ConfigError("FourierEncoder: state has " + std::to_string(state.size()) + " components, expected " +
                      std::to_string(bounds_.size()));
  }
  std::vector<double> x(state.size());
  for (std::size_t d = 0; d < state.size(); ++d) {
    const auto [lo, hi] = bounds_[d];
    x[d] = (std::clamp(state[d], lo, hi) - lo) / (hi - lo);
  }
  return x;
}

std::vector<double> FourierEncoder::encode(std::span<const double> state) const {
  const auto x = normalize(state);
  std::vector<double> out(coeffs_.size());
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    double dot = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) dot += coeffs_[k][d] * x[d];
    out[k] = std::cos(std::numbers::pi * dot);
  }
  return out;
}

std::vector<std::pair<double, double>> cartpole_bounds() {
  return {{-2.4, 2.4}, {-3.0, 3.0}, {-0.2095, 0.2095}, {-3.5, 3.5}};
}

std::vector<std::pair<double, double>> lander_bounds() {
  return {{-1.5, 1.5}, {-1.5, 1.5}, {-5.0, 5.0}, {-5.0, 5.0},
          {-std::numbers::pi, std::numbers::pi}, {-5.0, 5.0}, {0.0, 1.0}, {0.0, 1.0}};
}

std::vector<double> encode_cartpole(const FourierEncoder& enc, std::span<const double> state) {
  auto f = enc.encode(state);
  for (auto& v : f) v = std::clamp((v + 1.0) / 2.0, 0.0, 1.0);
  return f;
}

std::vector<double> encode_cartpole(std::span<const double> state) {
  static const FourierEncoder enc(2, cartpole_bounds(), true);
  return encode_cartpole(enc, state);
}

std::vector<double> encode_lander_style(std::span<const double> state) {
  static const FourierEncoder enc(1, lander_bounds(), false);
  const auto o = enc.encode(state);
  std::vector<double> f(2 * o.size() + 1);
  for (std::size_t k = 0; k < o.size(); ++k) {
    f[k] = std::max(o[k], 0.0);
    f[o.size() + k] = std::max(-o[k], 0.0);
  }
  f.back() = 1.0;
  return f;
}

SpikeCoder::SpikeCoder(std::size_t neurons_per_feature) : neurons_per_feature_(neurons_per_feature) {
  if (neurons_per_feature_ < 1) throw ConfigError("SpikeCoder: neurons_per_feature must be at least 1");
}

void SpikeCoder::check_features(std::span<const double> features) {
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (!(features[i] >= 0.0 && features[i] <= 1.0)) {
      throw EncodingFault("spike coder: feature " + std::to_string(i) + " = " + std::to_string(features[i]) +
                          " outside [0,1]");
    }
  }
}

void SpikeCoder::spikes(std::span<const double> features, std::mt19937_64& rng, std::span<std::uint8_t> out) const {
  if (out.size() != output_dim(features.size())) throw ConfigError("spike coder: output buffer has wrong length");
  check_features(features);
  std::size_t n = 0;
  for (double f : features) {
    for (std::size_t r = 0; r < neurons_per_feature_; ++r) out[n++] = uniform01(rng) < f ? 1 : 0;
  }
}

std::vector<std::uint8_t> SpikeCoder::spikes(std::span<const double> features, std::mt19937_64& rng) const {
  std::vector<std::uint8_t> out(output_dim(features.size()));
  spikes(features, rng, out);
  return out;
}

}  // namespace fmstdp
