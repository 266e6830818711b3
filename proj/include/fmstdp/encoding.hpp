#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace fmstdp {

// Cosine Fourier basis over a box-normalized state. Each state component is
// clipped to its bounds and mapped to [0,1] before the basis is evaluated.
//
// With cross terms, coefficient vectors c range over {0..order}^state_dim in
// lexicographic order (first component most significant), giving
// (order+1)^state_dim outputs; c = 0 is the first entry. Without cross terms,
// outputs are c = m*e_d for d = 0..state_dim-1, m = 1..order (dimension-major).
class FourierEncoder {
 public:
  FourierEncoder(std::size_t order, std::vector<std::pair<double, double>> bounds, bool cross_terms);

  std::size_t order() const { return order_; }
  std::size_t state_dim() const { return bounds_.size(); }
  bool cross_terms() const { return cross_terms_; }
  std::size_t output_dim() const { return coeffs_.size(); }
  // Coefficient vector of output k.
  std::span<const int> coefficients(std::size_t k) const;

  // Normalized state in [0,1]^d.
  std::vector<double> normalize(std::span<const double> state) const;
  // Basis outputs cos(pi * c . x~), each in [-1, 1].
  std::vector<double> encode(std::span<const double> state) const;

 private:
  std::size_t order_;
  std::vector<std::pair<double, double>> bounds_;
  bool cross_terms_;
  std::vector<std::vector<int>> coeffs_;
};

// Clip bounds for (x, x_dot, theta, theta_dot).
std::vector<std::pair<double, double>> cartpole_bounds();
// Clip bounds for the 8-dim lander observation.
std::vector<std::pair<double, double>> lander_bounds();

// Order-2 full basis on a cart-pole state, rescaled to features (o+1)/2. 81 entries.
std::vector<double> encode_cartpole(std::span<const double> state);
std::vector<double> encode_cartpole(const FourierEncoder& enc, std::span<const double> state);

// Order-1 basis without cross terms, then ReLU([o, -o, 1]). 17 entries.
std::vector<double> encode_lander_style(std::span<const double> state);

// Bernoulli rate coding: each input neuron fires in a 1 ms step with
// probability equal to its feature. Neurons of one feature are contiguous.
class SpikeCoder {
 public:
  explicit SpikeCoder(std::size_t neurons_per_feature = 1);

  std::size_t neurons_per_feature() const { return neurons_per_feature_; }
  std::size_t output_dim(std::size_t features) const { return features * neurons_per_feature_; }

  // Throws EncodingFault if a feature lies outside [0,1].
  static void check_features(std::span<const double> features);

  void spikes(std::span<const double> features, std::mt19937_64& rng, std::span<std::uint8_t> out) const;
  std::vector<std::uint8_t> spikes(std::span<const double> features, std::mt19937_64& rng) const;

 private:
  std::size_t neurons_per_feature_;
};

}  // namespace fmstdp
