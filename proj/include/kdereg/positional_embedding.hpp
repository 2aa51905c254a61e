#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace kdereg {

/// Sinusoidal 2D positional embedding. The first half of the output encodes
/// x, the second half y, each as interleaved sin/cos at geometrically spaced
/// frequencies 1/D_i with D_i = base^(i / (d/4)).
struct EmbeddingConfig {
  int dimension = 128;
  double base = 10000.0;

  void validate() const {
    if (dimension < 4 || dimension % 4 != 0) {
      throw std::invalid_argument("embedding dimension must be >= 4 and divisible by 4");
    }
    if (!(base > 0)) throw std::invalid_argument("embedding base must be positive");
  }
};

inline std::vector<double> embed(double x, double y, const EmbeddingConfig& config) {
  config.validate();
  const int d = config.dimension;
  const int quarter = d / 4;
  std::vector<double> out(static_cast<std::size_t>(d));
  for (int i = 0; i < quarter; ++i) {
    const double divisor = std::pow(config.base, static_cast<double>(i) / quarter);
    out[static_cast<std::size_t>(2 * i)] = std::sin(x / divisor);
    out[static_cast<std::size_t>(2 * i + 1)] = std::cos(x / divisor);
    out[static_cast<std::size_t>(2 * i + d / 2)] = std::sin(y / divisor);
    out[static_cast<std::size_t>(2 * i + 1 + d / 2)] = std::cos(y / divisor);
  }
  return out;
}

}  // namespace kdereg
