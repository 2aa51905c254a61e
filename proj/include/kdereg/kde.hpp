#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace kdereg {

/// Samples linearly binned onto a uniform grid. Grid mass equals the total
/// input weight.
struct BinnedData {
  std::vector<double> grid;
  std::vector<double> counts;
  bool degenerate = false;  // all effective samples coincide

  int size() const { return static_cast<int>(grid.size()); }
  double lo() const { return grid.front(); }
  double hi() const { return grid.back(); }
  double spacing() const { return (hi() - lo()) / static_cast<double>(size() - 1); }
  double total() const {
    double s = 0.0;
    for (double c : counts) s += c;
    return s;
  }
};

/// Density values over a uniform grid together with the bandwidth that
/// produced them.
struct DensityEstimate {
  std::vector<double> grid;
  std::vector<double> values;
  double bandwidth = 0.0;

  /// Linear interpolation; clamps to the edge values outside the grid.
  double at(double x) const {
    const int n = static_cast<int>(grid.size());
    const double lo = grid.front();
    const double step = (grid.back() - lo) / static_cast<double>(n - 1);
    const double pos = (x - lo) / step;
    if (pos <= 0.0) return values.front();
    if (pos >= static_cast<double>(n - 1)) return values.back();
    const int j = static_cast<int>(pos);
    const double frac = pos - j;
    return values[static_cast<std::size_t>(j)] * (1.0 - frac) +
           values[static_cast<std::size_t>(j) + 1] * frac;
  }
};

namespace detail {

inline bool is_power_of_two(int x) { return x > 0 && (x & (x - 1)) == 0; }

inline double weighted_mean(const std::vector<double>& x, const std::vector<double>& w) {
  double sw = 0.0, sx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
  }
  return sx / sw;
}

inline double weighted_stddev(const std::vector<double>& x, const std::vector<double>& w) {
  const double mu = weighted_mean(x, w);
  double sw = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    s2 += w[i] * (x[i] - mu) * (x[i] - mu);
  }
  return std::sqrt(s2 / sw);
}

/// Linear convolution of `signal` with a symmetric kernel given by
/// kernel_half[d] = k(|d|), evaluated with a zero-padded FFT of length
/// 2 * signal size. Exact up to FFT roundoff.
inline std::vector<double> symmetric_convolve(const std::vector<double>& signal,
                                              const std::vector<double>& kernel_half) {
  const int n = static_cast<int>(signal.size());
  const int padded = 2 * n;
  std::vector<double> sig(static_cast<std::size_t>(padded), 0.0);
  std::copy(signal.begin(), signal.end(), sig.begin());
  std::vector<double> ker(static_cast<std::size_t>(padded), 0.0);
  ker[0] = kernel_half[0];
  for (int d = 1; d < n; ++d) {
    ker[static_cast<std::size_t>(d)] = kernel_half[static_cast<std::size_t>(d)];
    ker[static_cast<std::size_t>(padded - d)] = kernel_half[static_cast<std::size_t>(d)];
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> sig_f, ker_f;
  fft.fwd(sig_f, sig);
  fft.fwd(ker_f, ker);
  for (int i = 0; i < padded; ++i) sig_f[static_cast<std::size_t>(i)] *= ker_f[static_cast<std::size_t>(i)];
  std::vector<double> full;
  fft.inv(full, sig_f);
  full.resize(static_cast<std::size_t>(n));
  return full;
}

}  // namespace detail

/// Bins weighted samples onto M uniform grid points spanning the samples
/// plus 3 weighted standard deviations of padding. Each sample's weight is
/// split linearly between its two bracketing grid points, so grid mass
/// equals the summed weights.
inline BinnedData linear_bin(const std::vector<double>& samples, const std::vector<double>& weights,
                             int grid_size) {
  if (grid_size < 16 || !detail::is_power_of_two(grid_size)) {
    throw std::invalid_argument("grid size must be a power of two, at least 16");
  }
  if (samples.size() < 2) throw std::invalid_argument("need at least two samples to bin");
  if (samples.size() != weights.size()) {
    throw std::invalid_argument("samples and weights must have equal length");
  }
  double weight_sum = 0.0;
  for (double w : weights) weight_sum += w;
  if (!(weight_sum > 0)) throw std::invalid_argument("weights must carry positive total mass");

  const auto [min_it, max_it] = std::minmax_element(samples.begin(), samples.end());
  const double sigma = detail::weighted_stddev(samples, weights);

  BinnedData out;
  out.grid.resize(static_cast<std::size_t>(grid_size));
  out.counts.assign(static_cast<std::size_t>(grid_size), 0.0);

  if (*min_it == *max_it || sigma == 0.0) {
    // all effective mass at one value: spike at the nearest grid point
    out.degenerate = true;
    const double center = detail::weighted_mean(samples, weights);
    const double lo = center - 0.5, step = 1.0 / (grid_size - 1);
    for (int j = 0; j < grid_size; ++j) out.grid[static_cast<std::size_t>(j)] = lo + j * step;
    double total = 0.0;
    for (double w : weights) total += w;
    out.counts[static_cast<std::size_t>(grid_size / 2)] = total;
    return out;
  }

  const double lo = *min_it - 3.0 * sigma;
  const double hi = *max_it + 3.0 * sigma;
  const double step = (hi - lo) / (grid_size - 1);
  for (int j = 0; j < grid_size; ++j) out.grid[static_cast<std::size_t>(j)] = lo + j * step;

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double pos = (samples[i] - lo) / step;
    int j = static_cast<int>(pos);
    if (j >= grid_size - 1) {
      out.counts[static_cast<std::size_t>(grid_size - 1)] += weights[i];
      continue;
    }
    const double frac = pos - j;
    out.counts[static_cast<std::size_t>(j)] += weights[i] * (1.0 - frac);
    out.counts[static_cast<std::size_t>(j) + 1] += weights[i] * frac;
  }
  return out;
}

/// Gaussian KDE over the bin grid, evaluated as an FFT convolution of the
/// bin counts with the kernel sampled at grid spacing. Normalized by the
/// total bin mass, so it matches the direct weighted sum when the weights
/// total the sample count and is invariant to rescaling all weights.
inline DensityEstimate fft_kde(const BinnedData& binned, double bandwidth, int sample_count) {
  if (!(bandwidth > 0)) throw std::invalid_argument("bandwidth must be positive");
  if (sample_count < 1) throw std::invalid_argument("sample count must be positive");
  const double total = binned.total();
  if (!(total > 0)) throw std::invalid_argument("binned data carries no mass");

  const int n = binned.size();
  const double step = binned.spacing();
  const double inv_norm = 1.0 / (total * bandwidth * std::sqrt(2.0 * M_PI));
  std::vector<double> kernel_half(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) {
    const double u = d * step / bandwidth;
    kernel_half[static_cast<std::size_t>(d)] = inv_norm * std::exp(-0.5 * u * u);
  }

  DensityEstimate out;
  out.grid = binned.grid;
  out.bandwidth = bandwidth;
  out.values = detail::symmetric_convolve(binned.counts, kernel_half);
  for (double& v : out.values) v = std::max(v, 0.0);  // clear FFT roundoff
  return out;
}

/// Trapezoidal integral of a density estimate over its grid.
inline double trapezoid_integral(const DensityEstimate& d) {
  const double step = (d.grid.back() - d.grid.front()) / static_cast<double>(d.grid.size() - 1);
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < d.values.size(); ++j) s += 0.5 * (d.values[j] + d.values[j + 1]);
  return s * step;
}

}  // namespace kdereg
