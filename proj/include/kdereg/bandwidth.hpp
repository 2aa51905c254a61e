#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "kdereg/kde.hpp"

namespace kdereg {

namespace detail {

/// DCT-II of x, scaled so a[0] = sum(x) and a[k] = 2 * sum_j x_j *
/// cos(pi*k*(2j+1)/(2n)). Computed with one complex FFT of the even/odd
/// reordering of x.
inline std::vector<double> dct2(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<std::complex<double>> reordered(static_cast<std::size_t>(n));
  for (int j = 0; 2 * j < n; ++j) reordered[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(2 * j)];
  for (int j = 0; 2 * j + 1 < n; ++j) {
    reordered[static_cast<std::size_t>(n - 1 - j)] = x[static_cast<std::size_t>(2 * j + 1)];
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, reordered);
  std::vector<double> out(static_cast<std::size_t>(n));
  out[0] = spectrum[0].real();
  for (int k = 1; k < n; ++k) {
    const double phase = -M_PI * k / (2.0 * n);
    const std::complex<double> w(2.0 * std::cos(phase), 2.0 * std::sin(phase));
    out[static_cast<std::size_t>(k)] = (w * spectrum[static_cast<std::size_t>(k)]).real();
  }
  return out;
}

/// Fixed-point function of the plug-in bandwidth recursion: returns
/// t - xi * gamma^[7](t) on data rescaled to the unit interval. The root in
/// t gives the squared bandwidth in units of the squared grid range.
inline double isj_fixed_point(double t, int sample_count, const std::vector<double>& k_squared,
                              const std::vector<double>& a2) {
  constexpr int stages = 7;
  const std::size_t n = a2.size();
  const double N = static_cast<double>(sample_count);

  // sum_k (k^2)^s a2_k exp(-k^2 pi^2 time), with exp(-k^2 pi^2 time)
  // carried incrementally as q^(k^2): one exp call per functional
  auto functional = [&](int s, double time) {
    const double q = std::exp(-M_PI * M_PI * time);
    const double q2 = q * q;
    double e = q;  // q^(k^2)
    double r = q;  // q^(2k-1)
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double kp = 1.0;
      for (int j = 0; j < s; ++j) kp *= k_squared[k];
      sum += kp * a2[k] * e;
      if (e < 1e-320) break;
      r *= q2;
      e *= r;
    }
    return 2.0 * std::pow(M_PI, 2.0 * s) * sum;
  };

  double f = functional(stages, t);
  for (int s = stages - 1; s >= 2; --s) {
    double odd_factorial = 1.0;
    for (int i = 3; i <= 2 * s - 1; i += 2) odd_factorial *= i;
    const double k0 = odd_factorial / std::sqrt(2.0 * M_PI);
    const double c = (1.0 + std::pow(0.5, s + 0.5)) / 3.0;
    const double time = std::pow(2.0 * c * k0 / (N * f), 2.0 / (3.0 + 2.0 * s));
    f = functional(s, time);
  }
  return t - std::pow(2.0 * N * std::sqrt(M_PI) * f, -0.4);
}

}  // namespace detail

/// Silverman's rule of thumb evaluated on binned data.
inline double silverman_bandwidth(const BinnedData& binned, int sample_count) {
  const double sigma = detail::weighted_stddev(binned.grid, binned.counts);
  return 1.06 * sigma * std::pow(static_cast<double>(sample_count), -0.2);
}

struct BandwidthResult {
  double bandwidth = 0.0;
  bool silverman_fallback = false;
};

/// Improved Sheather-Jones plug-in bandwidth: solves the 7-stage fixed-point
/// equation over the cosine transform of the normalized bin counts. Falls
/// back to Silverman's rule when no sign change can be bracketed.
inline BandwidthResult isj_bandwidth(const BinnedData& binned, int sample_count) {
  if (binned.degenerate) throw std::invalid_argument("degenerate (single-valued) sample set");
  if (sample_count < 10) throw std::invalid_argument("too few samples for bandwidth selection");
  const double total = binned.total();
  if (!(total > 0)) throw std::invalid_argument("binned data carries no mass");

  const int n = binned.size();
  std::vector<double> p(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) p[static_cast<std::size_t>(j)] = binned.counts[static_cast<std::size_t>(j)] / total;
  const std::vector<double> a = detail::dct2(p);

  std::vector<double> k_squared(static_cast<std::size_t>(n - 1));
  std::vector<double> a2(static_cast<std::size_t>(n - 1));
  for (int k = 1; k < n; ++k) {
    k_squared[static_cast<std::size_t>(k - 1)] = static_cast<double>(k) * static_cast<double>(k);
    const double half = a[static_cast<std::size_t>(k)] / 2.0;
    a2[static_cast<std::size_t>(k - 1)] = half * half;
  }

  auto f = [&](double t) { return detail::isj_fixed_point(t, sample_count, k_squared, a2); };

  // expanding bracket, mirroring the reference root search
  const double n_eff = std::clamp(static_cast<double>(sample_count), 50.0, 1050.0);
  double hi = 1e-12 + 0.01 * (n_eff - 50.0) / 1000.0;
  const double f_lo_init = f(0.0);
  double f_hi = f(hi);
  bool bracketed = std::isfinite(f_lo_init) && std::isfinite(f_hi) && f_lo_init * f_hi < 0;
  while (!bracketed && hi < 0.1) {
    hi = std::min(hi * 2.0, 0.1);
    f_hi = f(hi);
    bracketed = std::isfinite(f_lo_init) && std::isfinite(f_hi) && f_lo_init * f_hi < 0;
  }
  if (!bracketed) {
    return {silverman_bandwidth(binned, sample_count), true};
  }

  double lo = 0.0, f_lo = f_lo_init;
  for (int iter = 0; iter < 128 && hi - lo > 1e-15 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (!std::isfinite(f_mid)) break;
    if (f_lo * f_mid <= 0) {
      hi = mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }
  const double t_star = 0.5 * (lo + hi);
  const double range = binned.hi() - binned.lo();
  const double bandwidth = std::sqrt(t_star) * range;
  if (!(bandwidth > 0) || !std::isfinite(bandwidth)) {
    return {silverman_bandwidth(binned, sample_count), true};
  }
  return {bandwidth, false};
}

}  // namespace kdereg
