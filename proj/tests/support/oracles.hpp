#pragma once

// Reference computations for tests. Deliberately naive: direct sums in long
// double, no transforms, nothing shared with the library under test.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string_view>
#include <vector>

namespace oracle {

using Rows = std::vector<std::vector<double>>;
constexpr long double kPi = std::numbers::pi_v<long double>;

/// z[n] = Σ_m y[m]·x[m−n], n ∈ [0, N+M−2].
inline std::vector<double> correlation(const std::vector<double>& y, const std::vector<double>& x) {
  const std::size_t m = y.size();
  const std::size_t n = x.size();
  std::vector<double> z(n + m - 1, 0.0);
  for (std::size_t lag = 0; lag < z.size(); ++lag) {
    long double acc = 0;
    for (std::size_t k = lag; k < m && k - lag < n; ++k) acc += static_cast<long double>(y[k]) * x[k - lag];
    z[lag] = static_cast<double>(acc);
  }
  return z;
}

inline std::vector<double> convolution(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    long double acc = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (i >= j && i - j < a.size()) acc += static_cast<long double>(a[i - j]) * b[j];
    }
    out[i] = static_cast<double>(acc);
  }
  return out;
}

/// |H(e^{jω})| of an FIR filter by direct evaluation.
inline double fir_magnitude(const std::vector<double>& taps, double freq, double fs) {
  long double re = 0;
  long double im = 0;
  const long double w = 2 * kPi * freq / fs;
  for (std::size_t n = 0; n < taps.size(); ++n) {
    re += taps[n] * std::cos(w * n);
    im -= taps[n] * std::sin(w * n);
  }
  return static_cast<double>(std::sqrt(re * re + im * im));
}

/// Time-domain delay-and-sum beam power.
///
/// Each row is delayed by its steering delay through the band-limited
/// periodic kernel h(t) = (2/L)·Σ_{k∈band} cos(2πkt/L), the delayed rows are
/// averaged, and the energy of the result is converted to the integrated
/// power spectral density Δf·(L/2)·Σ b².
inline double delay_and_sum_power(const Rows& rows, const std::vector<double>& delays_s, double fs,
                                  std::size_t transform_length, double f1, double f2) {
  const std::size_t L = transform_length;
  const long double df = fs / static_cast<long double>(L);
  std::vector<std::size_t> bins;
  for (std::size_t k = 1; k < L / 2; ++k) {
    const long double f = k * df;
    if (f >= f1 && f <= f2) bins.push_back(k);
  }
  auto kernel = [&](long double t) {
    long double acc = 0;
    for (auto k : bins) acc += std::cos(2 * kPi * k * t / L);
    return 2 * acc / L;
  };
  const std::size_t a_count = rows.size();
  // h depends on n − m only; tabulate it per element over −(L−1)..(N−1)
  std::vector<std::vector<long double>> table(a_count);
  for (std::size_t a = 0; a < a_count; ++a) {
    const long double shift = delays_s[a] * fs;
    const long n = static_cast<long>(rows[a].size());
    for (long d = -static_cast<long>(L) + 1; d < n; ++d) table[a].push_back(kernel(d + shift));
  }
  long double energy = 0;
  for (std::size_t m = 0; m < L; ++m) {
    long double b = 0;
    for (std::size_t a = 0; a < a_count; ++a) {
      for (std::size_t n = 0; n < rows[a].size(); ++n) b += rows[a][n] * table[a][n + L - 1 - m];
    }
    b /= a_count;
    energy += b * b;
  }
  return static_cast<double>(df * (L / 2.0L) * energy);
}

/// Plane-wave delays Δτ_a(θ) = (x_a cosθ + y_a sinθ)/c from first principles.
inline std::vector<double> plane_delays(double radius, std::size_t count, double theta_deg, double c) {
  std::vector<double> d;
  const long double th = theta_deg * kPi / 180;
  for (std::size_t a = 1; a <= count; ++a) {
    const long double phi = 2 * kPi * a / count;
    d.push_back(static_cast<double>(radius * (std::cos(phi) * std::cos(th) + std::sin(phi) * std::sin(th)) / c));
  }
  return d;
}

/// Real signal `x` delayed by a fractional number of samples through an
/// explicit DFT (periodic with period `length`).
inline std::vector<double> dft_delay(const std::vector<double>& x, double delay_samples, std::size_t length) {
  const std::size_t L = length;
  std::vector<long double> re(L / 2 + 1, 0), im(L / 2 + 1, 0);
  for (std::size_t k = 0; k <= L / 2; ++k) {
    for (std::size_t n = 0; n < x.size(); ++n) {
      const long double w = 2 * kPi * k * n / L;
      re[k] += x[n] * std::cos(w);
      im[k] -= x[n] * std::sin(w);
    }
  }
  std::vector<double> out(L, 0.0);
  for (std::size_t n = 0; n < L; ++n) {
    long double acc = re[0];
    for (std::size_t k = 1; k < L / 2; ++k) {
      const long double w = 2 * kPi * k * (n - delay_samples) / L;
      acc += 2 * (re[k] * std::cos(w) - im[k] * std::sin(w));
    }
    out[n] = static_cast<double>(acc / L);
  }
  return out;
}

inline std::uint8_t xor_checksum(std::string_view body) {
  std::uint8_t x = 0;
  for (unsigned char c : body) x = static_cast<std::uint8_t>(x ^ c);
  return x;
}

/// Smallest t ≥ now at which local = t + o0 + d·t is a multiple of P, by
/// bisection on the monotone local clock.
inline double next_edge_bisection(double o0, double d, double P, double now) {
  const auto local = [&](long double t) { return t + o0 + d * t; };
  const long double k = std::ceil(local(now) / P - 1e-15L);
  const long double target = k * P;
  long double lo = now - 2 * P;
  long double hi = now + 2 * P;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    (local(mid) < target ? lo : hi) = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

inline std::vector<double> gaussian(std::size_t n, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

/// Leroy–Robinson–Goldsmith (2008) values evaluated offline for regression.
inline constexpr double kNpl_20_0_0_45 = 1482.42;
inline constexpr double kNplDcDt_20_35_10_45 = 2.76742;
inline constexpr double kNpl_10_35_1000_60 = 1506.2062;

/// Independent XOR of "R2UBL,0.000000000,0.000000,0.00,0.00,0.00,0,0.0,ok".
inline constexpr std::uint8_t kZeroFixChecksum = 0x0F;

}  // namespace oracle
