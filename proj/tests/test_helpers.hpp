#pragma once

// Test-side oracles, kept independent of the library's internal signal paths.

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace testutil {

/// Naive O(n^2) DFT. Slow but unmistakably correct.
inline std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k * m) / static_cast<double>(n);
      acc += x[m] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

/// Recursive radix-2 FFT, written independently of src/detail/fft.cpp.
inline void fft_rec(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  std::vector<std::complex<double>> even(n / 2);
  std::vector<std::complex<double>> odd(n / 2);
  for (std::size_t i = 0; i < n / 2; ++i) {
    even[i] = a[2 * i];
    odd[i] = a[2 * i + 1];
  }
  fft_rec(even);
  fft_rec(odd);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    const std::complex<double> t = std::complex<double>(std::cos(ang), std::sin(ang)) * odd[k];
    a[k] = even[k] + t;
    a[k + n / 2] = even[k] - t;
  }
}

/// Linear convolution through the recursive FFT (lengths padded to 2^k).
inline std::vector<std::complex<double>> fft_convolve_oracle(
    std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  const std::size_t out_len = a.size() + b.size() - 1;
  std::size_t n = 1;
  while (n < out_len) n <<= 1;
  a.resize(n);
  b.resize(n);
  fft_rec(a);
  fft_rec(b);
  for (std::size_t i = 0; i < n; ++i) a[i] *= b[i];
  // Inverse via conjugation.
  for (auto& v : a) v = std::conj(v);
  fft_rec(a);
  for (auto& v : a) v = std::conj(v) / static_cast<double>(n);
  a.resize(out_len);
  return a;
}

/// Least-squares fit y = c0 + c1 * x; returns {c0, c1, max abs residual}.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double max_residual = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    fit.max_residual = std::max(fit.max_residual, std::abs(r));
  }
  return fit;
}

/// Reflected binary Gray sequence of order `bits`, built by the textbook
/// mirror construction (prepend 0 to the list, then 1 to the reversed list).
inline std::vector<std::vector<std::uint8_t>> reflected_gray_oracle(int bits) {
  std::vector<std::vector<std::uint8_t>> seq{{ }};
  for (int b = 0; b < bits; ++b) {
    std::vector<std::vector<std::uint8_t>> next;
    for (const auto& code : seq) {
      auto with0 = code;
      with0.insert(with0.begin(), 0);
      next.push_back(with0);
    }
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
      auto with1 = *it;
      with1.insert(with1.begin(), 1);
      next.push_back(with1);
    }
    seq = std::move(next);
  }
  return seq;
}

/// G_n = n-th Kronecker power of [[1,0],[1,1]] as a dense bit matrix.
inline std::vector<std::vector<std::uint8_t>> polar_matrix_oracle(int n) {
  std::vector<std::vector<std::uint8_t>> g{{1}};
  int size = 1;
  while (size < n) {
    std::vector<std::vector<std::uint8_t>> next(2 * size, std::vector<std::uint8_t>(2 * size, 0));
    for (int i = 0; i < size; ++i) {
      for (int j = 0; j < size; ++j) {
        if (!g[i][j]) continue;
        next[i][j] = 1;          // F[0][0] = 1
        next[i + size][j] = 1;   // F[1][0] = 1
        next[i + size][j + size] = 1;  // F[1][1] = 1
      }
    }
    g = std::move(next);
    size *= 2;
  }
  return g;
}

}  // namespace testutil
