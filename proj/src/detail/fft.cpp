#include "detail/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace skg::detail {

namespace {

/// Precomputed per-length FFT plan: bit-reversal permutation plus exact
/// twiddles for every stage (concatenated), forward sign convention.
struct Plan {
  std::vector<std::size_t> bitrev;
  std::vector<std::complex<double>> twiddles;  // stages len=2,4,...,n
};

std::shared_ptr<const Plan> plan_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const Plan>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  auto plan = std::make_shared<Plan>();
  plan->bitrev.resize(n);
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    plan->bitrev[i] = j;
  }
  plan->twiddles.reserve(n > 1 ? n - 1 : 0);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    for (std::size_t k = 0; k < len / 2; ++k) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
      plan->twiddles.emplace_back(std::cos(ang), std::sin(ang));
    }
  }
  cache.emplace(n, plan);
  return plan;
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft_pow2: length not a power of two");
  if (n == 1) return;

  const auto plan = plan_for(n);
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t j = plan->bitrev[i];
    if (i < j) std::swap(a[i], a[j]);
  }

  const std::complex<double>* tw = plan->twiddles.data();
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const std::complex<double> w = inverse ? std::conj(tw[k]) : tw[k];
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
    tw += half;
  }

  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= inv;
  }
}

std::vector<std::complex<double>> fft_convolve(const std::vector<std::complex<double>>& a,
                                               const std::vector<std::complex<double>>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(out_len);
  std::vector<std::complex<double>> fa(a.begin(), a.end());
  std::vector<std::complex<double>> fb(b.begin(), b.end());
  fa.resize(n);
  fb.resize(n);
  fft_pow2(fa, false);
  fft_pow2(fb, false);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  fft_pow2(fa, true);
  fa.resize(out_len);
  return fa;
}

}  // namespace skg::detail
