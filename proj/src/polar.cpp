#include "skg/polar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace skg {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_int(int n) {
  int m = 0;
  while ((1 << m) < n) ++m;
  return m;
}

unsigned gcd_u(unsigned a, unsigned b) { return b == 0 ? a : gcd_u(b, a % b); }

/// Exact check-node LLR combine, numerically stable form of
/// 2*atanh(tanh(a/2)*tanh(b/2)).
inline double llr_f(double a, double b) {
  const double sign = ((a < 0.0) != (b < 0.0)) ? -1.0 : 1.0;
  return sign * std::min(std::fabs(a), std::fabs(b)) +
         std::log1p(std::exp(-std::fabs(a + b))) - std::log1p(std::exp(-std::fabs(a - b)));
}

inline double llr_g(double a, double b, std::uint8_t u) { return u ? b - a : b + a; }

struct ScContext {
  const std::vector<std::uint8_t>* pinned_flags;
  const std::uint8_t* pinned_values;  // indexed by u position
  std::vector<std::uint8_t> u_hat;

  // One scratch LLR buffer per recursion depth.
  std::vector<std::vector<double>> llr_scratch;
  std::vector<std::vector<std::uint8_t>> bit_scratch;
};

/// Decodes the sub-tree covering u positions [offset, offset + m) given the
/// m channel LLRs in `llrs`; returns the re-encoded codeword-domain bits of
/// the sub-tree in `x_out`.
void sc_recurse(ScContext& ctx, double* llrs, std::uint8_t* x_out, int offset, int m, int depth) {
  if (m == 1) {
    std::uint8_t bit;
    if ((*ctx.pinned_flags)[static_cast<std::size_t>(offset)]) {
      bit = ctx.pinned_values[offset];
    } else {
      bit = llrs[0] < 0.0 ? 1 : 0;
    }
    ctx.u_hat[static_cast<std::size_t>(offset)] = bit;
    x_out[0] = bit;
    return;
  }

  const int half = m / 2;
  double* child_llr = ctx.llr_scratch[static_cast<std::size_t>(depth)].data();
  std::uint8_t* left_x = ctx.bit_scratch[static_cast<std::size_t>(depth)].data();

  for (int i = 0; i < half; ++i) child_llr[i] = llr_f(llrs[i], llrs[i + half]);
  sc_recurse(ctx, child_llr, left_x, offset, half, depth + 1);

  for (int i = 0; i < half; ++i) child_llr[i] = llr_g(llrs[i], llrs[i + half], left_x[i]);
  sc_recurse(ctx, child_llr, x_out + half, offset + half, half, depth + 1);

  for (int i = 0; i < half; ++i) x_out[i] = left_x[i] ^ x_out[i + half];
}

}  // namespace

PolarCodeSpec construct_code(int block_len, std::uint16_t rate_num, std::uint16_t rate_den,
                             double design_crossover) {
  if (!is_pow2(block_len)) throw std::invalid_argument("construct_code: block_len must be 2^m");
  if (rate_den == 0 || rate_num > rate_den) {
    throw std::invalid_argument("construct_code: rate must be in [0, 1]");
  }
  if (design_crossover < 0.0 || design_crossover >= 0.5) {
    throw std::invalid_argument("construct_code: design_crossover must be in [0, 0.5)");
  }

  PolarCodeSpec code;
  code.block_len = block_len;
  code.rate_num = rate_num;
  code.rate_den = rate_den;
  code.design_crossover = design_crossover;

  // Bhattacharyya recursion. Each level appends the new branch bit as the
  // LSB, so index bits read MSB->LSB as the root->leaf branch sequence --
  // the same indexing the successive-cancellation recursion uses (first
  // half of u takes the degraded branch at the top split).
  std::vector<double> z{2.0 * std::sqrt(design_crossover * (1.0 - design_crossover))};
  const int m = log2_int(block_len);
  for (int level = 0; level < m; ++level) {
    std::vector<double> nz(z.size() * 2);
    for (std::size_t i = 0; i < z.size(); ++i) {
      nz[2 * i] = 2.0 * z[i] - z[i] * z[i];
      nz[2 * i + 1] = z[i] * z[i];
    }
    z.swap(nz);
  }

  code.reliability_order.resize(static_cast<std::size_t>(block_len));
  std::iota(code.reliability_order.begin(), code.reliability_order.end(), 0);
  std::stable_sort(code.reliability_order.begin(), code.reliability_order.end(),
                   [&z](int a, int b) { return z[static_cast<std::size_t>(a)] > z[static_cast<std::size_t>(b)]; });

  const double rate = static_cast<double>(rate_num) / rate_den;
  const auto syn_len = static_cast<std::size_t>(std::llround((1.0 - rate) * block_len));
  code.syndrome_positions.assign(code.reliability_order.begin(),
                                 code.reliability_order.begin() + static_cast<std::ptrdiff_t>(syn_len));
  std::sort(code.syndrome_positions.begin(), code.syndrome_positions.end());
  code.is_syndrome_pos.assign(static_cast<std::size_t>(block_len), 0);
  for (int pos : code.syndrome_positions) code.is_syndrome_pos[static_cast<std::size_t>(pos)] = 1;
  return code;
}

PolarCodeSpec construct_code(int block_len, double rate, double design_crossover) {
  if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("construct_code: rate must be in [0, 1]");
  auto num = static_cast<unsigned>(std::llround(rate * 10000.0));
  unsigned den = 10000;
  const unsigned g = num == 0 ? den : gcd_u(num, den);
  num /= g;
  den /= g;
  if (num > 0xffff || den > 0xffff) throw std::invalid_argument("construct_code: rate not representable");
  return construct_code(block_len, static_cast<std::uint16_t>(num), static_cast<std::uint16_t>(den),
                        design_crossover);
}

Bits polar_transform(const Bits& r) {
  if (!is_pow2(static_cast<int>(r.size()))) {
    throw std::invalid_argument("polar_transform: length must be a power of two");
  }
  Bits u = r;
  const std::size_t n = u.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) u[j] ^= u[j + h];
    }
  }
  return u;
}

Syndrome compute_syndrome(const Bits& r, const PolarCodeSpec& code) {
  if (static_cast<int>(r.size()) != code.block_len) {
    throw std::invalid_argument("compute_syndrome: block length mismatch");
  }
  const Bits u = polar_transform(r);
  Syndrome s;
  s.bits.reserve(code.syndrome_positions.size());
  for (int pos : code.syndrome_positions) s.bits.push_back(u[static_cast<std::size_t>(pos)]);
  return s;
}

Bits sc_decode(const Bits& r_side, const Syndrome& s, const PolarCodeSpec& code, double channel_p) {
  const int n = code.block_len;
  if (static_cast<int>(r_side.size()) != n) {
    throw std::invalid_argument("sc_decode: side information length mismatch");
  }
  if (static_cast<int>(s.bits.size()) != code.syndrome_len()) {
    throw std::invalid_argument("sc_decode: syndrome length mismatch");
  }

  const double p = std::clamp(channel_p, 1e-12, 0.5 - 1e-12);
  const double channel_llr = std::log((1.0 - p) / p);

  // Scatter syndrome bits to their u positions.
  std::vector<std::uint8_t> pinned(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < s.bits.size(); ++i) {
    pinned[static_cast<std::size_t>(code.syndrome_positions[i])] = s.bits[i];
  }

  ScContext ctx;
  ctx.pinned_flags = &code.is_syndrome_pos;
  ctx.pinned_values = pinned.data();
  ctx.u_hat.assign(static_cast<std::size_t>(n), 0);

  const int depth_count = log2_int(n) + 1;
  ctx.llr_scratch.resize(static_cast<std::size_t>(depth_count));
  ctx.bit_scratch.resize(static_cast<std::size_t>(depth_count));
  for (int d = 0, half = n / 2; d < depth_count && half >= 1; ++d, half /= 2) {
    ctx.llr_scratch[static_cast<std::size_t>(d)].resize(static_cast<std::size_t>(half));
    ctx.bit_scratch[static_cast<std::size_t>(d)].resize(static_cast<std::size_t>(half));
  }

  std::vector<double> llrs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) llrs[static_cast<std::size_t>(k)] = (r_side[static_cast<std::size_t>(k)] ? -1.0 : 1.0) * channel_llr;

  Bits x_hat(static_cast<std::size_t>(n), 0);
  if (n == 1) {
    x_hat[0] = code.is_syndrome_pos[0] ? pinned[0] : (llrs[0] < 0.0 ? 1 : 0);
    return x_hat;
  }
  sc_recurse(ctx, llrs.data(), x_hat.data(), 0, n, 0);
  return x_hat;
}

double frame_error_rate(const std::vector<std::uint8_t>& frame_ok) {
  if (frame_ok.empty()) throw std::invalid_argument("frame_error_rate: no frames");
  std::size_t bad = 0;
  for (auto ok : frame_ok) bad += ok ? 0 : 1;
  return static_cast<double>(bad) / static_cast<double>(frame_ok.size());
}

std::vector<std::uint8_t> serialize_syndrome(const Syndrome& s, const PolarCodeSpec& code) {
  if (static_cast<int>(s.bits.size()) != code.syndrome_len()) {
    throw std::invalid_argument("serialize_syndrome: length mismatch with code");
  }
  std::vector<std::uint8_t> out(8 + (s.bits.size() + 7) / 8, 0);
  const auto n = static_cast<std::uint32_t>(code.block_len);
  out[0] = static_cast<std::uint8_t>(n & 0xff);
  out[1] = static_cast<std::uint8_t>((n >> 8) & 0xff);
  out[2] = static_cast<std::uint8_t>((n >> 16) & 0xff);
  out[3] = static_cast<std::uint8_t>((n >> 24) & 0xff);
  out[4] = static_cast<std::uint8_t>(code.rate_num & 0xff);
  out[5] = static_cast<std::uint8_t>(code.rate_num >> 8);
  out[6] = static_cast<std::uint8_t>(code.rate_den & 0xff);
  out[7] = static_cast<std::uint8_t>(code.rate_den >> 8);
  for (std::size_t i = 0; i < s.bits.size(); ++i) {
    if (s.bits[i]) out[8 + i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  return out;
}

std::pair<SyndromeHeader, Syndrome> parse_syndrome(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8) throw std::invalid_argument("parse_syndrome: truncated header");
  SyndromeHeader hdr;
  hdr.block_len = static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
                  (static_cast<std::uint32_t>(bytes[2]) << 16) | (static_cast<std::uint32_t>(bytes[3]) << 24);
  hdr.rate_num = static_cast<std::uint16_t>(bytes[4] | (bytes[5] << 8));
  hdr.rate_den = static_cast<std::uint16_t>(bytes[6] | (bytes[7] << 8));
  if (hdr.rate_den == 0 || hdr.rate_num > hdr.rate_den || !is_pow2(static_cast<int>(hdr.block_len))) {
    throw std::invalid_argument("parse_syndrome: inconsistent header");
  }
  const double rate = static_cast<double>(hdr.rate_num) / hdr.rate_den;
  const auto syn_len =
      static_cast<std::size_t>(std::llround((1.0 - rate) * static_cast<double>(hdr.block_len)));
  if (bytes.size() != 8 + (syn_len + 7) / 8) {
    throw std::invalid_argument("parse_syndrome: payload size mismatch");
  }
  Syndrome s;
  s.bits.resize(syn_len);
  for (std::size_t i = 0; i < syn_len; ++i) {
    s.bits[i] = (bytes[8 + i / 8] >> (i % 8)) & 1u;
  }
  return {hdr, s};
}

}  // namespace skg
