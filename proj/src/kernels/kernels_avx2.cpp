#include <immintrin.h>

#include "kernels/kernels_impl.hpp"

namespace bilab::kernels::avx2 {

namespace {

// Residues < 2^13, so products fit in 26 bits and every partial sum below
// stays inside a signed 32-bit lane. Divisibility by m is decided in double
// precision, where x - round(x/m)*m is exact for |x| < 2^31.
struct Modulus {
  explicit Modulus(std::uint32_t m)
      : m_pd(_mm256_set1_pd(static_cast<double>(m))),
        inv_pd(_mm256_set1_pd(1.0 / static_cast<double>(m))) {}
  __m256d m_pd;
  __m256d inv_pd;
};

inline __m256d remainder_pd(__m256d v, const Modulus& mod) {
  __m256d q = _mm256_round_pd(_mm256_mul_pd(v, mod.inv_pd), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  return _mm256_sub_pd(v, _mm256_mul_pd(q, mod.m_pd));
}

inline unsigned divisible_bits(__m256i x, const Modulus& mod) {
  const __m256d zero = _mm256_setzero_pd();
  __m256d lo = remainder_pd(_mm256_cvtepi32_pd(_mm256_castsi256_si128(x)), mod);
  __m256d hi = remainder_pd(_mm256_cvtepi32_pd(_mm256_extracti128_si256(x, 1)), mod);
  unsigned lo_bits = static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(lo, zero, _CMP_EQ_OQ)));
  unsigned hi_bits = static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(hi, zero, _CMP_EQ_OQ)));
  return lo_bits | (hi_bits << 4);
}

// Representative of x mod m in (-m, m).
inline __m256i reduce_small(__m256i x, const Modulus& mod) {
  __m128i lo = _mm256_cvtpd_epi32(remainder_pd(_mm256_cvtepi32_pd(_mm256_castsi256_si128(x)), mod));
  __m128i hi = _mm256_cvtpd_epi32(remainder_pd(_mm256_cvtepi32_pd(_mm256_extracti128_si256(x, 1)), mod));
  return _mm256_inserti128_si256(_mm256_castsi128_si256(lo), hi, 1);
}

inline __m256i load(const std::uint32_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

inline void store_bits(unsigned bits, std::uint8_t* out) {
  for (int j = 0; j < 8; ++j) out[j] = static_cast<std::uint8_t>((bits >> j) & 1u);
}

inline __m256i mul(__m256i a, __m256i b) { return _mm256_mullo_epi32(a, b); }

}  // namespace

void det2_is_one(const Soa2& g, std::size_t n, std::uint32_t m, std::uint8_t* out) {
  if (m >= kSimdModulusLimit) return scalar::det2_is_one(g, n, m, out);
  const Modulus mod(m);
  const __m256i one = _mm256_set1_epi32(1);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i det = _mm256_sub_epi32(mul(load(g[0] + i), load(g[3] + i)), mul(load(g[1] + i), load(g[2] + i)));
    store_bits(divisible_bits(_mm256_sub_epi32(det, one), mod), out + i);
  }
  if (i < n) {
    Soa2 tail{g[0] + i, g[1] + i, g[2] + i, g[3] + i};
    scalar::det2_is_one(tail, n - i, m, out + i);
  }
}

void det3_is_one(const Soa3& g, std::size_t n, std::uint32_t m, std::uint8_t* out) {
  if (m >= kSimdModulusLimit) return scalar::det3_is_one(g, n, m, out);
  const Modulus mod(m);
  const __m256i one = _mm256_set1_epi32(1);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i e[9];
    for (int k = 0; k < 9; ++k) e[k] = load(g[k] + i);
    __m256i c0 = reduce_small(_mm256_sub_epi32(mul(e[4], e[8]), mul(e[5], e[7])), mod);
    __m256i c1 = reduce_small(_mm256_sub_epi32(mul(e[3], e[8]), mul(e[5], e[6])), mod);
    __m256i c2 = reduce_small(_mm256_sub_epi32(mul(e[3], e[7]), mul(e[4], e[6])), mod);
    __m256i det = _mm256_add_epi32(_mm256_sub_epi32(mul(e[0], c0), mul(e[1], c1)), mul(e[2], c2));
    store_bits(divisible_bits(_mm256_sub_epi32(det, one), mod), out + i);
  }
  if (i < n) {
    Soa3 tail;
    for (int k = 0; k < 9; ++k) tail[k] = g[k] + i;
    scalar::det3_is_one(tail, n - i, m, out + i);
  }
}

void commute2(const Soa2& g, std::size_t n, const Fixed2& left, const Fixed2& right,
              std::uint32_t m, std::uint8_t* out) {
  if (m >= kSimdModulusLimit) return scalar::commute2(g, n, left, right, m, out);
  const Modulus mod(m);
  __m256i l[4], r[4];
  for (int k = 0; k < 4; ++k) {
    l[k] = _mm256_set1_epi32(static_cast<int>(left[k]));
    r[k] = _mm256_set1_epi32(static_cast<int>(right[k]));
  }
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i e[4];
    for (int k = 0; k < 4; ++k) e[k] = load(g[k] + i);
    unsigned bits = 0xffu;
    for (int row = 0; row < 2; ++row) {
      for (int col = 0; col < 2; ++col) {
        __m256i d = _mm256_setzero_si256();
        for (int k = 0; k < 2; ++k) {
          d = _mm256_add_epi32(d, mul(e[2 * row + k], r[2 * k + col]));
          d = _mm256_sub_epi32(d, mul(l[2 * row + k], e[2 * k + col]));
        }
        bits &= divisible_bits(d, mod);
      }
    }
    store_bits(bits, out + i);
  }
  if (i < n) {
    Soa2 tail{g[0] + i, g[1] + i, g[2] + i, g[3] + i};
    scalar::commute2(tail, n - i, left, right, m, out + i);
  }
}

void commute3(const Soa3& g, std::size_t n, const Fixed3& left, const Fixed3& right,
              std::uint32_t m, std::uint8_t* out) {
  if (m >= kSimdModulusLimit) return scalar::commute3(g, n, left, right, m, out);
  const Modulus mod(m);
  __m256i l[9], r[9];
  for (int k = 0; k < 9; ++k) {
    l[k] = _mm256_set1_epi32(static_cast<int>(left[k]));
    r[k] = _mm256_set1_epi32(static_cast<int>(right[k]));
  }
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i e[9];
    for (int k = 0; k < 9; ++k) e[k] = load(g[k] + i);
    unsigned bits = 0xffu;
    for (int row = 0; row < 3 && bits; ++row) {
      for (int col = 0; col < 3; ++col) {
        __m256i d = _mm256_setzero_si256();
        for (int k = 0; k < 3; ++k) {
          d = _mm256_add_epi32(d, mul(e[3 * row + k], r[3 * k + col]));
          d = _mm256_sub_epi32(d, mul(l[3 * row + k], e[3 * k + col]));
        }
        bits &= divisible_bits(d, mod);
      }
    }
    store_bits(bits, out + i);
  }
  if (i < n) {
    Soa3 tail;
    for (int k = 0; k < 9; ++k) tail[k] = g[k] + i;
    scalar::commute3(tail, n - i, left, right, m, out + i);
  }
}

}  // namespace bilab::kernels::avx2
