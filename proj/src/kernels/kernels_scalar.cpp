#include "kernels/kernels_impl.hpp"

namespace bilab::kernels::scalar {

namespace {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) { return a * b % m; }

}  // namespace

void det2_is_one(const Soa2& g, std::size_t n, std::uint32_t m, std::uint8_t* out) {
  const std::uint64_t one = 1 % m;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t ad = mulmod(g[0][i], g[3][i], m);
    std::uint64_t bc = mulmod(g[1][i], g[2][i], m);
    out[i] = (ad + m - bc) % m == one;
  }
}

void det3_is_one(const Soa3& g, std::size_t n, std::uint32_t m, std::uint8_t* out) {
  const std::uint64_t one = 1 % m;
  for (std::size_t i = 0; i < n; ++i) {
    auto e = [&](int k) -> std::uint64_t { return g[k][i]; };
    std::uint64_t c0 = (mulmod(e(4), e(8), m) + m - mulmod(e(5), e(7), m)) % m;
    std::uint64_t c1 = (mulmod(e(3), e(8), m) + m - mulmod(e(5), e(6), m)) % m;
    std::uint64_t c2 = (mulmod(e(3), e(7), m) + m - mulmod(e(4), e(6), m)) % m;
    std::uint64_t det = (mulmod(e(0), c0, m) + m - mulmod(e(1), c1, m) + mulmod(e(2), c2, m)) % m;
    out[i] = det == one;
  }
}

void commute2(const Soa2& g, std::size_t n, const Fixed2& left, const Fixed2& right,
              std::uint32_t m, std::uint8_t* out) {
  for (std::size_t i = 0; i < n; ++i) {
    bool ok = true;
    for (int r = 0; r < 2 && ok; ++r) {
      for (int c = 0; c < 2 && ok; ++c) {
        std::uint64_t gr = 0, lg = 0;
        for (int k = 0; k < 2; ++k) {
          gr += mulmod(g[2 * r + k][i], right[2 * k + c], m);
          lg += mulmod(left[2 * r + k], g[2 * k + c][i], m);
        }
        ok = gr % m == lg % m;
      }
    }
    out[i] = ok;
  }
}

void commute3(const Soa3& g, std::size_t n, const Fixed3& left, const Fixed3& right,
              std::uint32_t m, std::uint8_t* out) {
  for (std::size_t i = 0; i < n; ++i) {
    bool ok = true;
    for (int r = 0; r < 3 && ok; ++r) {
      for (int c = 0; c < 3 && ok; ++c) {
        std::uint64_t gr = 0, lg = 0;
        for (int k = 0; k < 3; ++k) {
          gr += mulmod(g[3 * r + k][i], right[3 * k + c], m);
          lg += mulmod(left[3 * r + k], g[3 * k + c][i], m);
        }
        ok = gr % m == lg % m;
      }
    }
    out[i] = ok;
  }
}

}  // namespace bilab::kernels::scalar
