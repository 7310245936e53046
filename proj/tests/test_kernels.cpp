#include <gtest/gtest.h>

#include <random>

#include "bilab/kernels.hpp"

using namespace bilab::kernels;

namespace {

struct Restore {
  Backend saved = active_backend();
  ~Restore() { force_backend(saved); }
};

std::uint64_t md(std::uint64_t x, std::uint64_t m) { return x % m; }

// Naive oracles in 64-bit arithmetic.
bool det2_ref(const std::array<std::uint32_t, 4>& g, std::uint64_t m) {
  return md(md(std::uint64_t{g[0]} * g[3], m) + m - md(std::uint64_t{g[1]} * g[2], m), m) == 1 % m;
}

bool det3_ref(const std::array<std::uint32_t, 9>& g, std::uint64_t m) {
  auto mul = [&](std::uint64_t a, std::uint64_t b) { return md(a * b, m); };
  auto minor = [&](int a, int b, int c, int d) { return md(mul(g[a], g[d]) + m - mul(g[b], g[c]), m); };
  std::uint64_t d = mul(g[0], minor(4, 5, 7, 8));
  d = md(d + m - mul(g[1], minor(3, 5, 6, 8)), m);
  d = md(d + mul(g[2], minor(3, 4, 6, 7)), m);
  return d == 1 % m;
}

template <std::size_t K>
bool commute_ref(const std::array<std::uint32_t, K * K>& g, const std::array<std::uint32_t, K * K>& left,
                 const std::array<std::uint32_t, K * K>& right, std::uint64_t m) {
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < K; ++j) {
      std::uint64_t a = 0, b = 0;
      for (std::size_t k = 0; k < K; ++k) {
        a = md(a + md(std::uint64_t{g[i * K + k]} * right[k * K + j], m), m);
        b = md(b + md(std::uint64_t{left[i * K + k]} * g[k * K + j], m), m);
      }
      if (a != b) return false;
    }
  }
  return true;
}

const std::vector<std::uint32_t> kModuli = {2, 3, 4, 5, 7, 8, 9, 25, 97, 125, 4093, 8191, 8192, 8209, 65521, 2147483647u};

// Data biased towards det-1 and commuting matrices so both outcomes occur.
template <std::size_t E>
std::vector<std::array<std::uint32_t, E>> random_mats(std::mt19937_64& rng, std::size_t n, std::uint32_t m) {
  std::uniform_int_distribution<std::uint32_t> d(0, m - 1);
  std::vector<std::array<std::uint32_t, E>> out(n);
  for (auto& a : out) {
    for (auto& x : a) x = d(rng);
    if (rng() % 3 == 0) {
      for (std::size_t i = 0; i < E; ++i) a[i] = (i % (E == 4 ? 3 : 4) == 0) ? 1 % m : 0;
      if (rng() % 2) a[1] = d(rng);
    }
  }
  return out;
}

template <std::size_t E>
std::array<std::vector<std::uint32_t>, E> to_soa(const std::vector<std::array<std::uint32_t, E>>& mats) {
  std::array<std::vector<std::uint32_t>, E> soa;
  for (std::size_t e = 0; e < E; ++e) {
    for (const auto& a : mats) soa[e].push_back(a[e]);
  }
  return soa;
}

std::vector<Backend> backends() {
  std::vector<Backend> b{Backend::Scalar};
  if (avx2_supported()) b.push_back(Backend::Avx2);
  return b;
}

}  // namespace

TEST(Kernels, Det2MatchesOracleOnEveryBackend) {
  Restore restore;
  std::mt19937_64 rng(11);
  for (auto m : kModuli) {
    for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 31u, 1000u}) {
      auto mats = random_mats<4>(rng, n, m);
      auto soa = to_soa(mats);
      Soa2 p{soa[0].data(), soa[1].data(), soa[2].data(), soa[3].data()};
      for (Backend b : backends()) {
        force_backend(b);
        std::vector<std::uint8_t> out(n, 7);
        det2_is_one(p, n, m, out.data());
        for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(out[i] != 0, det2_ref(mats[i], m)) << backend_name(b) << " m=" << m;
      }
    }
  }
}

TEST(Kernels, Det3MatchesOracleOnEveryBackend) {
  Restore restore;
  std::mt19937_64 rng(12);
  for (auto m : kModuli) {
    for (std::size_t n : {0u, 3u, 8u, 17u, 777u}) {
      auto mats = random_mats<9>(rng, n, m);
      auto soa = to_soa(mats);
      Soa3 p;
      for (int e = 0; e < 9; ++e) p[e] = soa[e].data();
      for (Backend b : backends()) {
        force_backend(b);
        std::vector<std::uint8_t> out(n, 7);
        det3_is_one(p, n, m, out.data());
        for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(out[i] != 0, det3_ref(mats[i], m)) << backend_name(b) << " m=" << m;
      }
    }
  }
}

TEST(Kernels, CommuteMatchesOracleOnEveryBackend) {
  Restore restore;
  std::mt19937_64 rng(13);
  for (auto m : kModuli) {
    std::size_t n = 515;
    auto m2 = random_mats<4>(rng, n, m);
    auto m3 = random_mats<9>(rng, n, m);
    auto s2 = to_soa(m2);
    auto s3 = to_soa(m3);
    Soa2 p2{s2[0].data(), s2[1].data(), s2[2].data(), s2[3].data()};
    Soa3 p3;
    for (int e = 0; e < 9; ++e) p3[e] = s3[e].data();
    // left = right (plain commutation) and left = lambda * right
    Fixed2 r2 = m2[0], l2 = m2[0];
    Fixed3 r3 = m3[0], l3 = m3[0];
    for (int scaled = 0; scaled < 2; ++scaled) {
      if (scaled) {
        for (auto& x : l2) x = static_cast<std::uint32_t>(std::uint64_t{x} * (m - 1) % m);
        for (auto& x : l3) x = static_cast<std::uint32_t>(std::uint64_t{x} * (m - 1) % m);
      }
      for (Backend b : backends()) {
        force_backend(b);
        std::vector<std::uint8_t> o2(n), o3(n);
        commute2(p2, n, l2, r2, m, o2.data());
        commute3(p3, n, l3, r3, m, o3.data());
        for (std::size_t i = 0; i < n; ++i) {
          ASSERT_EQ(o2[i] != 0, (commute_ref<2>(m2[i], l2, r2, m))) << backend_name(b) << " m=" << m;
          ASSERT_EQ(o3[i] != 0, (commute_ref<3>(m3[i], l3, r3, m))) << backend_name(b) << " m=" << m;
        }
      }
    }
  }
}

TEST(Kernels, ScalarAndAvx2AgreeBitForBit) {
  if (!avx2_supported()) GTEST_SKIP() << "no AVX2 on this machine";
  Restore restore;
  std::mt19937_64 rng(14);
  for (std::uint32_t m : {5u, 7u, 8191u}) {
    std::size_t n = 4099;
    auto mats = random_mats<9>(rng, n, m);
    auto soa = to_soa(mats);
    Soa3 p;
    for (int e = 0; e < 9; ++e) p[e] = soa[e].data();
    std::vector<std::uint8_t> a(n), b(n), c(n), d(n);
    force_backend(Backend::Scalar);
    det3_is_one(p, n, m, a.data());
    commute3(p, n, mats[1], mats[1], m, c.data());
    force_backend(Backend::Avx2);
    det3_is_one(p, n, m, b.data());
    commute3(p, n, mats[1], mats[1], m, d.data());
    EXPECT_EQ(a, b);
    EXPECT_EQ(c, d);
  }
}

TEST(Kernels, BackendSelection) {
  Restore restore;
  force_backend(Backend::Scalar);
  EXPECT_EQ(active_backend(), Backend::Scalar);
  EXPECT_STREQ(backend_name(Backend::Avx2), "avx2");
  if (!avx2_supported()) EXPECT_ANY_THROW(force_backend(Backend::Avx2));
}
