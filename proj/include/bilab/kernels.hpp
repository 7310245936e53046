#pragma once

// Batched modular matrix predicates over one residue ring Z/m, in
// structure-of-arrays layout: entry k of matrix i is entries[k][i].
// Every kernel has a scalar reference version and, on x86-64, an AVX2
// version; the active backend is picked at first use from CPUID.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace bilab::kernels {

enum class Backend { Scalar, Avx2 };

using Soa2 = std::array<const std::uint32_t*, 4>;  // a, b, c, d
using Soa3 = std::array<const std::uint32_t*, 9>;  // row-major
using Fixed2 = std::array<std::uint32_t, 4>;
using Fixed3 = std::array<std::uint32_t, 9>;

// out[i] = (det(g_i) == 1 mod m)
void det2_is_one(const Soa2& g, std::size_t n, std::uint32_t m, std::uint8_t* out);
void det3_is_one(const Soa3& g, std::size_t n, std::uint32_t m, std::uint8_t* out);

// out[i] = (g_i * right == left * g_i mod m). With left = lambda * right this
// tests commutation up to the central scalar lambda.
void commute2(const Soa2& g, std::size_t n, const Fixed2& left, const Fixed2& right,
              std::uint32_t m, std::uint8_t* out);
void commute3(const Soa3& g, std::size_t n, const Fixed3& left, const Fixed3& right,
              std::uint32_t m, std::uint8_t* out);

Backend active_backend();
bool avx2_supported();
// Overrides CPUID selection; requesting Avx2 on a machine without it throws.
void force_backend(Backend b);
const char* backend_name(Backend b);

// Moduli at or above this bound always take the scalar path: the AVX2
// kernels keep partial sums in signed 32-bit lanes.
inline constexpr std::uint32_t kSimdModulusLimit = 1u << 13;

}  // namespace bilab::kernels
