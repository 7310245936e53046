#pragma once

#include "bilab/kernels.hpp"

namespace bilab::kernels {

namespace scalar {
void det2_is_one(const Soa2& g, std::size_t n, std::uint32_t m, std::uint8_t* out);
void det3_is_one(const Soa3& g, std::size_t n, std::uint32_t m, std::uint8_t* out);
void commute2(const Soa2& g, std::size_t n, const Fixed2& left, const Fixed2& right,
              std::uint32_t m, std::uint8_t* out);
void commute3(const Soa3& g, std::size_t n, const Fixed3& left, const Fixed3& right,
              std::uint32_t m, std::uint8_t* out);
}  // namespace scalar

#if defined(BILAB_WITH_AVX2)
namespace avx2 {
void det2_is_one(const Soa2& g, std::size_t n, std::uint32_t m, std::uint8_t* out);
void det3_is_one(const Soa3& g, std::size_t n, std::uint32_t m, std::uint8_t* out);
void commute2(const Soa2& g, std::size_t n, const Fixed2& left, const Fixed2& right,
              std::uint32_t m, std::uint8_t* out);
void commute3(const Soa3& g, std::size_t n, const Fixed3& left, const Fixed3& right,
              std::uint32_t m, std::uint8_t* out);
}  // namespace avx2
#endif

}  // namespace bilab::kernels
