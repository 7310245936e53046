#include <atomic>
#include <stdexcept>

#include "kernels/kernels_impl.hpp"

namespace bilab::kernels {

namespace {

Backend detect() {
#if defined(BILAB_WITH_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Backend::Avx2;
#endif
  return Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

}  // namespace

bool avx2_supported() { return detect() == Backend::Avx2; }

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void force_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_supported()) {
    throw std::runtime_error("AVX2 backend requested but not supported on this machine");
  }
  current().store(b, std::memory_order_relaxed);
}

const char* backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

#if defined(BILAB_WITH_AVX2)
#define BILAB_DISPATCH(fn, ...)                                          \
  do {                                                                   \
    if (active_backend() == Backend::Avx2) return avx2::fn(__VA_ARGS__); \
    return scalar::fn(__VA_ARGS__);                                      \
  } while (0)
#else
#define BILAB_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void det2_is_one(const Soa2& g, std::size_t n, std::uint32_t m, std::uint8_t* out) {
  BILAB_DISPATCH(det2_is_one, g, n, m, out);
}

void det3_is_one(const Soa3& g, std::size_t n, std::uint32_t m, std::uint8_t* out) {
  BILAB_DISPATCH(det3_is_one, g, n, m, out);
}

void commute2(const Soa2& g, std::size_t n, const Fixed2& left, const Fixed2& right,
              std::uint32_t m, std::uint8_t* out) {
  BILAB_DISPATCH(commute2, g, n, left, right, m, out);
}

void commute3(const Soa3& g, std::size_t n, const Fixed3& left, const Fixed3& right,
              std::uint32_t m, std::uint8_t* out) {
  BILAB_DISPATCH(commute3, g, n, left, right, m, out);
}

}  // namespace bilab::kernels
