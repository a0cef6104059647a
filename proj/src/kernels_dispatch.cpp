#include <cstdlib>
#include <string_view>

#include "gpw/kernels.hpp"

namespace gpw::kernels {

#ifndef GPW_HAVE_AVX2
namespace detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace detail
#endif

const KernelTable* avx2() {
#if defined(GPW_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = [&]() -> const KernelTable& {
    const char* env = std::getenv("GPW_SIMD");
    if (env && std::string_view(env) == "scalar") return scalar();
    if (const KernelTable* t = avx2()) return *t;
    return scalar();
  }();
  return table;
}

}  // namespace gpw::kernels
