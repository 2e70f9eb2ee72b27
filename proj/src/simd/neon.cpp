#include "cantrans/simd/kernels.hpp"

#if defined(CANTRANS_HAVE_NEON_KERNELS)

#include <arm_neon.h>

namespace cantrans::simd::neon {

std::size_t first_mismatch_lag(const std::uint8_t* seq, std::size_t begin, std::size_t end, std::size_t lag) {
  std::size_t i = begin;
  for (; i + 16 <= end; i += 16) {
    uint8x16_t eq = vceqq_u8(vld1q_u8(seq + i), vld1q_u8(seq + i + lag));
    if (vminvq_u8(eq) != 0xff) return scalar::first_mismatch_lag(seq, i, i + 16, lag);
  }
  return scalar::first_mismatch_lag(seq, i, end, lag);
}

std::size_t count_value(const std::uint8_t* seq, std::size_t n, std::uint8_t value) {
  const uint8x16_t needle = vdupq_n_u8(value);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    uint8x16_t eq = vceqq_u8(vld1q_u8(seq + i), needle);
    c += vaddvq_u8(vshrq_n_u8(eq, 7));
  }
  return c + scalar::count_value(seq + i, n - i, value);
}

void add_mod(const std::uint8_t* src, std::size_t n, std::uint8_t shift, std::uint8_t modulus, std::uint8_t* dst) {
  const uint8x16_t vs = vdupq_n_u8(shift);
  const uint8x16_t vm = vdupq_n_u8(modulus);
  const uint8x16_t thresh = vsubq_u8(vm, vs);
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    uint8x16_t a = vld1q_u8(src + i);
    uint8x16_t sum = vaddq_u8(a, vs);
    uint8x16_t ge = vcgeq_u8(a, thresh);
    vst1q_u8(dst + i, vbslq_u8(ge, vsubq_u8(sum, vm), sum));
  }
  scalar::add_mod(src + i, n - i, shift, modulus, dst + i);
}

}  // namespace cantrans::simd::neon

#endif
