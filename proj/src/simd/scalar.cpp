#include "cantrans/simd/kernels.hpp"

namespace cantrans::simd::scalar {

std::size_t first_mismatch_lag(const std::uint8_t* seq, std::size_t begin, std::size_t end, std::size_t lag) {
  for (std::size_t i = begin; i < end; ++i) {
    if (seq[i] != seq[i + lag]) return i;
  }
  return end;
}

std::size_t count_value(const std::uint8_t* seq, std::size_t n, std::uint8_t value) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += static_cast<std::size_t>(seq[i] == value);
  return c;
}

void add_mod(const std::uint8_t* src, std::size_t n, std::uint8_t shift, std::uint8_t modulus, std::uint8_t* dst) {
  for (std::size_t i = 0; i < n; ++i) {
    unsigned s = static_cast<unsigned>(src[i]) + shift;
    dst[i] = static_cast<std::uint8_t>(s >= modulus ? s - modulus : s);
  }
}

}  // namespace cantrans::simd::scalar
