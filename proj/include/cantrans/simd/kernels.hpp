#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

// Byte-level inner loops shared by the sequence scanners. Each kernel has a
// scalar reference implementation and vector variants; the active variant is
// picked once at startup from the CPU features and can be pinned for testing.
namespace cantrans::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa) noexcept;

// Best variant supported by this CPU and build.
Isa detected_isa() noexcept;
Isa active_isa() noexcept;
// Pins the variant used by the dispatching entry points. Requesting an ISA
// that is not available falls back to scalar. Returns the ISA now active.
Isa set_active_isa(Isa isa) noexcept;
// Honors CANTRANS_SIMD=scalar|avx2|neon when present.
void configure_from_environment() noexcept;

// First i in [begin, end) with seq[i] != seq[i + lag]; `end` if none.
// Requires end + lag <= seq.size().
std::size_t first_mismatch_lag(std::span<const std::uint8_t> seq, std::size_t begin, std::size_t end,
                               std::size_t lag);

// Number of positions holding `value`.
std::size_t count_value(std::span<const std::uint8_t> seq, std::uint8_t value);

// dst[i] = (src[i] + shift) mod modulus, assuming src[i] < modulus and shift < modulus.
void add_mod(std::span<const std::uint8_t> src, std::uint8_t shift, std::uint8_t modulus,
             std::span<std::uint8_t> dst);

// Explicit-variant entry points used by the equivalence tests.
namespace scalar {
std::size_t first_mismatch_lag(const std::uint8_t* seq, std::size_t begin, std::size_t end, std::size_t lag);
std::size_t count_value(const std::uint8_t* seq, std::size_t n, std::uint8_t value);
void add_mod(const std::uint8_t* src, std::size_t n, std::uint8_t shift, std::uint8_t modulus, std::uint8_t* dst);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define CANTRANS_HAVE_AVX2_KERNELS 1
namespace avx2 {
std::size_t first_mismatch_lag(const std::uint8_t* seq, std::size_t begin, std::size_t end, std::size_t lag);
std::size_t count_value(const std::uint8_t* seq, std::size_t n, std::uint8_t value);
void add_mod(const std::uint8_t* src, std::size_t n, std::uint8_t shift, std::uint8_t modulus, std::uint8_t* dst);
}  // namespace avx2
#endif

#if defined(__aarch64__) || defined(__ARM_NEON)
#define CANTRANS_HAVE_NEON_KERNELS 1
namespace neon {
std::size_t first_mismatch_lag(const std::uint8_t* seq, std::size_t begin, std::size_t end, std::size_t lag);
std::size_t count_value(const std::uint8_t* seq, std::size_t n, std::uint8_t value);
void add_mod(const std::uint8_t* src, std::size_t n, std::uint8_t shift, std::uint8_t modulus, std::uint8_t* dst);
}  // namespace neon
#endif

}  // namespace cantrans::simd
