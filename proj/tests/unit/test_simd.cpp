#include <random>
#include <vector>

#include "doctest.h"

#include "cantrans/simd/kernels.hpp"

using namespace cantrans::simd;

namespace {

std::vector<std::uint8_t> random_bytes(std::size_t n, unsigned alphabet, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> v(n);
  for (auto& x : v) x = static_cast<std::uint8_t>(rng() % alphabet);
  return v;
}

// Periodic word with one planted defect, so mismatches land at controlled offsets.
std::vector<std::uint8_t> periodic_with_defect(std::size_t n, std::size_t period, std::size_t defect) {
  std::vector<std::uint8_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<std::uint8_t>(i % period);
  if (defect < n) v[defect] ^= 0x80;
  return v;
}

struct Variant {
  const char* name;
  std::size_t (*mismatch)(const std::uint8_t*, std::size_t, std::size_t, std::size_t);
  std::size_t (*count)(const std::uint8_t*, std::size_t, std::uint8_t);
  void (*add)(const std::uint8_t*, std::size_t, std::uint8_t, std::uint8_t, std::uint8_t*);
};

std::vector<Variant> available() {
  std::vector<Variant> v;
#if defined(CANTRANS_HAVE_AVX2_KERNELS)
  if (detected_isa() == Isa::avx2) v.push_back({"avx2", avx2::first_mismatch_lag, avx2::count_value, avx2::add_mod});
#endif
#if defined(CANTRANS_HAVE_NEON_KERNELS)
  if (detected_isa() == Isa::neon) v.push_back({"neon", neon::first_mismatch_lag, neon::count_value, neon::add_mod});
#endif
  return v;
}

}  // namespace

TEST_CASE("first_mismatch_lag: vector variants equal the scalar reference") {
  for (const auto& var : available()) {
    INFO(var.name);
    for (std::size_t n : {0, 1, 31, 32, 33, 64, 100, 1000, 4099}) {
      for (std::size_t lag : {1, 2, 3, 7, 32, 50}) {
        for (std::size_t defect : {std::size_t{0}, n / 3, n / 2 + 1, n + 1}) {
          auto v = periodic_with_defect(n + lag, lag, defect);
          for (std::size_t begin : {std::size_t{0}, std::size_t{5}, n / 4}) {
            if (begin > n) continue;
            CHECK(var.mismatch(v.data(), begin, n, lag) == scalar::first_mismatch_lag(v.data(), begin, n, lag));
          }
        }
      }
    }
    auto r = random_bytes(5000, 2, 3);
    for (std::size_t lag = 1; lag < 40; ++lag)
      CHECK(var.mismatch(r.data(), 0, 4000, lag) == scalar::first_mismatch_lag(r.data(), 0, 4000, lag));
  }
}

TEST_CASE("count_value and add_mod: vector variants equal the scalar reference") {
  for (const auto& var : available()) {
    INFO(var.name);
    for (std::size_t n : {0, 1, 15, 16, 31, 32, 33, 257, 10007}) {
      for (unsigned modulus : {2U, 3U, 7U, 10U, 200U, 255U}) {
        auto src = random_bytes(n, modulus, n * 31 + modulus);
        for (std::uint8_t value : {std::uint8_t{0}, std::uint8_t{1}, std::uint8_t(modulus - 1)})
          CHECK(var.count(src.data(), n, value) == scalar::count_value(src.data(), n, value));
        for (unsigned shift : {0U, 1U, modulus - 1}) {
          std::vector<std::uint8_t> a(n), b(n);
          var.add(src.data(), n, static_cast<std::uint8_t>(shift), static_cast<std::uint8_t>(modulus), a.data());
          scalar::add_mod(src.data(), n, static_cast<std::uint8_t>(shift), static_cast<std::uint8_t>(modulus), b.data());
          CHECK(a == b);
        }
      }
    }
  }
}

TEST_CASE("scalar reference semantics") {
  std::vector<std::uint8_t> v{1, 2, 1, 2, 1, 3};
  CHECK(scalar::first_mismatch_lag(v.data(), 0, 4, 2) == 3);
  CHECK(scalar::first_mismatch_lag(v.data(), 0, 3, 2) == 3);
  CHECK(scalar::count_value(v.data(), v.size(), 1) == 3);
  std::vector<std::uint8_t> out(v.size());
  scalar::add_mod(v.data(), v.size(), 2, 4, out.data());
  CHECK(out == std::vector<std::uint8_t>{3, 0, 3, 0, 3, 1});
}

TEST_CASE("runtime dispatch follows the active kernel set") {
  const Isa before = active_isa();
  auto v = random_bytes(3000, 3, 8);
  std::vector<std::size_t> results;
  for (Isa isa : {Isa::scalar, detected_isa()}) {
    CHECK(set_active_isa(isa) == isa);
    CHECK(active_isa() == isa);
    results.push_back(first_mismatch_lag(v, 0, 2000, 3));
    results.push_back(count_value(v, 2));
  }
  CHECK(results[0] == results[2]);
  CHECK(results[1] == results[3]);
  // An unavailable set falls back.
  const Isa foreign = detected_isa() == Isa::neon ? Isa::avx2 : Isa::neon;
  if (foreign != detected_isa()) CHECK(set_active_isa(foreign) != foreign);
  set_active_isa(before);
  CHECK_THROWS(first_mismatch_lag(v, 0, 3000, 1));
}
