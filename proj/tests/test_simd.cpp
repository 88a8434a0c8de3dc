#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pptcost/simd/kernels.hpp"

using namespace pptcost;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("dispatch agrees with scalar reference on random instances") {
  std::mt19937_64 rng(20240815);
  for (int trial = 0; trial < 100; ++trial) {
    // odd and prime lengths included on purpose to cover the vector tails
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 97);
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);
    const double alpha = random_vec(rng, 1)[0];

    CHECK(simd::dot(a.data(), b.data(), n) ==
          doctest::Approx(simd::scalar::dot(a.data(), b.data(), n)).epsilon(1e-12));
    CHECK(simd::sum_abs(a.data(), n) ==
          doctest::Approx(simd::scalar::sum_abs(a.data(), n)).epsilon(1e-13));
    CHECK(simd::max_abs(a.data(), n) == simd::scalar::max_abs(a.data(), n));

    auto y1 = b, y2 = b;
    simd::axpy(alpha, a.data(), y1.data(), n);
    simd::scalar::axpy(alpha, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-13));

    auto s1 = a, s2 = a;
    simd::scale(alpha, s1.data(), n);
    simd::scalar::scale(alpha, s2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(s1[i] == s2[i]);
  }
}

TEST_CASE("complex hadamard matches scalar reference") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t nc = 1 + static_cast<std::size_t>(rng() % 31);
    const auto a = random_vec(rng, 2 * nc);
    const auto b = random_vec(rng, 2 * nc);
    std::vector<double> o1(2 * nc), o2(2 * nc);
    simd::hadamard_cplx(a.data(), b.data(), o1.data(), nc);
    simd::scalar::hadamard_cplx(a.data(), b.data(), o2.data(), nc);
    for (std::size_t i = 0; i < 2 * nc; ++i)
      CHECK(o1[i] == doctest::Approx(o2[i]).epsilon(1e-13));
  }
}

TEST_CASE("complex hadamard closed-form spot checks") {
  // (1 + 2i) * (3 - i) = 5 + 5i
  const double a[2] = {1.0, 2.0};
  const double b[2] = {3.0, -1.0};
  double out[2];
  simd::scalar::hadamard_cplx(a, b, out, 1);
  CHECK(out[0] == doctest::Approx(5.0));
  CHECK(out[1] == doctest::Approx(5.0));
#if defined(__x86_64__) || defined(_M_X64)
  if (simd::has_avx2()) {
    simd::avx2::hadamard_cplx(a, b, out, 1);
    CHECK(out[0] == doctest::Approx(5.0));
    CHECK(out[1] == doctest::Approx(5.0));
  }
#endif
}

TEST_CASE("reductions on known arrays") {
  const double v[5] = {1.0, -2.0, 3.0, -4.0, 0.5};
  CHECK(simd::sum_abs(v, 5) == doctest::Approx(10.5));
  CHECK(simd::max_abs(v, 5) == doctest::Approx(4.0));
  CHECK(simd::dot(v, v, 5) == doctest::Approx(1 + 4 + 9 + 16 + 0.25));
  CHECK(simd::sum_abs(v, 0) == 0.0);
  CHECK(simd::max_abs(v, 0) == 0.0);
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 variants agree with scalar when available") {
  if (!simd::has_avx2()) return;
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 67);
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);
    CHECK(simd::avx2::dot(a.data(), b.data(), n) ==
          doctest::Approx(simd::scalar::dot(a.data(), b.data(), n)).epsilon(1e-12));
    CHECK(simd::avx2::sum_abs(a.data(), n) ==
          doctest::Approx(simd::scalar::sum_abs(a.data(), n)).epsilon(1e-13));
    CHECK(simd::avx2::max_abs(a.data(), n) == simd::scalar::max_abs(a.data(), n));
  }
}
#endif
