#pragma once

#include <cstddef>

// Small data-parallel kernels on packed double arrays. Each kernel has a
// scalar reference implementation and (on x86-64) an AVX2 variant; the
// top-level entry points dispatch at runtime based on CPU support. Complex
// arrays are interleaved (re, im) pairs.

namespace pptcost::simd {

bool has_avx2();

double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
void hadamard_cplx(const double* a, const double* b, double* out, std::size_t n_cplx);
double sum_abs(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
void hadamard_cplx(const double* a, const double* b, double* out, std::size_t n_cplx);
double sum_abs(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
void hadamard_cplx(const double* a, const double* b, double* out, std::size_t n_cplx);
double sum_abs(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);
}  // namespace avx2
#endif

}  // namespace pptcost::simd
