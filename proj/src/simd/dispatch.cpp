#include "pptcost/simd/kernels.hpp"

namespace pptcost::simd {

bool has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

#if defined(__x86_64__) || defined(_M_X64)
#define PPTCOST_DISPATCH(call) \
  if (has_avx2()) return avx2::call; \
  return scalar::call;
#else
#define PPTCOST_DISPATCH(call) return scalar::call;
#endif

double dot(const double* a, const double* b, std::size_t n) { PPTCOST_DISPATCH(dot(a, b, n)) }
void axpy(double alpha, const double* x, double* y, std::size_t n) { PPTCOST_DISPATCH(axpy(alpha, x, y, n)) }
void scale(double alpha, double* x, std::size_t n) { PPTCOST_DISPATCH(scale(alpha, x, n)) }
void hadamard_cplx(const double* a, const double* b, double* out, std::size_t n_cplx) {
  PPTCOST_DISPATCH(hadamard_cplx(a, b, out, n_cplx))
}
double sum_abs(const double* a, std::size_t n) { PPTCOST_DISPATCH(sum_abs(a, n)) }
double max_abs(const double* a, std::size_t n) { PPTCOST_DISPATCH(max_abs(a, n)) }

#undef PPTCOST_DISPATCH

}  // namespace pptcost::simd
