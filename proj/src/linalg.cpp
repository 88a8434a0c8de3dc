#include "pptcost/linalg.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <cmath>

#include "pptcost/simd/kernels.hpp"

namespace pptcost {

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

namespace {
void require_same_dims(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows != b.rows || a.cols != b.cols) {
    throw DimensionError(std::string(op) + ": dimension mismatch " + std::to_string(a.rows) + "x" +
                         std::to_string(a.cols) + " vs " + std::to_string(b.rows) + "x" +
                         std::to_string(b.cols));
  }
}
}  // namespace

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dims(a, b, "add");
  ComplexMatrix r = a;
  simd::axpy(1.0, reinterpret_cast<const double*>(b.entries.data()),
             reinterpret_cast<double*>(r.entries.data()), 2 * b.entries.size());
  return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dims(a, b, "sub");
  ComplexMatrix r = a;
  simd::axpy(-1.0, reinterpret_cast<const double*>(b.entries.data()),
             reinterpret_cast<double*>(r.entries.data()), 2 * b.entries.size());
  return r;
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& a) {
  ComplexMatrix r = a;
  if (s.imag() == 0.0) {
    simd::scale(s.real(), reinterpret_cast<double*>(r.entries.data()), 2 * r.entries.size());
  } else {
    for (auto& e : r.entries) e *= s;
  }
  return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols != b.rows) throw DimensionError("matmul: inner dimension mismatch");
  ComplexMatrix r(a.rows, b.cols);
  const cplx one = 1.0, zero = 0.0;
  cblas_zgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, a.rows, b.cols, a.cols, &one,
              a.entries.data(), a.cols, b.entries.data(), b.cols, &zero, r.entries.data(), r.cols);
  return r;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix r(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) r.at(j, i) = std::conj(a.at(i, j));
  return r;
}

cplx trace(const ComplexMatrix& a) {
  if (a.rows != a.cols) throw DimensionError("trace: matrix not square");
  cplx t = 0.0;
  for (int i = 0; i < a.rows; ++i) t += a.at(i, i);
  return t;
}

double frobenius_norm(const ComplexMatrix& a) {
  const double* d = reinterpret_cast<const double*>(a.entries.data());
  return std::sqrt(simd::dot(d, d, 2 * a.entries.size()));
}

double max_abs_entry(const ComplexMatrix& a) {
  double m = 0.0;
  for (const auto& e : a.entries) m = std::max(m, std::abs(e));
  return m;
}

void check_finite(const ComplexMatrix& a) {
  for (const auto& e : a.entries) {
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
      throw ValidationError("matrix contains non-finite entries");
    }
  }
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows != m.cols) throw DimensionError("hermiticity_defect: matrix not square");
  double dev = 0.0;
  for (int i = 0; i < m.rows; ++i)
    for (int j = i; j < m.cols; ++j) dev = std::max(dev, std::abs(m.at(i, j) - std::conj(m.at(j, i))));
  return dev;
}

HermitianOperator HermitianOperator::from_matrix(const ComplexMatrix& m, double herm_tol) {
  if (m.rows != m.cols) throw DimensionError("HermitianOperator: matrix not square");
  check_finite(m);
  const double dev = hermiticity_defect(m);
  if (dev > herm_tol * std::max(1.0, max_abs_entry(m))) {
    throw ValidationError("HermitianOperator: Hermiticity deviation " + std::to_string(dev) +
                          " above tolerance");
  }
  HermitianOperator h;
  h.dim = m.rows;
  h.matrix = ComplexMatrix(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) h.matrix.at(i, j) = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
  return h;
}

HermitianOperator HermitianOperator::identity(int n) {
  HermitianOperator h;
  h.dim = n;
  h.matrix = ComplexMatrix::identity(n);
  return h;
}

HermitianOperator HermitianOperator::zero(int n) {
  HermitianOperator h;
  h.dim = n;
  h.matrix = ComplexMatrix(n, n);
  return h;
}

ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
  ComplexMatrix r(x.rows * y.rows, x.cols * y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) {
      const cplx s = x.at(i, j);
      if (s == cplx(0.0)) continue;
      for (int k = 0; k < y.rows; ++k)
        for (int l = 0; l < y.cols; ++l) r.at(i * y.rows + k, j * y.cols + l) = s * y.at(k, l);
    }
  return r;
}

HermitianOperator partial_transpose(const HermitianOperator& x, const BipartiteShape& shape) {
  if (x.dim != shape.total()) {
    throw DimensionError("partial_transpose: operator dim " + std::to_string(x.dim) +
                         " != " + std::to_string(shape.dim_a) + "*" + std::to_string(shape.dim_b));
  }
  const int da = shape.dim_a, db = shape.dim_b;
  HermitianOperator r;
  r.dim = x.dim;
  r.matrix = ComplexMatrix(x.dim, x.dim);
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < db; ++b)
      for (int a2 = 0; a2 < da; ++a2)
        for (int b2 = 0; b2 < db; ++b2)
          r.matrix.at(a * db + b2, a2 * db + b) = x.matrix.at(a * db + b, a2 * db + b2);
  return r;
}

EigResult eig_hermitian(const HermitianOperator& h) {
  const int n = h.dim;
  EigResult res;
  res.eigenvalues.resize(n);
  res.eigenvectors = h.matrix;
  const lapack_int info = LAPACKE_zheev(
      LAPACK_ROW_MAJOR, 'V', 'U', n,
      reinterpret_cast<lapack_complex_double*>(res.eigenvectors.entries.data()), n,
      res.eigenvalues.data());
  if (info != 0) {
    throw NumericalError("eig_hermitian: zheev failed to converge (info=" + std::to_string(info) + ")");
  }
  return res;
}

double trace_norm(const HermitianOperator& h) {
  const auto eig = eig_hermitian(h);
  return simd::sum_abs(eig.eigenvalues.data(), eig.eigenvalues.size());
}

HermitianOperator abs_hermitian(const HermitianOperator& h) {
  const auto eig = eig_hermitian(h);
  const int n = h.dim;
  // V |diag| V^dagger
  ComplexMatrix scaled = eig.eigenvectors;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scaled.at(i, j) *= std::fabs(eig.eigenvalues[j]);
  return HermitianOperator::from_matrix(scaled * adjoint(eig.eigenvectors), 1e-8);
}

ComplexMatrix hadamard(const ComplexMatrix& x, const ComplexMatrix& y) {
  require_same_dims(x, y, "hadamard");
  ComplexMatrix r(x.rows, x.cols);
  simd::hadamard_cplx(reinterpret_cast<const double*>(x.entries.data()),
                      reinterpret_cast<const double*>(y.entries.data()),
                      reinterpret_cast<double*>(r.entries.data()), x.entries.size());
  return r;
}

double min_eigenvalue(const HermitianOperator& h) {
  return eig_hermitian(h).eigenvalues.front();
}

bool is_psd(const HermitianOperator& h, double tol) { return min_eigenvalue(h) >= -tol; }

}  // namespace pptcost
