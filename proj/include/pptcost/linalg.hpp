#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

// Dense complex-Hermitian matrix kernel: tensor products, partial transpose,
// spectral functions and norms. Everything here is a pure function on
// immutable inputs; matrices are row-major.

namespace pptcost {

using cplx = std::complex<double>;

struct DimensionError : std::runtime_error {
  explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ComplexMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<cplx> entries;  // row-major, rows*cols

  ComplexMatrix() = default;
  ComplexMatrix(int r, int c) : rows(r), cols(c), entries(static_cast<size_t>(r) * c) {}

  cplx& at(int r, int c) { return entries[static_cast<size_t>(r) * cols + c]; }
  const cplx& at(int r, int c) const { return entries[static_cast<size_t>(r) * cols + c]; }

  static ComplexMatrix identity(int n);
  static ComplexMatrix zero(int r, int c) { return ComplexMatrix(r, c); }
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, const ComplexMatrix& a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);  // zgemm
ComplexMatrix adjoint(const ComplexMatrix& a);
cplx trace(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);
double max_abs_entry(const ComplexMatrix& a);
void check_finite(const ComplexMatrix& a);

// Hermitian deviation max_ij |M - M^dagger|_ij
double hermiticity_defect(const ComplexMatrix& m);

struct HermitianOperator {
  int dim = 0;
  ComplexMatrix matrix;

  // Symmetrizes (M + M^dagger)/2; deviation above herm_tol (relative to the
  // largest entry magnitude) is an error, below is silently repaired.
  static HermitianOperator from_matrix(const ComplexMatrix& m, double herm_tol = 1e-10);
  static HermitianOperator identity(int n);
  static HermitianOperator zero(int n);
};

struct BipartiteShape {
  int dim_a = 1;
  int dim_b = 1;

  int total() const { return dim_a * dim_b; }
  int min_local() const { return dim_a < dim_b ? dim_a : dim_b; }
};

struct EigResult {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns are eigenvectors
};

ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y);
HermitianOperator partial_transpose(const HermitianOperator& x, const BipartiteShape& shape);
EigResult eig_hermitian(const HermitianOperator& h);
double trace_norm(const HermitianOperator& h);
HermitianOperator abs_hermitian(const HermitianOperator& h);
ComplexMatrix hadamard(const ComplexMatrix& x, const ComplexMatrix& y);
double min_eigenvalue(const HermitianOperator& h);
bool is_psd(const HermitianOperator& h, double tol = 1e-8);

}  // namespace pptcost
