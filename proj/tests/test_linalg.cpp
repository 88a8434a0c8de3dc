#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pptcost/linalg.hpp"

using namespace pptcost;

namespace {

HermitianOperator random_hermitian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = cplx(dist(rng), dist(rng));
  return HermitianOperator::from_matrix(m + adjoint(m), 1e-8);
}

double hs_inner(const ComplexMatrix& x, const ComplexMatrix& y) {
  double s = 0.0;
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) s += std::real(std::conj(x.at(i, j)) * y.at(i, j));
  return s;
}

}  // namespace

TEST_CASE("kron closed forms") {
  ComplexMatrix x(2, 2), y(2, 2);
  x.at(0, 0) = 1.0;
  x.at(0, 1) = 2.0;
  x.at(1, 0) = 3.0;
  x.at(1, 1) = 4.0;
  y.at(0, 0) = 0.0;
  y.at(0, 1) = 5.0;
  y.at(1, 0) = 6.0;
  y.at(1, 1) = 7.0;
  const ComplexMatrix k = kron(x, y);
  REQUIRE(k.rows == 4);
  CHECK(k.at(0, 1) == cplx(5.0));
  CHECK(k.at(1, 0) == cplx(6.0));
  CHECK(k.at(0, 3) == cplx(10.0));
  CHECK(k.at(3, 3) == cplx(28.0));
  CHECK(k.at(2, 1) == cplx(15.0));

  const ComplexMatrix i6 = kron(ComplexMatrix::identity(2), ComplexMatrix::identity(3));
  CHECK(frobenius_norm(i6 - ComplexMatrix::identity(6)) == doctest::Approx(0.0));
}

TEST_CASE("partial transpose is an involution preserving trace and inner product") {
  std::mt19937_64 rng(31337);
  const BipartiteShape shape{2, 3};
  for (int trial = 0; trial < 50; ++trial) {
    const HermitianOperator h = random_hermitian(rng, shape.total());
    const HermitianOperator g = partial_transpose(h, shape);
    const HermitianOperator gg = partial_transpose(g, shape);
    CHECK(frobenius_norm(gg.matrix - h.matrix) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::real(trace(g.matrix)) == doctest::Approx(std::real(trace(h.matrix))));
    const HermitianOperator h2 = random_hermitian(rng, shape.total());
    const HermitianOperator g2 = partial_transpose(h2, shape);
    CHECK(hs_inner(g.matrix, g2.matrix) == doctest::Approx(hs_inner(h.matrix, h2.matrix)));
  }
}

TEST_CASE("partial transpose of the two-qubit maximally entangled state") {
  // |phi><phi| with |phi> = (|00> + |11>)/sqrt(2); eigenvalues of the partial
  // transpose are {-1/2, 1/2, 1/2, 1/2}
  ComplexMatrix m(4, 4);
  m.at(0, 0) = m.at(0, 3) = m.at(3, 0) = m.at(3, 3) = 0.5;
  const HermitianOperator phi = HermitianOperator::from_matrix(m);
  const HermitianOperator pt = partial_transpose(phi, BipartiteShape{2, 2});
  const EigResult eig = eig_hermitian(pt);
  REQUIRE(eig.eigenvalues.size() == 4);
  CHECK(eig.eigenvalues[0] == doctest::Approx(-0.5));
  CHECK(eig.eigenvalues[1] == doctest::Approx(0.5));
  CHECK(eig.eigenvalues[3] == doctest::Approx(0.5));
  CHECK(trace_norm(pt) == doctest::Approx(2.0));
}

TEST_CASE("eigendecomposition reconstructs the operator and sums to the trace") {
  std::mt19937_64 rng(99);
  for (int n : {1, 2, 5, 8}) {
    const HermitianOperator h = random_hermitian(rng, n);
    const EigResult eig = eig_hermitian(h);
    double sum = 0.0;
    for (double l : eig.eigenvalues) sum += l;
    CHECK(sum == doctest::Approx(std::real(trace(h.matrix))).epsilon(1e-10));

    ComplexMatrix recon(n, n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          recon.at(i, j) +=
              eig.eigenvalues[k] * eig.eigenvectors.at(i, k) * std::conj(eig.eigenvectors.at(j, k));
    CHECK(frobenius_norm(recon - h.matrix) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("absolute value dominates the operator on both sides") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 25; ++trial) {
    const HermitianOperator h = random_hermitian(rng, 5);
    const HermitianOperator ah = abs_hermitian(h);
    CHECK(is_psd(HermitianOperator::from_matrix(ah.matrix - h.matrix, 1e-8)));
    CHECK(is_psd(HermitianOperator::from_matrix(ah.matrix + h.matrix, 1e-8)));
    CHECK(std::real(trace(ah.matrix)) == doctest::Approx(trace_norm(h)).epsilon(1e-10));
    // |H| is the minimizer of Tr S over -S <= H <= S, so any feasible S has
    // larger trace; S = ||H|| I is feasible
    const double lmax = std::max(std::fabs(min_eigenvalue(h)),
                                 std::fabs(eig_hermitian(h).eigenvalues.back()));
    CHECK(trace_norm(h) <= 5 * lmax + 1e-9);
  }
}

TEST_CASE("entrywise product of the all-ones matrix with a mask is not PSD") {
  // A = all-ones 3x3 (PSD), mask Q = [[1,0,1],[0,1,1],[1,1,1]]; the entrywise
  // product has minimum eigenvalue 1 - sqrt(2) < 0
  ComplexMatrix a(3, 3), q(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a.at(i, j) = 1.0;
  q.at(0, 0) = q.at(1, 1) = q.at(2, 2) = 1.0;
  q.at(0, 2) = q.at(2, 0) = q.at(1, 2) = q.at(2, 1) = 1.0;
  const ComplexMatrix prod = hadamard(q, a);
  const HermitianOperator h = HermitianOperator::from_matrix(prod);
  CHECK(min_eigenvalue(h) == doctest::Approx(1.0 - std::sqrt(2.0)));
  CHECK_FALSE(is_psd(h));
}

TEST_CASE("hermitian repair and rejection") {
  ComplexMatrix m(2, 2);
  m.at(0, 0) = 1.0;
  m.at(0, 1) = cplx(0.0, 1.0);
  m.at(1, 0) = cplx(0.0, -1.0);
  m.at(1, 1) = 2.0;
  CHECK(hermiticity_defect(m) == doctest::Approx(0.0));
  CHECK_NOTHROW(HermitianOperator::from_matrix(m));

  m.at(1, 0) = cplx(0.5, -1.0);  // now clearly non-Hermitian
  CHECK(hermiticity_defect(m) > 0.1);
  CHECK_THROWS_AS(HermitianOperator::from_matrix(m), ValidationError);
  // small defects are silently symmetrized
  m.at(1, 0) = cplx(1e-13, -1.0);
  const HermitianOperator h = HermitianOperator::from_matrix(m);
  CHECK(hermiticity_defect(h.matrix) == doctest::Approx(0.0));
}

TEST_CASE("finiteness and dimension guards") {
  ComplexMatrix m(2, 2);
  m.at(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(check_finite(m), ValidationError);
  const HermitianOperator h = HermitianOperator::identity(4);
  CHECK_THROWS_AS(partial_transpose(h, BipartiteShape{2, 3}), DimensionError);
  ComplexMatrix a(2, 3), b(2, 2);
  CHECK_THROWS_AS(a * b, DimensionError);
}

TEST_CASE("matmul and adjoint basics") {
  std::mt19937_64 rng(4242);
  const HermitianOperator h = random_hermitian(rng, 4);
  const EigResult eig = eig_hermitian(h);
  // V^dagger V = I for the eigenvector matrix
  const ComplexMatrix vhv = adjoint(eig.eigenvectors) * eig.eigenvectors;
  CHECK(frobenius_norm(vhv - ComplexMatrix::identity(4)) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(max_abs_entry(ComplexMatrix::zero(3, 3)) == 0.0);
}
