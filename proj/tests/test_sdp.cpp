#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "pptcost/hierarchy.hpp"
#include "pptcost/sdp.hpp"
#include "pptcost/states.hpp"

using namespace pptcost;

namespace {

// min Tr (P+Q)/2 subject to P - Q = 2Y, P, Q >= 0; the optimal value is the
// trace norm of Y
ConicProgram trace_norm_program(const HermitianOperator& y) {
  const int n = y.dim;
  ConicProgram prog;
  const int bp = prog.add_block("p", n);
  const int bq = prog.add_block("q", n);
  for (int i = 0; i < n; ++i) {
    prog.objective[bp].add(i, i, 0.5);
    prog.objective[bq].add(i, i, 0.5);
  }
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c) {
      const cplx v = y.matrix.at(r, c);
      {
        ConicProgram::Constraint con;
        SparseHermitian ap(n), aq(n);
        if (r == c) {
          ap.add(r, r, 1.0);
          aq.add(r, r, -1.0);
        } else {
          ap.add(r, c, 0.5);
          aq.add(r, c, -0.5);
        }
        con.terms.emplace_back(bp, std::move(ap));
        con.terms.emplace_back(bq, std::move(aq));
        con.rhs = 2.0 * v.real();
        prog.add_constraint(std::move(con));
      }
      if (r != c) {
        ConicProgram::Constraint con;
        SparseHermitian ap(n), aq(n);
        ap.add(r, c, cplx(0.0, 0.5));
        aq.add(r, c, cplx(0.0, -0.5));
        con.terms.emplace_back(bp, std::move(ap));
        con.terms.emplace_back(bq, std::move(aq));
        con.rhs = 2.0 * v.imag();
        prog.add_constraint(std::move(con));
      }
    }
  return prog;
}

double replay_residual(const ConicProgram& prog, const ConicSolution& sol) {
  double worst = 0.0;
  for (const auto& con : prog.constraints) {
    double lhs = 0.0;
    for (const auto& [b, a] : con.terms) lhs += a.inner(sol.primal_blocks[b].matrix);
    worst = std::max(worst, std::fabs(lhs - con.rhs));
  }
  return worst;
}

}  // namespace

TEST_CASE("sparse hermitian storage round-trips and evaluates inner products") {
  SparseHermitian a(3);
  a.add(0, 0, 2.0);
  a.add(1, 0, cplx(1.0, -1.0));  // normalized to (0,1) with conjugated value
  a.add(1, 2, cplx(0.0, 0.5));
  const ComplexMatrix d = a.dense();
  CHECK(d.at(0, 1) == cplx(1.0, 1.0));
  CHECK(d.at(1, 0) == cplx(1.0, -1.0));
  CHECK(d.at(2, 1) == cplx(0.0, -0.5));

  const SparseHermitian b = SparseHermitian::from_dense(d);
  CHECK(frobenius_norm(b.dense() - d) == doctest::Approx(0.0));

  // <A, X> equals the dense Hilbert-Schmidt inner product
  std::mt19937_64 rng(8);
  std::normal_distribution<double> dist;
  ComplexMatrix x(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      x.at(i, j) = (i == j) ? cplx(dist(rng)) : cplx(dist(rng), dist(rng));
      x.at(j, i) = std::conj(x.at(i, j));
    }
  double exact = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) exact += std::real(std::conj(d.at(i, j)) * x.at(i, j));
  CHECK(a.inner(x) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("transpose_b pulls a functional through the partial transpose") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> dist;
  const BipartiteShape shape{2, 3};
  ComplexMatrix x(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j) {
      x.at(i, j) = (i == j) ? cplx(dist(rng)) : cplx(dist(rng), dist(rng));
      x.at(j, i) = std::conj(x.at(i, j));
    }
  const HermitianOperator hx = HermitianOperator::from_matrix(x);
  const HermitianOperator hg = partial_transpose(hx, shape);
  for (int trial = 0; trial < 20; ++trial) {
    SparseHermitian a(6);
    a.add(static_cast<int>(rng() % 6), static_cast<int>(rng() % 6), cplx(dist(rng), dist(rng)));
    CHECK(a.inner(hg.matrix) ==
          doctest::Approx(a.transpose_b(shape).inner(hx.matrix)).epsilon(1e-12));
  }
}

TEST_CASE("trace norm SDP with real data solves to the known value") {
  ComplexMatrix y(2, 2);
  y.at(0, 0) = 1.0;
  y.at(1, 1) = -1.0;
  const ConicProgram prog = trace_norm_program(HermitianOperator::from_matrix(y));
  const ConicSolution sol = solve(prog);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.primal_value == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(sol.dual_value == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(sol.gap <= 1e-7);
}

TEST_CASE("trace norm SDP with complex data exercises the embedding") {
  // Pauli Y has purely imaginary off-diagonal entries and trace norm 2
  ComplexMatrix y(2, 2);
  y.at(0, 1) = cplx(0.0, -1.0);
  y.at(1, 0) = cplx(0.0, 1.0);
  const ConicProgram prog = trace_norm_program(HermitianOperator::from_matrix(y));
  const ConicSolution sol = solve(prog);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.primal_value == doctest::Approx(2.0).epsilon(1e-7));
  // the recovered complex block satisfies P - Q = 2Y
  const ComplexMatrix diff = sol.primal_blocks[0].matrix - sol.primal_blocks[1].matrix;
  CHECK(frobenius_norm(diff - (cplx(2.0) * y)) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("weak duality and replayable certificates on random trace-norm instances") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> dist;
  SolverConfig cfg;
  for (int trial = 0; trial < 10; ++trial) {
    ComplexMatrix y(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        y.at(i, j) = (i == j) ? cplx(dist(rng)) : cplx(dist(rng), dist(rng));
        y.at(j, i) = std::conj(y.at(i, j));
      }
    const HermitianOperator hy = HermitianOperator::from_matrix(y);
    const ConicProgram prog = trace_norm_program(hy);
    const ConicSolution sol = solve(prog, cfg);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.primal_value == doctest::Approx(trace_norm(hy)).epsilon(1e-6));
    CHECK(sol.dual_value <= sol.primal_value + 10 * cfg.gap_tol);
    CHECK(replay_residual(prog, sol) <= 10 * cfg.feas_tol);
    for (const auto& block : sol.primal_blocks) CHECK(is_psd(block, 1e-6));
  }
}

TEST_CASE("solver output is bitwise deterministic") {
  const DensityMatrix rho = random_density(BipartiteShape{2, 3}, 6, 11);
  const ConicProgram prog = build_chi_program(rho, 1);
  const ConicSolution a = solve(prog);
  const ConicSolution b = solve(prog);
  CHECK(std::memcmp(&a.primal_value, &b.primal_value, sizeof(double)) == 0);
  CHECK(std::memcmp(&a.dual_value, &b.dual_value, sizeof(double)) == 0);
  CHECK(a.iterations == b.iterations);
  for (size_t k = 0; k < a.primal_blocks.size(); ++k) {
    CHECK(frobenius_norm(a.primal_blocks[k].matrix - b.primal_blocks[k].matrix) == 0.0);
  }
}

TEST_CASE("an infeasible program does not report optimal") {
  ConicProgram prog;
  const int b = prog.add_block("x", 1);
  prog.objective[b].add(0, 0, 1.0);
  ConicProgram::Constraint con;
  SparseHermitian a(1);
  a.add(0, 0, 1.0);
  con.terms.emplace_back(b, std::move(a));
  con.rhs = -1.0;  // x >= 0 and x = -1 cannot both hold
  prog.add_constraint(std::move(con));
  SolverConfig cfg;
  cfg.max_iters = 60;
  const ConicSolution sol = solve(prog, cfg);
  CHECK(sol.status != SolveStatus::optimal);
}

TEST_CASE("standard form of the level-0 program solves to the trace norm") {
  const DensityMatrix phi2 = max_entangled(2);
  const ConicProgram block_form = build_chi_program(phi2, 0);
  const ConicProgram std_form = standard_form(block_form);
  REQUIRE(std_form.blocks.size() == 1);
  CHECK(std_form.blocks[0].dim == 2 * 4);
  const ConicSolution sol = solve(std_form);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.primal_value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("standard form constraint count and objective support") {
  const DensityMatrix rho = random_density(BipartiteShape{2, 2}, 4, 3);
  const int p = 1, d_total = 4;
  const ConicProgram std_form = standard_form(build_chi_program(rho, p));
  // (p+1)(p+3) D^2 equality constraints on a single block of size 2(p+1)D
  CHECK(static_cast<int>(std_form.constraints.size()) == (p + 1) * (p + 3) * d_total * d_total);
  CHECK(std_form.blocks[0].dim == 2 * (p + 1) * d_total);
  // objective touches only the last super-block diagonal
  for (const auto& e : std_form.objective[0].entries) {
    CHECK(e.r == e.c);
    CHECK(e.r >= 2 * d_total * p);
  }
}

TEST_CASE("standard form agrees with the block form") {
  SolverConfig cfg;
  for (int p = 0; p <= 2; ++p) {
    const DensityMatrix rho = random_density(BipartiteShape{2, 2}, 4, 17 + p);
    const ConicProgram block_form = build_chi_program(rho, p);
    const ConicProgram std_form = standard_form(block_form);
    const ConicSolution a = solve(block_form, cfg);
    const ConicSolution b = solve(std_form, cfg);
    REQUIRE(a.status == SolveStatus::optimal);
    REQUIRE(b.status == SolveStatus::optimal);
    CHECK(std::fabs(a.primal_value - b.primal_value) <= 20 * cfg.gap_tol);
  }
  // one larger instance
  const DensityMatrix rho = random_density(BipartiteShape{3, 3}, 9, 29);
  const ConicProgram block_form = build_chi_program(rho, 1);
  const ConicSolution a = solve(block_form, cfg);
  const ConicSolution b = solve(standard_form(block_form), cfg);
  CHECK(std::fabs(a.primal_value - b.primal_value) <= 20 * cfg.gap_tol);
}

TEST_CASE("standard form requires hierarchy metadata") {
  ConicProgram prog;
  prog.add_block("x", 2);
  CHECK_THROWS_AS(standard_form(prog), ValidationError);
}

TEST_CASE("solver input validation") {
  ConicProgram prog;
  const int b = prog.add_block("x", 2);
  ConicProgram::Constraint con;
  SparseHermitian a(3);  // wrong dimension for the block
  a.add(0, 0, 1.0);
  con.terms.emplace_back(b, std::move(a));
  con.rhs = 1.0;
  prog.add_constraint(std::move(con));
  CHECK_THROWS_AS(solve(prog), ValidationError);
}
