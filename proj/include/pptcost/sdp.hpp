#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pptcost/linalg.hpp"

// Self-contained solver for small dense SDPs over complex-Hermitian PSD
// blocks with linear equality constraints:
//
//   minimize    sum_b Tr[C_b X_b] + offset
//   subject to  sum_b Tr[A_{j,b} X_b] = r_j,   X_b >= 0.
//
// Coefficient matrices are Hermitian and stored sparsely: an entry (r, c, v)
// with r <= c stands for A_rc = v, A_cr = conj(v).

namespace pptcost {

struct SparseHermitian {
  int dim = 0;
  struct Entry {
    int r, c;
    cplx v;
  };
  std::vector<Entry> entries;

  explicit SparseHermitian(int d = 0) : dim(d) {}
  // Adds v at (r, c) (and implicitly conj(v) at (c, r)); normalizes r <= c.
  void add(int r, int c, cplx v);
  static SparseHermitian from_dense(const ComplexMatrix& m, double drop_tol = 0.0);
  ComplexMatrix dense() const;
  // Tr[A X] for Hermitian X (real by symmetry)
  double inner(const ComplexMatrix& x) const;
  // functional pullback through the partial transpose: <A, X^G> = <A^G, X>
  SparseHermitian transpose_b(const BipartiteShape& shape) const;
};

struct ConicProgram {
  struct Block {
    std::string name;
    int dim;
  };
  std::vector<Block> blocks;
  std::vector<SparseHermitian> objective;  // one Hermitian coefficient matrix per block
  double objective_offset = 0.0;

  struct Constraint {
    std::vector<std::pair<int, SparseHermitian>> terms;  // (block index, coefficient)
    double rhs = 0.0;
  };
  std::vector<Constraint> constraints;

  // optional strictly feasible warm start, one dense matrix per block
  std::vector<ComplexMatrix> initial_primal;

  // set by the hierarchy chi builder; consumed by standard_form
  struct HierarchyMeta {
    bool present = false;
    int p = -1;
    BipartiteShape shape{1, 1};
    ComplexMatrix rho_pt;  // rho^G, dense
  };
  HierarchyMeta meta;

  int add_block(const std::string& name, int dim);
  void add_constraint(Constraint c);
};

enum class SolveStatus { optimal, infeasible_detected, iteration_cap };

struct ConicSolution {
  SolveStatus status = SolveStatus::iteration_cap;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;       // |primal - dual|
  double residual = 0.0;  // max of primal/dual equation residuals (inf-norm)
  std::vector<HermitianOperator> primal_blocks;
  std::vector<double> dual_multipliers;
  int iterations = 0;
};

struct SolverConfig {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iters = 200;
  double step_fraction = 0.98;
};

// Real 2n x 2n symmetric embedding [[Re H, -Im H],[Im H, Re H]]/2 of every
// coefficient; optimal value is unchanged. For a program that is already
// entrywise real this reduces to block-diagonal duplication.
ConicProgram embed_complex(const ConicProgram& program);

ConicSolution solve(const ConicProgram& program, const SolverConfig& config = {});

// Single-PSD-block reformulation of a chi hierarchy program: block size
// 2(p+1)D with (p+1)(p+3)D^2 equality constraints; optimal value unchanged.
ConicProgram standard_form(const ConicProgram& program);

// Debug dump of a program as structured text (not a stability guarantee).
void dump_program(const ConicProgram& program, const std::string& path);

}  // namespace pptcost
