#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pptcost/linalg.hpp"

// Constructors, validators and serialization for bipartite density matrices,
// including the punch-card family and bi-negativity diagnostics.

namespace pptcost {

struct DensityMatrix {
  HermitianOperator op;
  BipartiteShape shape;
};

// Validation tolerances: PSD within -1e-8, unit trace within 1e-9.
void validate_density(const DensityMatrix& rho);
DensityMatrix make_density(const HermitianOperator& op, const BipartiteShape& shape);

struct PunchCardSpec {
  HermitianOperator a;  // d x d, PSD
  ComplexMatrix q;      // d x d symmetric 0/1 mask with unit diagonal
};
void validate_punch_card_spec(const PunchCardSpec& spec);

DensityMatrix pure_from_schmidt(const std::vector<double>& lambdas, const BipartiteShape& shape);
DensityMatrix max_entangled(int d);
DensityMatrix punch_card(const PunchCardSpec& spec);

// The A_0, Q_0 instance: A_0 = all-ones 3x3, Q_0 = [[1,0,1],[0,1,1],[1,1,1]].
PunchCardSpec punch_card_pi0_spec();

// min eigenvalue of |rho^G|^G; zero bi-negativity iff >= -1e-8
double binegativity_defect(const DensityMatrix& rho);

// n-fold power with B indices grouped so the n-copy partial transpose is G on
// all B factors. max_dim caps the resulting total dimension.
DensityMatrix tensor_power(const DensityMatrix& rho, int n, int max_dim = 256);

DensityMatrix random_density(const BipartiteShape& shape, int rank, std::uint64_t seed);

// State file: structured text with dim_a, dim_b, matrix_real, matrix_imag
// (row-major D x D arrays); writers emit 17 significant digits.
void write_state_file(const std::string& path, const DensityMatrix& rho);
DensityMatrix read_state_file(const std::string& path);

}  // namespace pptcost
