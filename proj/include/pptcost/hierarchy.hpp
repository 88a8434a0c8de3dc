#pragma once

#include <vector>

#include "pptcost/sdp.hpp"
#include "pptcost/states.hpp"

// Builders and evaluators for the chi- and kappa-hierarchies, the measures
// E_N and E_kappa, the convergence bounds, and the certified cost bracketing.
// All values are reported both linearly (chi_p, kappa_q) and in bits (log2).

namespace pptcost {

struct ChiCertificate {
  int p = 0;
  std::vector<HermitianOperator> chain;  // S_0 .. S_p
  double value = 0.0;                    // chi_p(rho)
  double log_value = 0.0;                // E_{chi,p}(rho) in bits
  double gap = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

struct KappaCertificate {
  int q = 1;
  std::vector<HermitianOperator> chain;  // S_0 .. S_{q-1}
  double value = 0.0;
  double log_value = 0.0;
  double gap = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

struct DualCertificate {
  std::vector<HermitianOperator> v;  // V_0 .. V_k
  std::vector<HermitianOperator> w;  // W_0 .. W_k
  double value = 0.0;                // certified lower bound on chi_p / kappa_q
  double gap = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

struct CostEstimate {
  double epsilon = 0.0;
  int level_used = 0;
  double lower_bits = 0.0;
  double upper_bits = 0.0;
  double point_estimate = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

double log_negativity(const DensityMatrix& rho);

ChiCertificate chi(const DensityMatrix& rho, int p, const SolverConfig& config = {});
DualCertificate chi_dual(const DensityMatrix& rho, int p, const SolverConfig& config = {});
KappaCertificate kappa(const DensityMatrix& rho, int q, const SolverConfig& config = {});
DualCertificate kappa_dual(const DensityMatrix& rho, int q, const SolverConfig& config = {});

double convergence_gap(int d, int p);
int required_level(int d, double epsilon);

// kappa_mode: 0 = auto (on for total dimension <= 36), 1 = always, 2 = never
CostEstimate ppt_cost(const DensityMatrix& rho, double epsilon, const SolverConfig& config = {},
                      int kappa_mode = 0);

struct DmaxResult {
  double value = 0.0;
  HermitianOperator certificate;  // the optimal L
};
DmaxResult dmax_ppt(const HermitianOperator& t, const BipartiteShape& shape,
                    const SolverConfig& config = {});

double continuity_bound(int d, double trace_distance);

// program builders (also consumed by standard_form and its tests)
ConicProgram build_chi_program(const DensityMatrix& rho, int p);
ConicProgram build_kappa_program(const DensityMatrix& rho, int q);
ConicProgram build_chi_dual_program(const DensityMatrix& rho, int p);
ConicProgram build_kappa_dual_program(const DensityMatrix& rho, int q);

}  // namespace pptcost
