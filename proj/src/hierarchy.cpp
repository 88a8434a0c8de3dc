#include "pptcost/hierarchy.hpp"

#include <cmath>
#include <cstdio>

namespace pptcost {

namespace {

const double kLn2 = std::log(2.0);

struct EqTerm {
  int block;
  double coeff;
  bool gamma;  // apply the partial transpose to this block's variable
};

// Emit the scalar functionals of the Hermitian matrix equation
//   sum_t coeff_t * (G?)(X_{b_t}) = rhs
// (rhs == nullptr means zero). One Re functional per r <= c, one Im
// functional per r < c.
void add_matrix_equation(ConicProgram& prog, int D, const BipartiteShape& shape,
                         const std::vector<EqTerm>& terms, const ComplexMatrix* rhs) {
  for (int r = 0; r < D; ++r)
    for (int c = r; c < D; ++c) {
      ConicProgram::Constraint re;
      for (const auto& t : terms) {
        SparseHermitian a(D);
        a.add(r, c, (r == c) ? t.coeff : 0.5 * t.coeff);
        if (t.gamma) a = a.transpose_b(shape);
        re.terms.emplace_back(t.block, std::move(a));
      }
      re.rhs = rhs ? rhs->at(r, c).real() : 0.0;
      prog.add_constraint(std::move(re));
      if (r != c) {
        ConicProgram::Constraint im;
        for (const auto& t : terms) {
          SparseHermitian a(D);
          a.add(r, c, cplx(0.0, 0.5 * t.coeff));
          if (t.gamma) a = a.transpose_b(shape);
          im.terms.emplace_back(t.block, std::move(a));
        }
        im.rhs = rhs ? rhs->at(r, c).imag() : 0.0;
        prog.add_constraint(std::move(im));
      }
    }
}

SparseHermitian half_identity(int D) {
  SparseHermitian a(D);
  for (int i = 0; i < D; ++i) a.add(i, i, 0.5);
  return a;
}

ComplexMatrix scaled_identity(int D, double s) {
  ComplexMatrix m(D, D);
  for (int i = 0; i < D; ++i) m.at(i, i) = s;
  return m;
}

double spectral_bound(const ComplexMatrix& h) {
  const auto eig = eig_hermitian(HermitianOperator::from_matrix(h, 1e-8));
  double s = 0.0;
  for (double l : eig.eigenvalues) s = std::max(s, std::fabs(l));
  return s;
}

std::string blk(const char* prefix, int i, const char* suffix = "") {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%02d%s", prefix, i, suffix);
  return buf;
}

void require_optimal(const ConicSolution& sol, const char* what) {
  if (sol.status == SolveStatus::optimal) return;
  const char* why = sol.status == SolveStatus::infeasible_detected
                        ? "infeasibility detected (numerical failure: hierarchy programs are "
                          "always feasible)"
                        : "iteration cap reached";
  throw SolverError(std::string(what) + ": " + why + " (gap=" + std::to_string(sol.gap) +
                    ", residual=" + std::to_string(sol.residual) + ")");
}

}  // namespace

double log_negativity(const DensityMatrix& rho) {
  return std::log2(trace_norm(partial_transpose(rho.op, rho.shape)));
}

// --- primal builders -------------------------------------------------------
//
// chi_p: min Tr S_p over chains -S_i <= S_{i-1}^G <= S_i (S_{-1} = rho).
// Variable blocks are the slack pairs P_i = S_i - S_{i-1}^G >= 0 and
// M_i = S_i + S_{i-1}^G >= 0, chained by
//   M_0 - P_0 = 2 rho^G,   M_i - P_i = (P_{i-1} + M_{i-1})^G  (i >= 1).
// kappa_q additionally carries G = S_{q-1}^G >= 0.

ConicProgram build_chi_program(const DensityMatrix& rho, int p) {
  const int D = rho.shape.total();
  const ComplexMatrix rg = partial_transpose(rho.op, rho.shape).matrix;
  ConicProgram prog;
  std::vector<int> bm(p + 1), bp(p + 1);
  for (int i = 0; i <= p; ++i) {
    bm[i] = prog.add_block(blk("s", i, "_minus"), D);
    bp[i] = prog.add_block(blk("s", i, "_plus"), D);
  }
  prog.objective[bm[p]] = half_identity(D);
  prog.objective[bp[p]] = half_identity(D);
  {
    const ComplexMatrix rhs0 = 2.0 * rg;
    add_matrix_equation(prog, D, rho.shape, {{bp[0], 1.0, false}, {bm[0], -1.0, false}}, &rhs0);
  }
  for (int i = 1; i <= p; ++i) {
    add_matrix_equation(prog, D, rho.shape,
                        {{bp[i], 1.0, false},
                         {bm[i], -1.0, false},
                         {bm[i - 1], -1.0, true},
                         {bp[i - 1], -1.0, true}},
                        nullptr);
  }
  // strictly feasible chain S_i = s(i+1) I with s above the spectral radius
  // of rho^G
  const double s = 2.0 * spectral_bound(rg) + 1.0;
  prog.initial_primal.resize(prog.blocks.size());
  prog.initial_primal[bm[0]] = scaled_identity(D, s) - rg;
  prog.initial_primal[bp[0]] = scaled_identity(D, s) + rg;
  for (int i = 1; i <= p; ++i) {
    prog.initial_primal[bm[i]] = scaled_identity(D, s);
    prog.initial_primal[bp[i]] = scaled_identity(D, s * (2 * i + 1));
  }
  prog.meta.present = true;
  prog.meta.p = p;
  prog.meta.shape = rho.shape;
  prog.meta.rho_pt = rg;
  return prog;
}

ConicProgram build_kappa_program(const DensityMatrix& rho, int q) {
  const int D = rho.shape.total();
  const ComplexMatrix rg = partial_transpose(rho.op, rho.shape).matrix;
  ConicProgram prog;
  const int bg = prog.add_block("gam", D);
  std::vector<int> bm(q), bp(q);
  for (int i = 0; i < q; ++i) {
    bm[i] = prog.add_block(blk("s", i, "_minus"), D);
    bp[i] = prog.add_block(blk("s", i, "_plus"), D);
  }
  prog.objective[bm[q - 1]] = half_identity(D);
  prog.objective[bp[q - 1]] = half_identity(D);
  {
    const ComplexMatrix rhs0 = 2.0 * rg;
    add_matrix_equation(prog, D, rho.shape, {{bp[0], 1.0, false}, {bm[0], -1.0, false}}, &rhs0);
  }
  for (int i = 1; i < q; ++i) {
    add_matrix_equation(prog, D, rho.shape,
                        {{bp[i], 1.0, false},
                         {bm[i], -1.0, false},
                         {bm[i - 1], -1.0, true},
                         {bp[i - 1], -1.0, true}},
                        nullptr);
  }
  // G = S_{q-1}^G >= 0
  add_matrix_equation(prog, D, rho.shape,
                      {{bg, 2.0, false}, {bm[q - 1], -1.0, true}, {bp[q - 1], -1.0, true}},
                      nullptr);
  const double s = 2.0 * spectral_bound(rg) + 1.0;
  prog.initial_primal.resize(prog.blocks.size());
  prog.initial_primal[bg] = scaled_identity(D, s * q);
  prog.initial_primal[bm[0]] = scaled_identity(D, s) - rg;
  prog.initial_primal[bp[0]] = scaled_identity(D, s) + rg;
  for (int i = 1; i < q; ++i) {
    prog.initial_primal[bm[i]] = scaled_identity(D, s);
    prog.initial_primal[bp[i]] = scaled_identity(D, s * (2 * i + 1));
  }
  return prog;
}

// --- dual builders ---------------------------------------------------------
//
// chi_p dual (reduced form, p >= 1): max Tr[rho^G (V_0 - W_0)] over
// V_i, W_i >= 0 chained by V_i + W_i = (V_{i+1} - W_{i+1})^G with terminal
// -1 <= (V_{p-1} + W_{p-1})^G <= 1, written as a minimization of the negated
// objective with explicit slack blocks for the two terminal bounds.

ConicProgram build_chi_dual_program(const DensityMatrix& rho, int p) {
  if (p < 1) throw ValidationError("chi_dual: level p must be >= 1");
  const int D = rho.shape.total();
  const ComplexMatrix rg = partial_transpose(rho.op, rho.shape).matrix;
  ConicProgram prog;
  const int bum = prog.add_block("u_minus", D);
  const int bup = prog.add_block("u_plus", D);
  std::vector<int> bv(p), bw(p);
  for (int i = 0; i < p; ++i) bv[i] = prog.add_block(blk("v", i), D);
  for (int i = 0; i < p; ++i) bw[i] = prog.add_block(blk("w", i), D);
  prog.objective[bv[0]] = SparseHermitian::from_dense(cplx(-1.0) * rg);
  prog.objective[bw[0]] = SparseHermitian::from_dense(rg);
  for (int i = 0; i + 1 < p; ++i) {
    add_matrix_equation(prog, D, rho.shape,
                        {{bv[i], 1.0, false},
                         {bw[i], 1.0, false},
                         {bv[i + 1], -1.0, true},
                         {bw[i + 1], 1.0, true}},
                        nullptr);
  }
  const ComplexMatrix one = ComplexMatrix::identity(D);
  add_matrix_equation(prog, D, rho.shape,
                      {{bv[p - 1], 1.0, true}, {bw[p - 1], 1.0, true}, {bup, 1.0, false}}, &one);
  add_matrix_equation(prog, D, rho.shape,
                      {{bv[p - 1], -1.0, true}, {bw[p - 1], -1.0, true}, {bum, 1.0, false}}, &one);
  prog.initial_primal.resize(prog.blocks.size());
  for (int i = 0; i < p; ++i) {
    const double a = std::pow(3.0, -(p - i + 1));
    prog.initial_primal[bv[i]] = scaled_identity(D, 2.0 * a);
    prog.initial_primal[bw[i]] = scaled_identity(D, a);
  }
  prog.initial_primal[bup] = scaled_identity(D, 2.0 / 3.0);
  prog.initial_primal[bum] = scaled_identity(D, 4.0 / 3.0);
  return prog;
}

ConicProgram build_kappa_dual_program(const DensityMatrix& rho, int q) {
  if (q < 1) throw ValidationError("kappa_dual: level q must be >= 1");
  const int D = rho.shape.total();
  const ComplexMatrix rg = partial_transpose(rho.op, rho.shape).matrix;
  ConicProgram prog;
  const int bu = prog.add_block("u_slack", D);
  std::vector<int> bv(q), bw(q);
  for (int i = 0; i < q; ++i) bv[i] = prog.add_block(blk("v", i), D);
  for (int i = 0; i < q; ++i) bw[i] = prog.add_block(blk("w", i), D);
  prog.objective[bv[0]] = SparseHermitian::from_dense(cplx(-1.0) * rg);
  prog.objective[bw[0]] = SparseHermitian::from_dense(rg);
  for (int i = 0; i + 1 < q; ++i) {
    add_matrix_equation(prog, D, rho.shape,
                        {{bv[i], 1.0, false},
                         {bw[i], 1.0, false},
                         {bv[i + 1], -1.0, true},
                         {bw[i + 1], 1.0, true}},
                        nullptr);
  }
  const ComplexMatrix one = ComplexMatrix::identity(D);
  add_matrix_equation(prog, D, rho.shape,
                      {{bv[q - 1], 1.0, true}, {bw[q - 1], 1.0, true}, {bu, 1.0, false}}, &one);
  prog.initial_primal.resize(prog.blocks.size());
  for (int i = 0; i < q; ++i) {
    const double a = std::pow(3.0, -(q - i)) / 2.0;
    prog.initial_primal[bv[i]] = scaled_identity(D, 2.0 * a);
    prog.initial_primal[bw[i]] = scaled_identity(D, a);
  }
  prog.initial_primal[bu] = scaled_identity(D, 0.5);
  return prog;
}

// --- evaluators ------------------------------------------------------------

ChiCertificate chi(const DensityMatrix& rho, int p, const SolverConfig& config) {
  if (p < 0) throw ValidationError("chi: level p must be >= 0");
  validate_density(rho);
  ChiCertificate cert;
  cert.p = p;
  if (rho.shape.min_local() == 1) {
    // product cut: rho^G is PSD, every level collapses to chi = 1
    const HermitianOperator rg = partial_transpose(rho.op, rho.shape);
    for (int i = 0; i <= p; ++i) cert.chain.push_back(i % 2 == 0 ? rg : rho.op);
    cert.value = 1.0;
    cert.log_value = 0.0;
    return cert;
  }
  const ConicProgram prog = build_chi_program(rho, p);
  const ConicSolution sol = solve(prog, config);
  require_optimal(sol, "chi");
  for (int i = 0; i <= p; ++i) {
    const ComplexMatrix s =
        0.5 * (sol.primal_blocks[2 * i].matrix + sol.primal_blocks[2 * i + 1].matrix);
    cert.chain.push_back(HermitianOperator::from_matrix(s, 1e-6));
  }
  cert.value = std::real(trace(cert.chain.back().matrix));
  cert.log_value = std::log2(cert.value);
  cert.gap = sol.gap;
  cert.residual = sol.residual;
  cert.iterations = sol.iterations;
  return cert;
}

KappaCertificate kappa(const DensityMatrix& rho, int q, const SolverConfig& config) {
  if (q < 1) throw ValidationError("kappa: level q must be >= 1");
  validate_density(rho);
  KappaCertificate cert;
  cert.q = q;
  if (rho.shape.min_local() == 1) {
    const HermitianOperator rg = partial_transpose(rho.op, rho.shape);
    for (int i = 0; i < q; ++i) cert.chain.push_back(i % 2 == 0 ? rg : rho.op);
    cert.value = 1.0;
    cert.log_value = 0.0;
    return cert;
  }
  const ConicProgram prog = build_kappa_program(rho, q);
  const ConicSolution sol = solve(prog, config);
  require_optimal(sol, "kappa");
  for (int i = 0; i < q; ++i) {
    const ComplexMatrix s =
        0.5 * (sol.primal_blocks[1 + 2 * i].matrix + sol.primal_blocks[2 + 2 * i].matrix);
    cert.chain.push_back(HermitianOperator::from_matrix(s, 1e-6));
  }
  cert.value = std::real(trace(cert.chain.back().matrix));
  cert.log_value = std::log2(cert.value);
  cert.gap = sol.gap;
  cert.residual = sol.residual;
  cert.iterations = sol.iterations;
  return cert;
}

namespace {

DualCertificate extract_dual(const ConicSolution& sol, const ComplexMatrix& rg, int nvw,
                             int first_v) {
  DualCertificate cert;
  for (int i = 0; i < nvw; ++i) cert.v.push_back(sol.primal_blocks[first_v + i]);
  for (int i = 0; i < nvw; ++i) cert.w.push_back(sol.primal_blocks[first_v + nvw + i]);
  // certified bound Tr[rho (V_0 - W_0)^G] = <rho^G, V_0 - W_0>
  cert.value = SparseHermitian::from_dense(rg).inner(cert.v[0].matrix - cert.w[0].matrix);
  cert.gap = sol.gap;
  cert.residual = sol.residual;
  cert.iterations = sol.iterations;
  return cert;
}

}  // namespace

DualCertificate chi_dual(const DensityMatrix& rho, int p, const SolverConfig& config) {
  validate_density(rho);
  if (rho.shape.min_local() == 1) {
    DualCertificate cert;
    const int D = rho.shape.total();
    // V_0 = 1, W_0 = 0 certifies chi_p >= Tr[rho^G] = 1
    for (int i = 0; i < p; ++i) {
      cert.v.push_back(HermitianOperator::identity(D));
      cert.w.push_back(HermitianOperator::zero(D));
    }
    cert.value = 1.0;
    return cert;
  }
  const ConicProgram prog = build_chi_dual_program(rho, p);
  const ConicSolution sol = solve(prog, config);
  require_optimal(sol, "chi_dual");
  const ComplexMatrix rg = partial_transpose(rho.op, rho.shape).matrix;
  return extract_dual(sol, rg, p, 2);
}

DualCertificate kappa_dual(const DensityMatrix& rho, int q, const SolverConfig& config) {
  validate_density(rho);
  if (rho.shape.min_local() == 1) {
    DualCertificate cert;
    const int D = rho.shape.total();
    for (int i = 0; i < q; ++i) {
      cert.v.push_back(HermitianOperator::identity(D));
      cert.w.push_back(HermitianOperator::zero(D));
    }
    cert.value = 1.0;
    return cert;
  }
  const ConicProgram prog = build_kappa_dual_program(rho, q);
  const ConicSolution sol = solve(prog, config);
  require_optimal(sol, "kappa_dual");
  const ComplexMatrix rg = partial_transpose(rho.op, rho.shape).matrix;
  return extract_dual(sol, rg, q, 1);
}

// --- closed-form bounds and the bracketing algorithm -----------------------

double convergence_gap(int d, int p) {
  if (d < 2) throw ValidationError("convergence_gap: d must be >= 2");
  if (p < 1) throw ValidationError("convergence_gap: p must be >= 1");
  if (d == 2) return 0.0;
  const double t = std::pow(1.0 - 2.0 / d, p);
  return -std::log1p(-t) / kLn2;
}

int required_level(int d, double epsilon) {
  if (d < 2) throw ValidationError("required_level: d must be >= 2");
  if (!(epsilon > 0.0)) throw ValidationError("required_level: epsilon must be > 0");
  if (d == 2) return 1;
  const double num = std::log2(2.0 * d / epsilon);
  const double den = -std::log2(1.0 - 2.0 / d);
  const int p = static_cast<int>(std::ceil(num / den - 1e-9));
  return p < 1 ? 1 : p;
}

CostEstimate ppt_cost(const DensityMatrix& rho, double epsilon, const SolverConfig& config,
                      int kappa_mode) {
  if (!(epsilon > 0.0)) throw ValidationError("ppt_cost: epsilon must be > 0");
  validate_density(rho);
  CostEstimate est;
  est.epsilon = epsilon;
  const int d = rho.shape.min_local();
  if (d == 1) return est;  // product cut: cost exactly 0
  const int p = required_level(d, epsilon);
  est.level_used = p;
  SolverConfig cfg = config;
  cfg.gap_tol = std::min(config.gap_tol, epsilon * kLn2 / 2.0);
  const ChiCertificate c = chi(rho, p, cfg);
  const DualCertificate cd = chi_dual(rho, p, cfg);
  est.lower_bits = std::max(0.0, std::log2(cd.value));  // chi_p >= 1 always
  est.upper_bits = c.log_value + convergence_gap(d, p);
  est.residual = std::max(c.residual, cd.residual);
  est.iterations = c.iterations + cd.iterations;
  const bool with_kappa =
      kappa_mode == 1 || (kappa_mode == 0 && rho.shape.total() <= 36);
  if (with_kappa) {
    const KappaCertificate k = kappa(rho, p, cfg);
    est.upper_bits = std::min(est.upper_bits, k.log_value);
    est.residual = std::max(est.residual, k.residual);
    est.iterations += k.iterations;
  }
  est.point_estimate = 0.5 * (est.lower_bits + est.upper_bits);
  return est;
}

DmaxResult dmax_ppt(const HermitianOperator& t, const BipartiteShape& shape,
                    const SolverConfig& config) {
  if (t.dim != shape.total()) throw DimensionError("dmax_ppt: operator does not match shape");
  if (min_eigenvalue(t) < -config.feas_tol) {
    throw ValidationError("dmax_ppt: input operator is not PSD");
  }
  const int D = shape.total();
  ConicProgram prog;
  const int bl = prog.add_block("ell", D);       // L >= 0
  const int bg = prog.add_block("ell_gam", D);   // L^G >= 0
  const int bs = prog.add_block("ell_slk", D);   // L - T >= 0
  for (int i = 0; i < D; ++i) prog.objective[bl].add(i, i, 1.0);
  add_matrix_equation(prog, D, shape, {{bl, 1.0, false}, {bs, -1.0, false}}, &t.matrix);
  add_matrix_equation(prog, D, shape, {{bl, 1.0, true}, {bg, -1.0, false}}, nullptr);
  const double c = 2.0 * spectral_bound(t.matrix) + 1.0;
  prog.initial_primal.resize(prog.blocks.size());
  prog.initial_primal[bl] = scaled_identity(D, c);
  prog.initial_primal[bg] = scaled_identity(D, c);
  prog.initial_primal[bs] = scaled_identity(D, c) - t.matrix;
  const ConicSolution sol = solve(prog, config);
  require_optimal(sol, "dmax_ppt");
  DmaxResult res;
  res.value = sol.primal_value;
  res.certificate = sol.primal_blocks[bl];
  const double bound = shape.min_local() * std::real(trace(t.matrix));
  if (res.value > bound + 1e-6) {
    throw NumericalError("dmax_ppt: value " + std::to_string(res.value) +
                         " exceeds the d*Tr T bound " + std::to_string(bound));
  }
  return res;
}

double continuity_bound(int d, double trace_distance) {
  if (d < 1) throw ValidationError("continuity_bound: d must be >= 1");
  if (trace_distance < 0.0 || trace_distance > 1.0) {
    throw ValidationError("continuity_bound: trace distance must be in [0,1]");
  }
  return std::log1p(2.0 * d * trace_distance) / kLn2;
}

}  // namespace pptcost
