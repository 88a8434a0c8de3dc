#include <cblas.h>
#include <lapacke.h>
#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#endif

#include <algorithm>
#include <cmath>
#include <vector>

#include "pptcost/sdp.hpp"
#include "pptcost/simd/kernels.hpp"

// NT-scaled primal-dual path-following interior-point method with adaptive
// (Mehrotra-style) centering. The complex program is either reduced directly
// to real symmetric blocks (when all data is real) or run through the
// embed_complex transformation first.

namespace pptcost {

namespace {

constexpr double kRealTol = 1e-13;

struct RSparse {
  // symmetric sparse: entry (r, c, v) with r <= c stands for A_rc = A_cr = v
  struct E {
    int r, c;
    double v;
  };
  std::vector<E> e;
};

struct RealProgram {
  std::vector<int> bdim;
  std::vector<RSparse> obj;
  double offset = 0.0;
  struct Term {
    int b;
    RSparse a;
  };
  struct Con {
    std::vector<Term> terms;
    double rhs = 0.0;
  };
  std::vector<Con> cons;
  std::vector<int> orig_index;             // original constraint index per kept row
  std::vector<std::vector<double>> init;   // dense n x n per block, may be empty
};

// True when the program can be restricted to real symmetric blocks without
// changing its value: objective and warm start entrywise real, and every
// constraint functional either entrywise real or entrywise pure imaginary
// with zero right-hand side. In the latter case conjugation symmetry makes
// (X + conj X)/2 optimal whenever X is, so the pure-imaginary rows vanish
// identically on the restricted cone and can be dropped.
bool program_is_real(const ConicProgram& p) {
  auto classify = [](const SparseHermitian& a) {
    int cls = 0;  // bit 0: has real entries, bit 1: has imaginary entries
    for (const auto& e : a.entries) {
      if (std::fabs(e.v.real()) > kRealTol) cls |= 1;
      if (std::fabs(e.v.imag()) > kRealTol) cls |= 2;
    }
    return cls;
  };
  for (const auto& o : p.objective)
    if (classify(o) & 2) return false;
  for (const auto& c : p.constraints) {
    int cls = 0;
    for (const auto& [b, a] : c.terms) cls |= classify(a);
    if (cls == 3) return false;                            // real/imaginary mix
    if (cls == 2 && std::fabs(c.rhs) > 1e-10) return false;
  }
  for (const auto& x : p.initial_primal)
    for (const auto& e : x.entries)
      if (std::fabs(e.imag()) > kRealTol) return false;
  return true;
}

RSparse realify_sparse(const SparseHermitian& a) {
  RSparse out;
  for (const auto& e : a.entries)
    if (std::fabs(e.v.real()) > 1e-15) out.e.push_back({e.r, e.c, e.v.real()});
  return out;
}

RealProgram realify(const ConicProgram& p) {
  RealProgram rp;
  for (const auto& b : p.blocks) rp.bdim.push_back(b.dim);
  for (const auto& o : p.objective) rp.obj.push_back(realify_sparse(o));
  rp.offset = p.objective_offset;
  for (size_t j = 0; j < p.constraints.size(); ++j) {
    RealProgram::Con c;
    c.rhs = p.constraints[j].rhs;
    for (const auto& [b, a] : p.constraints[j].terms) {
      RSparse ra = realify_sparse(a);
      if (!ra.e.empty()) c.terms.push_back({b, std::move(ra)});
    }
    if (c.terms.empty()) {
      // functional vanishes on real symmetric matrices (pure imaginary part)
      if (std::fabs(c.rhs) > 1e-10) {
        throw SolverError("solve: constraint " + std::to_string(j) + " is infeasible (0 = " +
                          std::to_string(c.rhs) + ")");
      }
      continue;
    }
    rp.cons.push_back(std::move(c));
    rp.orig_index.push_back(static_cast<int>(j));
  }
  for (const auto& x : p.initial_primal) {
    std::vector<double> d(static_cast<size_t>(x.rows) * x.cols);
    for (int i = 0; i < x.rows; ++i)
      for (int k = 0; k < x.cols; ++k)
        d[static_cast<size_t>(i) * x.cols + k] =
            0.5 * (x.at(i, k).real() + x.at(k, i).real());
    rp.init.push_back(std::move(d));
  }
  return rp;
}

// --- small dense helpers on row-major full-storage symmetric matrices ------

using Mat = std::vector<double>;

double sinner(const RSparse& a, const Mat& x, int n) {
  double s = 0.0;
  for (const auto& e : a.e) {
    s += (e.r == e.c) ? e.v * x[static_cast<size_t>(e.r) * n + e.r]
                      : 2.0 * e.v * x[static_cast<size_t>(e.r) * n + e.c];
  }
  return s;
}

void saccum(const RSparse& a, double w, Mat& x, int n) {
  for (const auto& e : a.e) {
    x[static_cast<size_t>(e.r) * n + e.c] += w * e.v;
    if (e.r != e.c) x[static_cast<size_t>(e.c) * n + e.r] += w * e.v;
  }
}

void gemm(const Mat& a, const Mat& b, Mat& c, int n) {
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, n, n, n, 1.0, a.data(), n, b.data(), n,
              0.0, c.data(), n);
}

void symmetrize(Mat& a, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (a[static_cast<size_t>(i) * n + j] + a[static_cast<size_t>(j) * n + i]);
      a[static_cast<size_t>(i) * n + j] = v;
      a[static_cast<size_t>(j) * n + i] = v;
    }
}

// lower Cholesky factor in place (upper part zeroed); false on failure
bool chol(Mat& a, int n) {
  if (LAPACKE_dpotrf(LAPACK_ROW_MAJOR, 'L', n, a.data(), n) != 0) return false;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) a[static_cast<size_t>(i) * n + j] = 0.0;
  return true;
}

void eigs_sym(const Mat& a, int n, std::vector<double>& w, Mat& v) {
  v = a;
  w.resize(n);
  if (LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'V', 'U', n, v.data(), n, w.data()) != 0) {
    throw NumericalError("solve: dsyev failed to converge");
  }
}

double min_eig_sym(Mat a, int n) {
  std::vector<double> w(n);
  if (LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'N', 'U', n, a.data(), n, w.data()) != 0) {
    throw NumericalError("solve: dsyev failed to converge");
  }
  return w[0];
}

struct BlockWork {
  int n = 0;
  Mat x, z, w, zinv, rd, dx, dz, lx, lz, t1, t2;
};

// W = Lx (Lx^T Z Lx)^{-1/2} Lx^T  (NT scaling point)
void compute_nt(BlockWork& bw) {
  const int n = bw.n;
  bw.lx = bw.x;
  if (!chol(bw.lx, n)) throw NumericalError("solve: primal iterate lost positive definiteness");
  gemm(bw.z, bw.lx, bw.t1, n);  // t1 = Z Lx
  cblas_dgemm(CblasRowMajor, CblasTrans, CblasNoTrans, n, n, n, 1.0, bw.lx.data(), n,
              bw.t1.data(), n, 0.0, bw.t2.data(), n);  // t2 = Lx^T Z Lx
  symmetrize(bw.t2, n);
  std::vector<double> ev;
  Mat q;
  eigs_sym(bw.t2, n, ev, q);
  if (ev[0] <= 0.0) throw NumericalError("solve: dual iterate lost positive definiteness");
  // t2 = q diag(ev^{-1/2}) q^T
  Mat qs = q;
  for (int i = 0; i < n; ++i) {
    const double s = 1.0 / std::sqrt(std::sqrt(ev[i]));  // split for symmetry
    for (int r = 0; r < n; ++r) qs[static_cast<size_t>(r) * n + i] *= s;
  }
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, n, n, n, 1.0, qs.data(), n, qs.data(), n,
              0.0, bw.t2.data(), n);
  gemm(bw.lx, bw.t2, bw.t1, n);  // t1 = Lx B^{-1/2}
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, n, n, n, 1.0, bw.t1.data(), n,
              bw.lx.data(), n, 0.0, bw.w.data(), n);
  symmetrize(bw.w, n);
}

void compute_zinv(BlockWork& bw) {
  const int n = bw.n;
  bw.zinv = bw.z;
  if (LAPACKE_dpotrf(LAPACK_ROW_MAJOR, 'L', n, bw.zinv.data(), n) != 0 ||
      LAPACKE_dpotri(LAPACK_ROW_MAJOR, 'L', n, bw.zinv.data(), n) != 0) {
    throw NumericalError("solve: dual iterate lost positive definiteness");
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      bw.zinv[static_cast<size_t>(i) * n + j] = bw.zinv[static_cast<size_t>(j) * n + i];
}

// largest alpha with X + alpha D >= 0, given the Cholesky factor of X
double max_step(const Mat& l, const Mat& d, int n) {
  Mat t = d;
  cblas_dtrsm(CblasRowMajor, CblasLeft, CblasLower, CblasNoTrans, CblasNonUnit, n, n, 1.0,
              l.data(), n, t.data(), n);
  cblas_dtrsm(CblasRowMajor, CblasRight, CblasLower, CblasTrans, CblasNonUnit, n, n, 1.0,
              l.data(), n, t.data(), n);
  symmetrize(t, n);
  const double lmin = min_eig_sym(std::move(t), n);
  if (lmin >= -1e-14) return 1e16;
  return -1.0 / lmin;
}

struct SchurWorkspace {
  // per block: flattened constraint entry lists for fast pair loops
  struct BlockCons {
    std::vector<int> con;           // Schur row index
    std::vector<int> off;           // offsets into flat entries (size con+1)
    std::vector<RSparse::E> flat;
  };
  std::vector<BlockCons> per_block;
};

SchurWorkspace build_schur_workspace(const RealProgram& rp) {
  SchurWorkspace ws;
  ws.per_block.resize(rp.bdim.size());
  for (auto& bc : ws.per_block) bc.off.push_back(0);
  for (size_t j = 0; j < rp.cons.size(); ++j) {
    for (const auto& t : rp.cons[j].terms) {
      auto& bc = ws.per_block[t.b];
      bc.con.push_back(static_cast<int>(j));
      bc.flat.insert(bc.flat.end(), t.a.e.begin(), t.a.e.end());
      bc.off.push_back(static_cast<int>(bc.flat.size()));
    }
  }
  return ws;
}

// M_{jk} += <A_j, W A_k W> accumulated block by block (lower triangle)
void form_schur(const SchurWorkspace& ws, const std::vector<BlockWork>& blocks, Mat& m,
                int mdim) {
  std::fill(m.begin(), m.end(), 0.0);
  for (size_t b = 0; b < ws.per_block.size(); ++b) {
    const auto& bc = ws.per_block[b];
    const double* w = blocks[b].w.data();
    const int n = blocks[b].n;
    const size_t ncons = bc.con.size();
    for (size_t i = 0; i < ncons; ++i) {
      const int ji = bc.con[i];
      const RSparse::E* e1 = bc.flat.data() + bc.off[i];
      const int n1 = bc.off[i + 1] - bc.off[i];
      for (size_t k = 0; k <= i; ++k) {
        const int jk = bc.con[k];
        const RSparse::E* e2 = bc.flat.data() + bc.off[k];
        const int n2 = bc.off[k + 1] - bc.off[k];
        double acc = 0.0;
        for (int a = 0; a < n1; ++a) {
          const int r = e1[a].r, c = e1[a].c;
          const double u = e1[a].v;
          const double* wr = w + static_cast<size_t>(r) * n;
          const double* wc = w + static_cast<size_t>(c) * n;
          for (int d = 0; d < n2; ++d) {
            const int s = e2[d].r, t = e2[d].c;
            double base = wc[s] * wr[t];
            if (s != t) base += wc[t] * wr[s];
            if (r != c) {
              base += wr[s] * wc[t];
              if (s != t) base += wr[t] * wc[s];
            }
            acc += u * e2[d].v * base;
          }
        }
        if (ji >= jk) {
          m[static_cast<size_t>(ji) * mdim + jk] += acc;
        } else {
          m[static_cast<size_t>(jk) * mdim + ji] += acc;
        }
      }
    }
  }
  // mirror to full storage
  for (int i = 0; i < mdim; ++i)
    for (int j = i + 1; j < mdim; ++j)
      m[static_cast<size_t>(i) * mdim + j] = m[static_cast<size_t>(j) * mdim + i];
}

struct RealSolution {
  SolveStatus status;
  double primal_value, dual_value, gap, residual;
  std::vector<Mat> x;
  std::vector<double> y;
  int iterations;
};

RealSolution solve_real(const RealProgram& rp, const SolverConfig& cfg) {
#if defined(__x86_64__) || defined(_M_X64)
  // flush denormals: Schur matrices routinely carry harmless subnormal
  // entries that would otherwise stall the factorization
  const unsigned int old_csr = _mm_getcsr();
  _mm_setcsr(old_csr | 0x8040);  // FTZ | DAZ
  struct CsrGuard {
    unsigned int v;
    ~CsrGuard() { _mm_setcsr(v); }
  } guard{old_csr};
#endif
  const int nb = static_cast<int>(rp.bdim.size());
  const int m = static_cast<int>(rp.cons.size());
  double rmax = 0.0, cmax = 0.0;
  for (const auto& c : rp.cons) rmax = std::max(rmax, std::fabs(c.rhs));
  for (const auto& o : rp.obj)
    for (const auto& e : o.e) cmax = std::max(cmax, std::fabs(e.v));

  std::vector<BlockWork> blocks(nb);
  int ntot = 0;
  for (int b = 0; b < nb; ++b) {
    auto& bw = blocks[b];
    bw.n = rp.bdim[b];
    ntot += bw.n;
    const size_t sz = static_cast<size_t>(bw.n) * bw.n;
    for (Mat* mm :
         {&bw.x, &bw.z, &bw.w, &bw.zinv, &bw.rd, &bw.dx, &bw.dz, &bw.lx, &bw.lz, &bw.t1, &bw.t2})
      mm->assign(sz, 0.0);
    // initial primal: supplied interior point (shifted if needed) or a
    // scaled identity
    if (!rp.init.empty()) {
      bw.x = rp.init[b];
      symmetrize(bw.x, bw.n);
      const double lmin = min_eig_sym(bw.x, bw.n);
      if (lmin < 1e-6) {
        for (int i = 0; i < bw.n; ++i) bw.x[static_cast<size_t>(i) * bw.n + i] += 1e-3 - lmin;
      }
    } else {
      const double xi = std::max(1.0, rmax);
      for (int i = 0; i < bw.n; ++i) bw.x[static_cast<size_t>(i) * bw.n + i] = xi;
    }
    const double zi = std::max(1.0, cmax);
    for (int i = 0; i < bw.n; ++i) bw.z[static_cast<size_t>(i) * bw.n + i] = zi;
  }

  std::vector<double> y(m, 0.0), dy(m), dy_aff(m), rpvec(m), rhs(m);
  SchurWorkspace ws = build_schur_workspace(rp);
  Mat schur(static_cast<size_t>(m) * m);
  Mat schur_fac(static_cast<size_t>(m) * m);

  auto apply_a = [&](auto&& get_block, std::vector<double>& out) {
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (const auto& t : rp.cons[j].terms) s += sinner(t.a, get_block(t.b), blocks[t.b].n);
      out[j] = s;
    }
  };

  RealSolution best;
  best.status = SolveStatus::iteration_cap;
  best.gap = 1e300;
  int iter = 0;

  for (; iter < cfg.max_iters; ++iter) {
    // residuals, objective values, duality gap
    apply_a([&](int b) -> const Mat& { return blocks[b].x; }, rpvec);
    double rp_norm = 0.0;
    for (int j = 0; j < m; ++j) {
      rpvec[j] = rp.cons[j].rhs - rpvec[j];
      rp_norm = std::max(rp_norm, std::fabs(rpvec[j]));
    }
    double pobj = rp.offset, dobj = rp.offset, mu = 0.0, xmax = 0.0;
    for (int b = 0; b < nb; ++b) {
      pobj += sinner(rp.obj[b], blocks[b].x, blocks[b].n);
      mu += simd::dot(blocks[b].x.data(), blocks[b].z.data(), blocks[b].x.size());
      xmax = std::max(xmax, simd::max_abs(blocks[b].x.data(), blocks[b].x.size()));
    }
    mu /= std::max(1, ntot);
    for (int j = 0; j < m; ++j) dobj += rp.cons[j].rhs * y[j];
    // dual residual Rd = C - Z - A^T y
    double rd_norm = 0.0;
    for (int b = 0; b < nb; ++b) {
      auto& bw = blocks[b];
      std::fill(bw.rd.begin(), bw.rd.end(), 0.0);
      saccum(rp.obj[b], 1.0, bw.rd, bw.n);
      simd::axpy(-1.0, bw.z.data(), bw.rd.data(), bw.rd.size());
    }
    for (int j = 0; j < m; ++j)
      for (const auto& t : rp.cons[j].terms) saccum(t.a, -y[j], blocks[t.b].rd, blocks[t.b].n);
    for (int b = 0; b < nb; ++b)
      rd_norm = std::max(rd_norm, simd::max_abs(blocks[b].rd.data(), blocks[b].rd.size()));

    const double gap = std::fabs(pobj - dobj);
    if (gap < best.gap + 1e-15 && rp_norm <= 10.0 * cfg.feas_tol && rd_norm <= 10.0 * cfg.feas_tol) {
      best.primal_value = pobj;
      best.dual_value = dobj;
      best.gap = gap;
      best.residual = std::max(rp_norm, rd_norm);
      best.x.resize(nb);
      for (int b = 0; b < nb; ++b) best.x[b] = blocks[b].x;
      best.y = y;
    }
    if (rp_norm <= cfg.feas_tol && rd_norm <= cfg.feas_tol && gap <= cfg.gap_tol) {
      best.status = SolveStatus::optimal;
      best.primal_value = pobj;
      best.dual_value = dobj;
      best.gap = gap;
      best.residual = std::max(rp_norm, rd_norm);
      best.x.resize(nb);
      for (int b = 0; b < nb; ++b) best.x[b] = blocks[b].x;
      best.y = y;
      break;
    }
    if (!std::isfinite(mu) || !std::isfinite(pobj) || !std::isfinite(rp_norm)) {
      throw NumericalError("solve: iterates became non-finite");
    }
    if (xmax > 1e12 || simd::max_abs(y.data(), y.size()) > 1e12) {
      best.status = SolveStatus::infeasible_detected;
      break;
    }

    // NT scaling and Schur complement
    for (int b = 0; b < nb; ++b) {
      compute_nt(blocks[b]);
      compute_zinv(blocks[b]);
    }
    form_schur(ws, blocks, schur, m);
    // Factor in column-major semantics: the matrix is stored full symmetric,
    // so the column-major view is the same matrix and LAPACKE skips its
    // row-major transpose buffer (which matters at this size).
    {
      schur_fac.assign(schur.begin(), schur.end());
      bool ok = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'U', m, schur_fac.data(), m) == 0;
      double reg = 1e-12;
      while (!ok && reg <= 1e-6) {
        schur_fac.assign(schur.begin(), schur.end());
        for (int i = 0; i < m; ++i) schur_fac[static_cast<size_t>(i) * m + i] += reg;
        ok = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'U', m, schur_fac.data(), m) == 0;
        reg *= 100.0;
      }
      if (!ok) throw NumericalError("solve: Schur complement factorization failed");
    }
    auto schur_solve = [&](const std::vector<double>& b_in, std::vector<double>& out) {
      out = b_in;
      LAPACKE_dpotrs(LAPACK_COL_MAJOR, 'U', m, 1, schur_fac.data(), m, out.data(), m);
    };

    // common pieces: t1 holds W Rd W per block
    for (int b = 0; b < nb; ++b) {
      auto& bw = blocks[b];
      gemm(bw.w, bw.rd, bw.t2, bw.n);
      gemm(bw.t2, bw.w, bw.t1, bw.n);
      symmetrize(bw.t1, bw.n);
    }
    std::vector<double> a_wrdw(m), a_zinv(m);
    apply_a([&](int b) -> const Mat& { return blocks[b].t1; }, a_wrdw);
    apply_a([&](int b) -> const Mat& { return blocks[b].zinv; }, a_zinv);

    auto build_direction = [&](double sigmu, std::vector<double>& dy_out) {
      for (int j = 0; j < m; ++j) rhs[j] = rp.cons[j].rhs - sigmu * a_zinv[j] + a_wrdw[j];
      schur_solve(rhs, dy_out);
      for (int b = 0; b < nb; ++b) {
        auto& bw = blocks[b];
        // dZ = Rd - A^T dy ; dX = sigmu Zinv - X - W dZ W
        bw.dz = bw.rd;
        // reuse t2 as A^T dy accumulator
        std::fill(bw.t2.begin(), bw.t2.end(), 0.0);
      }
      for (int j = 0; j < m; ++j)
        for (const auto& t : rp.cons[j].terms)
          saccum(t.a, dy_out[j], blocks[t.b].t2, blocks[t.b].n);
      for (int b = 0; b < nb; ++b) {
        auto& bw = blocks[b];
        simd::axpy(-1.0, bw.t2.data(), bw.dz.data(), bw.dz.size());
        gemm(bw.w, bw.dz, bw.t2, bw.n);
        gemm(bw.t2, bw.w, bw.dx, bw.n);
        symmetrize(bw.dx, bw.n);
        simd::scale(-1.0, bw.dx.data(), bw.dx.size());
        simd::axpy(-1.0, bw.x.data(), bw.dx.data(), bw.dx.size());
        if (sigmu != 0.0) simd::axpy(sigmu, bw.zinv.data(), bw.dx.data(), bw.dx.size());
      }
    };

    // predictor (affine) step to choose the centering parameter
    build_direction(0.0, dy_aff);
    double ap = 1e16, ad = 1e16;
    for (int b = 0; b < nb; ++b) {
      auto& bw = blocks[b];
      ap = std::min(ap, max_step(bw.lx, bw.dx, bw.n));
      bw.lz = bw.z;
      if (!chol(bw.lz, bw.n)) throw NumericalError("solve: dual iterate lost positive definiteness");
      ad = std::min(ad, max_step(bw.lz, bw.dz, bw.n));
    }
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double mu_aff = 0.0;
    for (int b = 0; b < nb; ++b) {
      auto& bw = blocks[b];
      // Tr[(X + ap dX)(Z + ad dZ)]
      const size_t sz = bw.x.size();
      mu_aff += simd::dot(bw.x.data(), bw.z.data(), sz) + ap * simd::dot(bw.dx.data(), bw.z.data(), sz) +
                ad * simd::dot(bw.x.data(), bw.dz.data(), sz) +
                ap * ad * simd::dot(bw.dx.data(), bw.dz.data(), sz);
    }
    mu_aff /= std::max(1, ntot);
    double sigma = std::pow(std::max(0.0, mu_aff) / mu, 3.0);
    sigma = std::clamp(sigma, 1e-10, 1.0);

    // centered combined step
    build_direction(sigma * mu, dy);
    ap = 1e16;
    ad = 1e16;
    for (int b = 0; b < nb; ++b) {
      auto& bw = blocks[b];
      ap = std::min(ap, max_step(bw.lx, bw.dx, bw.n));
      ad = std::min(ad, max_step(bw.lz, bw.dz, bw.n));
    }
    ap = std::min(1.0, cfg.step_fraction * ap);
    ad = std::min(1.0, cfg.step_fraction * ad);
    for (int b = 0; b < nb; ++b) {
      auto& bw = blocks[b];
      simd::axpy(ap, bw.dx.data(), bw.x.data(), bw.x.size());
      simd::axpy(ad, bw.dz.data(), bw.z.data(), bw.z.size());
    }
    simd::axpy(ad, dy.data(), y.data(), m);
  }

  best.iterations = iter;
  if (best.x.empty()) {
    // never recorded a usable iterate; report the current one
    best.x.resize(nb);
    for (int b = 0; b < nb; ++b) best.x[b] = blocks[b].x;
    best.y = y;
    apply_a([&](int b) -> const Mat& { return blocks[b].x; }, rpvec);
    double rp_norm = 0.0;
    for (int j = 0; j < m; ++j) rp_norm = std::max(rp_norm, std::fabs(rp.cons[j].rhs - rpvec[j]));
    best.residual = rp_norm;
    best.primal_value = rp.offset;
    for (int b = 0; b < nb; ++b) best.primal_value += sinner(rp.obj[b], blocks[b].x, blocks[b].n);
    best.dual_value = rp.offset;
    for (int j = 0; j < m; ++j) best.dual_value += rp.cons[j].rhs * best.y[j];
    best.gap = std::fabs(best.primal_value - best.dual_value);
  }
  return best;
}

}  // namespace

ConicSolution solve(const ConicProgram& program, const SolverConfig& config) {
  if (program.blocks.size() != program.objective.size()) {
    throw ValidationError("solve: objective does not match block list");
  }
  for (const auto& c : program.constraints) {
    for (const auto& [b, a] : c.terms) {
      if (b < 0 || b >= static_cast<int>(program.blocks.size()) || a.dim != program.blocks[b].dim) {
        throw ValidationError("solve: constraint coefficient dimension mismatch");
      }
    }
    if (!std::isfinite(c.rhs)) throw ValidationError("solve: non-finite right-hand side");
  }

  if (!program_is_real(program)) {
    ConicProgram emb = embed_complex(program);
    ConicSolution es = solve(emb, config);
    // un-embed primal blocks: X = (X11 + X22)/2 + i (X21 - X12)/2
    ConicSolution out = es;
    out.primal_blocks.clear();
    for (size_t b = 0; b < program.blocks.size(); ++b) {
      const int n = program.blocks[b].dim;
      const ComplexMatrix& e = es.primal_blocks[b].matrix;
      ComplexMatrix x(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double re = 0.5 * (e.at(i, j).real() + e.at(n + i, n + j).real());
          const double im = 0.5 * (e.at(n + i, j).real() - e.at(i, n + j).real());
          x.at(i, j) = cplx(re, im);
        }
      out.primal_blocks.push_back(HermitianOperator::from_matrix(x, 1e-6));
    }
    return out;
  }

  RealProgram rp = realify(program);
  RealSolution rs = solve_real(rp, config);
  ConicSolution out;
  out.status = rs.status;
  out.primal_value = rs.primal_value;
  out.dual_value = rs.dual_value;
  out.gap = rs.gap;
  out.residual = rs.residual;
  out.iterations = rs.iterations;
  out.dual_multipliers.assign(program.constraints.size(), 0.0);
  for (size_t k = 0; k < rp.orig_index.size(); ++k) {
    out.dual_multipliers[rp.orig_index[k]] = rs.y[k];
  }
  for (size_t b = 0; b < program.blocks.size(); ++b) {
    const int n = program.blocks[b].dim;
    ComplexMatrix x(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) x.at(i, j) = rs.x[b][static_cast<size_t>(i) * n + j];
    out.primal_blocks.push_back(HermitianOperator::from_matrix(x, 1e-6));
  }
  return out;
}

}  // namespace pptcost
