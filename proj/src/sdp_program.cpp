#include "pptcost/sdp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace pptcost {

void SparseHermitian::add(int r, int c, cplx v) {
  if (v == cplx(0.0)) return;
  if (r > c) {
    std::swap(r, c);
    v = std::conj(v);
  }
  if (r == c) v = cplx(v.real(), 0.0);
  entries.push_back(Entry{r, c, v});
}

SparseHermitian SparseHermitian::from_dense(const ComplexMatrix& m, double drop_tol) {
  SparseHermitian a(m.rows);
  for (int r = 0; r < m.rows; ++r)
    for (int c = r; c < m.cols; ++c) {
      const cplx v = (r == c) ? cplx(std::real(m.at(r, c)), 0.0)
                              : 0.5 * (m.at(r, c) + std::conj(m.at(c, r)));
      if (std::abs(v) > drop_tol) a.entries.push_back(Entry{r, c, v});
    }
  return a;
}

ComplexMatrix SparseHermitian::dense() const {
  ComplexMatrix m(dim, dim);
  for (const auto& e : entries) {
    m.at(e.r, e.c) += e.v;
    if (e.r != e.c) m.at(e.c, e.r) += std::conj(e.v);
  }
  return m;
}

double SparseHermitian::inner(const ComplexMatrix& x) const {
  double s = 0.0;
  for (const auto& e : entries) {
    if (e.r == e.c) {
      s += e.v.real() * std::real(x.at(e.r, e.r));
    } else {
      s += 2.0 * std::real(e.v * std::conj(x.at(e.r, e.c)));
    }
  }
  return s;
}

SparseHermitian SparseHermitian::transpose_b(const BipartiteShape& shape) const {
  if (dim != shape.total()) throw DimensionError("SparseHermitian::transpose_b: shape mismatch");
  const int db = shape.dim_b;
  SparseHermitian out(dim);
  for (const auto& e : entries) {
    const int a1 = e.r / db, b1 = e.r % db;
    const int a2 = e.c / db, b2 = e.c % db;
    out.add(a1 * db + b2, a2 * db + b1, e.v);
  }
  return out;
}

int ConicProgram::add_block(const std::string& name, int dim) {
  blocks.push_back(Block{name, dim});
  objective.emplace_back(dim);
  return static_cast<int>(blocks.size()) - 1;
}

void ConicProgram::add_constraint(Constraint c) { constraints.push_back(std::move(c)); }

namespace {

// real symmetric 2n x 2n embedding of a Hermitian functional, with the 1/2
// rescaling that keeps <A_emb, embed(X)> = <A, X>
SparseHermitian embed_functional(const SparseHermitian& a) {
  const int n = a.dim;
  SparseHermitian out(2 * n);
  for (const auto& e : a.entries) {
    const double re = 0.5 * e.v.real(), im = 0.5 * e.v.imag();
    out.add(e.r, e.c, re);
    out.add(n + e.r, n + e.c, re);
    if (im != 0.0) {
      out.add(e.r, n + e.c, -im);
      out.add(e.c, n + e.r, im);
    }
  }
  return out;
}

ComplexMatrix embed_dense(const ComplexMatrix& x) {
  const int n = x.rows;
  ComplexMatrix out(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx v = x.at(i, j);
      out.at(i, j) = v.real();
      out.at(n + i, n + j) = v.real();
      out.at(i, n + j) = -v.imag();
      out.at(n + i, j) = v.imag();
    }
  return out;
}

}  // namespace

ConicProgram embed_complex(const ConicProgram& program) {
  ConicProgram out;
  for (const auto& b : program.blocks) out.add_block(b.name, 2 * b.dim);
  for (size_t i = 0; i < program.objective.size(); ++i) {
    out.objective[i] = embed_functional(program.objective[i]);
  }
  out.objective_offset = program.objective_offset;
  for (const auto& con : program.constraints) {
    ConicProgram::Constraint c2;
    c2.rhs = con.rhs;
    for (const auto& [b, a] : con.terms) c2.terms.emplace_back(b, embed_functional(a));
    out.add_constraint(std::move(c2));
  }
  for (const auto& x : program.initial_primal) out.initial_primal.push_back(embed_dense(x));
  return out;
}

// ---------------------------------------------------------------------------
// standard_form: single PSD block of size 2(p+1)D.
//
// Layout: super-block I in [0, p] occupies rows [2D*I, 2D*I + 2D); within a
// super-block the first D rows are the H_I (= S_I) part and the last D the
// M_I part; the upper-right D x D sub-block is K_I (= S_{I-1}^G).
// Constraint groups: (1) one D x D sub-block of every off-diagonal super-block
// pair is zero, (2) H_I = M_I and K_I = K_I^dagger, (3) K_i = H_{i-1}^G for
// i = 1..p, (4) K_0 = rho^G.
// ---------------------------------------------------------------------------

namespace {

// entries realizing <A, X> = Re X_{ab} / Im X_{ab} at a global position
void add_re(SparseHermitian& a, int r, int c, double coeff) {
  if (r == c) {
    a.add(r, r, coeff);
  } else if (r < c) {
    a.add(r, c, 0.5 * coeff);
  } else {
    a.add(c, r, 0.5 * coeff);
  }
}

void add_im(SparseHermitian& a, int r, int c, double coeff) {
  if (r == c) return;  // Im of a diagonal entry of a Hermitian matrix is zero
  if (r < c) {
    a.add(r, c, cplx(0.0, 0.5 * coeff));
  } else {
    a.add(c, r, cplx(0.0, -0.5 * coeff));
  }
}

}  // namespace

ConicProgram standard_form(const ConicProgram& program) {
  if (!program.meta.present) {
    throw ValidationError("standard_form: program was not produced by a chi hierarchy builder");
  }
  const int p = program.meta.p;
  const int D = program.meta.shape.total();
  const int db = program.meta.shape.dim_b;
  const int n = 2 * (p + 1) * D;

  ConicProgram out;
  const int bx = out.add_block("x", n);
  // objective: identity/2 on the last super-block diagonal, Tr C X = Tr S_p
  for (int g = 2 * D * p; g < 2 * D * (p + 1); ++g) out.objective[bx].add(g, g, 0.5);

  auto hpos = [&](int I, int r) { return 2 * D * I + r; };      // H_I row/col r
  auto mpos = [&](int I, int r) { return 2 * D * I + D + r; };  // M_I row/col r

  auto push = [&](SparseHermitian a, double rhs) {
    ConicProgram::Constraint c;
    c.terms.emplace_back(bx, std::move(a));
    c.rhs = rhs;
    out.add_constraint(std::move(c));
  };

  // group (1): zero the H-side sub-block of each off-diagonal super-block pair
  for (int I = 0; I < p + 1; ++I)
    for (int J = I + 1; J < p + 1; ++J)
      for (int r = 0; r < D; ++r)
        for (int c = 0; c < D; ++c) {
          SparseHermitian re(n), im(n);
          add_re(re, hpos(I, r), hpos(J, c), 1.0);
          push(std::move(re), 0.0);
          add_im(im, hpos(I, r), hpos(J, c), 1.0);
          push(std::move(im), 0.0);
        }

  // group (2a): H_I = M_I
  for (int I = 0; I < p + 1; ++I)
    for (int r = 0; r < D; ++r)
      for (int c = r; c < D; ++c) {
        SparseHermitian re(n);
        add_re(re, hpos(I, r), hpos(I, c), 1.0);
        add_re(re, mpos(I, r), mpos(I, c), -1.0);
        push(std::move(re), 0.0);
        if (r != c) {
          SparseHermitian im(n);
          add_im(im, hpos(I, r), hpos(I, c), 1.0);
          add_im(im, mpos(I, r), mpos(I, c), -1.0);
          push(std::move(im), 0.0);
        }
      }

  // group (2b): K_I Hermitian
  for (int I = 0; I < p + 1; ++I)
    for (int r = 0; r < D; ++r)
      for (int c = r; c < D; ++c) {
        if (r == c) {
          SparseHermitian im(n);
          add_im(im, hpos(I, r), mpos(I, r), 1.0);
          push(std::move(im), 0.0);
        } else {
          SparseHermitian re(n), im(n);
          add_re(re, hpos(I, r), mpos(I, c), 1.0);
          add_re(re, hpos(I, c), mpos(I, r), -1.0);
          push(std::move(re), 0.0);
          add_im(im, hpos(I, r), mpos(I, c), 1.0);
          add_im(im, hpos(I, c), mpos(I, r), 1.0);
          push(std::move(im), 0.0);
        }
      }

  // groups (3) and (4): K_i = H_{i-1}^G for i >= 1, K_0 = rho^G
  auto gamma_row = [&](int r, int c) { return (r / db) * db + (c % db); };
  auto gamma_col = [&](int r, int c) { return (c / db) * db + (r % db); };
  for (int i = 0; i < p + 1; ++i)
    for (int r = 0; r < D; ++r)
      for (int c = r; c < D; ++c) {
        const cplx rhs = (i == 0) ? program.meta.rho_pt.at(r, c) : cplx(0.0);
        SparseHermitian re(n);
        add_re(re, hpos(i, r), mpos(i, c), 1.0);
        if (i > 0) add_re(re, hpos(i - 1, gamma_row(r, c)), hpos(i - 1, gamma_col(r, c)), -1.0);
        push(std::move(re), rhs.real());
        if (r != c) {
          SparseHermitian im(n);
          add_im(im, hpos(i, r), mpos(i, c), 1.0);
          if (i > 0) add_im(im, hpos(i - 1, gamma_row(r, c)), hpos(i - 1, gamma_col(r, c)), -1.0);
          push(std::move(im), rhs.imag());
        }
      }

  // strictly feasible start: S_i = s(i+1) I with s above the spectral radius
  // of rho^G
  const ComplexMatrix& rg = program.meta.rho_pt;
  double s = 0.0;
  {
    const auto eig = eig_hermitian(HermitianOperator::from_matrix(rg, 1e-8));
    for (double l : eig.eigenvalues) s = std::max(s, std::fabs(l));
  }
  s = 2.0 * s + 1.0;
  ComplexMatrix x0(n, n);
  for (int I = 0; I < p + 1; ++I) {
    for (int r = 0; r < D; ++r) {
      x0.at(hpos(I, r), hpos(I, r)) = s * (I + 1);
      x0.at(mpos(I, r), mpos(I, r)) = s * (I + 1);
    }
    for (int r = 0; r < D; ++r)
      for (int c = 0; c < D; ++c) {
        const cplx k = (I == 0) ? rg.at(r, c) : cplx(s * I * (r == c ? 1.0 : 0.0));
        x0.at(hpos(I, r), mpos(I, c)) = k;
        x0.at(mpos(I, c), hpos(I, r)) = std::conj(k);
      }
  }
  out.initial_primal.push_back(std::move(x0));
  return out;
}

void dump_program(const ConicProgram& program, const std::string& path) {
  std::ofstream o(path);
  if (!o) throw ValidationError("dump_program: cannot open " + path);
  char buf[96];
  auto emit = [&](const SparseHermitian& a) {
    for (const auto& e : a.entries) {
      std::snprintf(buf, sizeof(buf), "    (%d, %d) %.17g %+.17gi\n", e.r, e.c, e.v.real(),
                    e.v.imag());
      o << buf;
    }
  };
  o << "blocks " << program.blocks.size() << "\n";
  for (const auto& b : program.blocks) o << "  " << b.name << " dim " << b.dim << "\n";
  o << "objective offset " << program.objective_offset << "\n";
  for (size_t b = 0; b < program.objective.size(); ++b) {
    o << "  block " << program.blocks[b].name << "\n";
    emit(program.objective[b]);
  }
  o << "constraints " << program.constraints.size() << "\n";
  for (size_t j = 0; j < program.constraints.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "constraint %zu rhs %.17g\n", j, program.constraints[j].rhs);
    o << buf;
    for (const auto& [b, a] : program.constraints[j].terms) {
      o << "  block " << program.blocks[b].name << "\n";
      emit(a);
    }
  }
}

}  // namespace pptcost
