#include "pptcost/states.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace pptcost {

void validate_density(const DensityMatrix& rho) {
  if (rho.shape.dim_a < 1 || rho.shape.dim_b < 1) throw ValidationError("state: local dims must be >= 1");
  if (rho.op.dim != rho.shape.total()) {
    throw ValidationError("state: operator dim " + std::to_string(rho.op.dim) + " != dim_a*dim_b = " +
                          std::to_string(rho.shape.total()));
  }
  const double tr = std::real(trace(rho.op.matrix));
  if (std::fabs(tr - 1.0) > 1e-9) throw ValidationError("state: trace " + std::to_string(tr) + " != 1");
  if (!is_psd(rho.op, 1e-8)) throw ValidationError("state: not positive semidefinite");
}

DensityMatrix make_density(const HermitianOperator& op, const BipartiteShape& shape) {
  DensityMatrix rho{op, shape};
  validate_density(rho);
  return rho;
}

void validate_punch_card_spec(const PunchCardSpec& spec) {
  const int d = spec.a.dim;
  if (spec.q.rows != d || spec.q.cols != d) throw ValidationError("punch card: A and Q dims differ");
  if (!is_psd(spec.a, 1e-8)) throw ValidationError("punch card: A is not PSD");
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const cplx v = spec.q.at(i, j);
      if (v.imag() != 0.0 || (v.real() != 0.0 && v.real() != 1.0)) {
        throw ValidationError("punch card: Q entries must be exactly 0 or 1");
      }
      if (spec.q.at(i, j) != spec.q.at(j, i)) throw ValidationError("punch card: Q must be symmetric");
    }
    if (spec.q.at(i, i) != cplx(1.0)) throw ValidationError("punch card: Q diagonal must be 1");
  }
}

DensityMatrix pure_from_schmidt(const std::vector<double>& lambdas, const BipartiteShape& shape) {
  const int d = shape.min_local();
  if (lambdas.empty() || static_cast<int>(lambdas.size()) > d) {
    throw ValidationError("pure_from_schmidt: need 1.." + std::to_string(d) + " coefficients");
  }
  double sum = 0.0;
  for (double l : lambdas) {
    if (l < 0.0) throw ValidationError("pure_from_schmidt: negative coefficient");
    sum += l;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw ValidationError("pure_from_schmidt: coefficients must sum to 1");
  const int D = shape.total();
  ComplexMatrix m(D, D);
  for (size_t i = 0; i < lambdas.size(); ++i) {
    for (size_t j = 0; j < lambdas.size(); ++j) {
      m.at(static_cast<int>(i) * shape.dim_b + static_cast<int>(i),
           static_cast<int>(j) * shape.dim_b + static_cast<int>(j)) =
          std::sqrt(lambdas[i]) * std::sqrt(lambdas[j]);
    }
  }
  return make_density(HermitianOperator::from_matrix(m), shape);
}

DensityMatrix max_entangled(int d) {
  if (d < 1) throw ValidationError("max_entangled: d must be >= 1");
  return pure_from_schmidt(std::vector<double>(d, 1.0 / d), BipartiteShape{d, d});
}

DensityMatrix punch_card(const PunchCardSpec& spec) {
  validate_punch_card_spec(spec);
  const int d = spec.a.dim;
  const auto& A = spec.a.matrix;
  double norm = 0.0;
  for (int i = 0; i < d; ++i) norm += std::real(A.at(i, i));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) norm += std::real(spec.q.at(i, j)) * std::abs(A.at(i, j));
  if (norm <= 0.0) throw ValidationError("punch card: zero normalization");

  ComplexMatrix m(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m.at(i * d + i, j * d + j) = A.at(i, j) / norm;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) m.at(i * d + j, i * d + j) = std::real(spec.q.at(i, j)) * std::abs(A.at(i, j)) / norm;
  return make_density(HermitianOperator::from_matrix(m), BipartiteShape{d, d});
}

PunchCardSpec punch_card_pi0_spec() {
  ComplexMatrix a(3, 3);
  for (auto& e : a.entries) e = 1.0;
  ComplexMatrix q(3, 3);
  const double qv[3][3] = {{1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) q.at(i, j) = qv[i][j];
  return PunchCardSpec{HermitianOperator::from_matrix(a), q};
}

double binegativity_defect(const DensityMatrix& rho) {
  const auto pt = partial_transpose(rho.op, rho.shape);
  return min_eigenvalue(partial_transpose(abs_hermitian(pt), rho.shape));
}

DensityMatrix tensor_power(const DensityMatrix& rho, int n, int max_dim) {
  if (n < 1) throw ValidationError("tensor_power: n must be >= 1");
  if (n == 1) return rho;
  const int da = rho.shape.dim_a, db = rho.shape.dim_b, D = rho.shape.total();
  double total = 1.0;
  for (int i = 0; i < n; ++i) {
    total *= D;
    if (total > max_dim) {
      throw DimensionError("tensor_power: dimension " + std::to_string(total) + " exceeds cap " +
                           std::to_string(max_dim));
    }
  }
  ComplexMatrix k = rho.op.matrix;
  for (int i = 1; i < n; ++i) k = kron(k, rho.op.matrix);
  // permute from (a1 b1 a2 b2 ... an bn) to (a1..an b1..bn)
  const int Dn = static_cast<int>(total);
  int dan = 1, dbn = 1;
  for (int i = 0; i < n; ++i) {
    dan *= da;
    dbn *= db;
  }
  std::vector<int> perm(Dn);
  for (int idx = 0; idx < Dn; ++idx) {
    int rest = idx, ai = 0, bi = 0;
    std::vector<int> digits(2 * n);
    for (int f = 2 * n - 1; f >= 0; --f) {
      const int base = (f % 2 == 0) ? da : db;
      digits[f] = rest % base;
      rest /= base;
    }
    for (int f = 0; f < n; ++f) ai = ai * da + digits[2 * f];
    for (int f = 0; f < n; ++f) bi = bi * db + digits[2 * f + 1];
    perm[idx] = ai * dbn + bi;
  }
  ComplexMatrix m(Dn, Dn);
  for (int i = 0; i < Dn; ++i)
    for (int j = 0; j < Dn; ++j) m.at(perm[i], perm[j]) = k.at(i, j);
  return make_density(HermitianOperator::from_matrix(m), BipartiteShape{dan, dbn});
}

DensityMatrix random_density(const BipartiteShape& shape, int rank, std::uint64_t seed) {
  const int D = shape.total();
  if (rank < 1 || rank > D) throw ValidationError("random_density: rank must be in 1..D");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(D, rank);
  for (auto& e : g.entries) {
    const double re = gauss(rng), im = gauss(rng);
    e = cplx(re, im);
  }
  ComplexMatrix w = g * adjoint(g);
  const double tr = std::real(trace(w));
  return make_density(HermitianOperator::from_matrix((1.0 / tr) * w), shape);
}

void write_state_file(const std::string& path, const DensityMatrix& rho) {
  std::ofstream out(path);
  if (!out) throw ValidationError("write_state_file: cannot open " + path);
  const int D = rho.op.dim;
  char buf[64];
  auto emit_matrix = [&](bool imag_part) {
    for (int i = 0; i < D; ++i) {
      out << "    [";
      for (int j = 0; j < D; ++j) {
        const cplx v = rho.op.matrix.at(i, j);
        std::snprintf(buf, sizeof(buf), "%.17g", imag_part ? v.imag() : v.real());
        out << buf << (j + 1 < D ? ", " : "");
      }
      out << "]" << (i + 1 < D ? "," : "") << "\n";
    }
  };
  out << "{\n  \"dim_a\": " << rho.shape.dim_a << ",\n  \"dim_b\": " << rho.shape.dim_b << ",\n";
  out << "  \"matrix_real\": [\n";
  emit_matrix(false);
  out << "  ],\n  \"matrix_imag\": [\n";
  emit_matrix(true);
  out << "  ]\n}\n";
}

DensityMatrix read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("read_state_file: cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("read_state_file: parse error: " + std::string(e.what()));
  }
  BipartiteShape shape;
  try {
    shape.dim_a = doc.at("dim_a").get<int>();
    shape.dim_b = doc.at("dim_b").get<int>();
    const int D = shape.total();
    const auto& re = doc.at("matrix_real");
    const auto& im = doc.at("matrix_imag");
    if (static_cast<int>(re.size()) != D || static_cast<int>(im.size()) != D) {
      throw ValidationError("read_state_file: matrix rows do not match dim_a*dim_b");
    }
    ComplexMatrix m(D, D);
    for (int i = 0; i < D; ++i) {
      if (static_cast<int>(re[i].size()) != D || static_cast<int>(im[i].size()) != D) {
        throw ValidationError("read_state_file: matrix cols do not match dim_a*dim_b");
      }
      for (int j = 0; j < D; ++j) m.at(i, j) = cplx(re[i][j].get<double>(), im[i][j].get<double>());
    }
    return make_density(HermitianOperator::from_matrix(m), shape);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("read_state_file: malformed document: " + std::string(e.what()));
  }
}

}  // namespace pptcost
