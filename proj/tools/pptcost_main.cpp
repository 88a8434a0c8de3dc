// pptcost: compute PPT entanglement cost brackets, hierarchy sweeps, the
// punch-card additivity violation, and state-file validation.
//
// Exit codes: 0 success, 2 parse error, 3 validation failure, 4 solver
// failure, 5 dimension cap exceeded.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pptcost/hierarchy.hpp"
#include "pptcost/states.hpp"

namespace {

using json = nlohmann::ordered_json;
using clock_type = std::chrono::steady_clock;

constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitSolver = 4;
constexpr int kExitDimCap = 5;

struct DimCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  pptcost::SolverConfig solver;
  int max_dim = 256;
  int jobs = 1;
  bool as_json = false;
};

double env_double(const char* name, double fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  try {
    return std::stod(v);
  } catch (const std::exception&) {
    throw CLI::ValidationError(std::string(name) + ": not a number: " + v);
  }
}

int env_int(const char* name, int fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  try {
    return std::stoi(v);
  } catch (const std::exception&) {
    throw CLI::ValidationError(std::string(name) + ": not an integer: " + v);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? pos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError(what + ": not a number: " + s);
  }
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError(what + ": not an integer: " + s);
  }
}

// builtin sources: phi:d, punchcard:pi0, pure:l1,l2,..., random:dA,dB,rank,seed,
// isotropic:v (two-qubit v Phi_2 + (1-v) I/4); anything else is a file path
pptcost::DensityMatrix load_state(const std::string& source) {
  using namespace pptcost;
  const size_t colon = source.find(':');
  const std::string kind = source.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : source.substr(colon + 1);
  if (kind == "phi") {
    return max_entangled(parse_int(arg, "phi"));
  }
  if (kind == "punchcard") {
    if (arg != "pi0") throw CLI::ValidationError("punchcard: unknown instance: " + arg);
    return punch_card(punch_card_pi0_spec());
  }
  if (kind == "pure") {
    std::vector<double> lambdas;
    for (const auto& part : split(arg, ',')) lambdas.push_back(parse_double(part, "pure"));
    const int d = static_cast<int>(lambdas.size());
    return pure_from_schmidt(lambdas, BipartiteShape{d, d});
  }
  if (kind == "random") {
    const auto parts = split(arg, ',');
    if (parts.size() != 4) throw CLI::ValidationError("random: expected dA,dB,rank,seed");
    return random_density(
        BipartiteShape{parse_int(parts[0], "random dA"), parse_int(parts[1], "random dB")},
        parse_int(parts[2], "random rank"),
        static_cast<std::uint64_t>(std::stoull(parts[3])));
  }
  if (kind == "isotropic") {
    const double v = parse_double(arg, "isotropic");
    DensityMatrix phi = max_entangled(2);
    ComplexMatrix m =
        cplx((1.0 - v) / 4.0) * ComplexMatrix::identity(4) + cplx(v) * phi.op.matrix;
    return make_density(HermitianOperator::from_matrix(m), BipartiteShape{2, 2});
  }
  return read_state_file(source);
}

void check_dim_cap(const pptcost::DensityMatrix& rho, int max_dim) {
  if (rho.shape.total() > max_dim) {
    throw DimCapError("state dimension " + std::to_string(rho.shape.total()) +
                      " exceeds cap " + std::to_string(max_dim));
  }
}

// Reports are flat key/value documents; text mode appends wall time, JSON mode
// omits it so that output is byte-identical across runs.
void emit(const json& doc, bool as_json, double seconds) {
  if (as_json) {
    std::printf("%s\n", doc.dump(2).c_str());
    return;
  }
  std::printf("pptcost %s\n", doc.at("command").get<std::string>().c_str());
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") continue;
    if (key == "rows" && value.is_array()) {
      std::printf("  %5s %14s %14s %12s %16s %6s\n", "p", "e_chi_bits", "e_kappa_bits", "eps_p",
                  "gap_bound_bits", "iters");
      for (const auto& row : value) {
        std::printf("  %5d %14.9f %14.9f %12.3e %16.9f %6d\n", row.at("p").get<int>(),
                    row.at("e_chi_bits").get<double>(), row.at("e_kappa_bits").get<double>(),
                    row.at("eps_p").get<double>(), row.at("gap_bound_bits").get<double>(),
                    row.at("iters").get<int>());
      }
    } else if (value.is_string()) {
      std::printf("  %s: %s\n", key.c_str(), value.get<std::string>().c_str());
    } else {
      std::printf("  %s: %s\n", key.c_str(), value.dump().c_str());
    }
  }
  std::printf("  seconds: %.3f\n", seconds);
}

struct MeasureResult {
  json fields;
  bool ok = true;
};

MeasureResult run_measure(const pptcost::DensityMatrix& rho, const std::string& measure,
                          const Options& opt) {
  using namespace pptcost;
  MeasureResult out;
  const size_t colon = measure.find(':');
  const std::string kind = measure.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : measure.substr(colon + 1);
  if (kind == "negativity") {
    const double bits = log_negativity(rho);
    out.fields["value_bits"] = bits;
    out.fields["value_linear"] = std::exp2(bits);
    out.fields["residual"] = 0.0;
    out.fields["iterations"] = 0;
  } else if (kind == "chi") {
    const ChiCertificate c = chi(rho, parse_int(arg, "chi level"), opt.solver);
    out.fields["level"] = c.p;
    out.fields["value_bits"] = c.log_value;
    out.fields["value_linear"] = c.value;
    out.fields["gap"] = c.gap;
    out.fields["residual"] = c.residual;
    out.fields["iterations"] = c.iterations;
  } else if (kind == "kappa") {
    const KappaCertificate c = kappa(rho, parse_int(arg, "kappa level"), opt.solver);
    out.fields["level"] = c.q;
    out.fields["value_bits"] = c.log_value;
    out.fields["value_linear"] = c.value;
    out.fields["gap"] = c.gap;
    out.fields["residual"] = c.residual;
    out.fields["iterations"] = c.iterations;
  } else if (kind == "cost") {
    const double eps = parse_double(arg, "cost epsilon");
    const CostEstimate est = ppt_cost(rho, eps, opt.solver);
    out.fields["epsilon"] = est.epsilon;
    out.fields["level_used"] = est.level_used;
    out.fields["lower_bits"] = est.lower_bits;
    out.fields["upper_bits"] = est.upper_bits;
    out.fields["value_bits"] = est.point_estimate;
    out.fields["residual"] = est.residual;
    out.fields["iterations"] = est.iterations;
  } else if (kind == "dmax") {
    const DmaxResult r = dmax_ppt(rho.op, rho.shape, opt.solver);
    out.fields["value_bits"] = std::log2(r.value);
    out.fields["value_linear"] = r.value;
    out.fields["residual"] = 0.0;
    out.fields["iterations"] = 0;
  } else {
    throw CLI::ValidationError("unknown measure: " + measure);
  }
  return out;
}

int cmd_compute(const std::string& source, const std::string& measure, const Options& opt) {
  const auto t0 = clock_type::now();
  const pptcost::DensityMatrix rho = load_state(source);
  check_dim_cap(rho, opt.max_dim);
  json doc;
  doc["command"] = "compute";
  doc["input"] = source;
  doc["measure"] = measure;
  doc["dim_a"] = rho.shape.dim_a;
  doc["dim_b"] = rho.shape.dim_b;
  MeasureResult r = run_measure(rho, measure, opt);
  for (auto& [k, v] : r.fields.items()) doc[k] = v;
  doc["status"] = "ok";
  emit(doc, opt.as_json, std::chrono::duration<double>(clock_type::now() - t0).count());
  return 0;
}

struct SweepRow {
  int p = 0;
  double e_chi_bits = 0.0, e_kappa_bits = 0.0, eps_p = 0.0, gap_bound_bits = 0.0;
  double residual = 0.0, seconds = 0.0;
  int iters = 0;
  std::exception_ptr error;
};

int cmd_sweep(const std::string& source, int p_max, const std::string& csv_path,
              const Options& opt) {
  using namespace pptcost;
  const auto t0 = clock_type::now();
  const DensityMatrix rho = load_state(source);
  check_dim_cap(rho, opt.max_dim);
  if (p_max < 1) throw CLI::ValidationError("--p-max must be >= 1");
  const int d = rho.shape.min_local();

  std::vector<SweepRow> rows(static_cast<size_t>(p_max));
  auto run_row = [&](int idx) {
    SweepRow& row = rows[static_cast<size_t>(idx)];
    row.p = idx + 1;
    try {
      const auto tr = clock_type::now();
      const ChiCertificate c = chi(rho, row.p, opt.solver);
      const KappaCertificate k = kappa(rho, row.p, opt.solver);
      row.e_chi_bits = c.log_value;
      row.e_kappa_bits = k.log_value;
      row.eps_p = std::max(0.0, 1.0 - c.value / k.value);
      row.gap_bound_bits = convergence_gap(d, row.p);
      row.residual = std::max(c.residual, k.residual);
      row.iters = c.iterations + k.iterations;
      row.seconds = std::chrono::duration<double>(clock_type::now() - tr).count();
    } catch (...) {
      row.error = std::current_exception();
    }
  };

  if (opt.jobs <= 1) {
    for (int i = 0; i < p_max; ++i) run_row(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int nthreads = std::min(opt.jobs, p_max);
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < p_max; i = next.fetch_add(1)) run_row(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& row : rows) {
    if (row.error) std::rethrow_exception(row.error);
  }

  json doc;
  doc["command"] = "sweep";
  doc["input"] = source;
  doc["p_max"] = p_max;
  doc["dim_a"] = rho.shape.dim_a;
  doc["dim_b"] = rho.shape.dim_b;
  json jrows = json::array();
  for (const auto& row : rows) {
    json r;
    r["p"] = row.p;
    r["e_chi_bits"] = row.e_chi_bits;
    r["e_kappa_bits"] = row.e_kappa_bits;
    r["eps_p"] = row.eps_p;
    r["gap_bound_bits"] = row.gap_bound_bits;
    r["residual"] = row.residual;
    r["iters"] = row.iters;
    jrows.push_back(std::move(r));
  }
  doc["rows"] = std::move(jrows);
  doc["status"] = "ok";

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw pptcost::ValidationError("sweep: cannot open " + csv_path);
    csv << "p,e_chi_bits,e_kappa_bits,eps_p,gap_bound_bits,iters,seconds\n";
    char buf[256];
    for (const auto& row : rows) {
      std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,%.12g,%d,%.3f\n", row.p,
                    row.e_chi_bits, row.e_kappa_bits, row.eps_p, row.gap_bound_bits, row.iters,
                    row.seconds);
      csv << buf;
    }
  }
  emit(doc, opt.as_json, std::chrono::duration<double>(clock_type::now() - t0).count());
  return 0;
}

int cmd_counterexample(const Options& opt) {
  using namespace pptcost;
  const auto t0 = clock_type::now();
  const DensityMatrix pi0 = punch_card(punch_card_pi0_spec());
  const DensityMatrix pi0_sq = tensor_power(pi0, 2, opt.max_dim);

  const double e_n = log_negativity(pi0);
  const KappaCertificate k1 = kappa(pi0, 1, opt.solver);
  const KappaCertificate k2 = kappa(pi0_sq, 1, opt.solver);
  const double margin = 2.0 * k1.log_value - k2.log_value;

  json doc;
  doc["command"] = "counterexample";
  doc["e_n_pi0_bits"] = e_n;
  doc["e_kappa_pi0_bits"] = k1.log_value;
  doc["e_kappa_pi0_pair_bits"] = k2.log_value;
  doc["two_e_kappa_pi0_bits"] = 2.0 * k1.log_value;
  doc["margin_bits"] = margin;
  doc["residual"] = std::max(k1.residual, k2.residual);
  doc["iterations"] = k1.iterations + k2.iterations;
  const bool violated = margin >= 0.01;
  doc["additivity_violated"] = violated;
  doc["status"] = violated ? "ok" : "margin below 0.01 bits";
  emit(doc, opt.as_json, std::chrono::duration<double>(clock_type::now() - t0).count());
  return violated ? 0 : kExitValidation;
}

int cmd_validate(const std::string& path, const Options& opt) {
  using namespace pptcost;
  const auto t0 = clock_type::now();
  const DensityMatrix rho = read_state_file(path);
  const double defect = binegativity_defect(rho);
  json doc;
  doc["command"] = "validate";
  doc["input"] = path;
  doc["dim_a"] = rho.shape.dim_a;
  doc["dim_b"] = rho.shape.dim_b;
  doc["binegativity_defect"] = defect;
  doc["zero_binegativity"] = defect >= -1e-8;
  if (defect < -1e-8) doc["note"] = "non-zero bi-negativity";
  doc["status"] = "ok";
  emit(doc, opt.as_json, std::chrono::duration<double>(clock_type::now() - t0).count());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PPT entanglement cost of bipartite quantum states"};
  app.require_subcommand(1);

  Options opt;
  std::string state, measure = "cost:0.001", csv_path, validate_path;
  int p_max = 3;
  bool gap_tol_given = false;

  try {
    opt.solver.gap_tol = env_double("PPTCOST_GAP_TOL", opt.solver.gap_tol);
    opt.max_dim = env_int("PPTCOST_MAX_DIM", opt.max_dim);
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParse;
  }

  app.add_flag("--json", opt.as_json, "machine-readable report (deterministic)");
  app.add_option("--gap-tol", opt.solver.gap_tol, "duality gap tolerance")
      ->check(CLI::PositiveNumber)
      ->trigger_on_parse();
  app.add_option("--feas-tol", opt.solver.feas_tol, "feasibility tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-iters", opt.solver.max_iters, "interior-point iteration cap")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-dim", opt.max_dim, "total dimension cap")->check(CLI::PositiveNumber);

  CLI::App* compute = app.add_subcommand("compute", "compute one measure of one state");
  compute->fallthrough();
  compute->add_option("--state", state, "state file or builtin")->required();
  compute->add_option("--measure", measure,
                      "negativity | chi:p | kappa:q | cost:epsilon | dmax");

  CLI::App* sweep = app.add_subcommand("sweep", "hierarchy levels 1..p_max");
  sweep->fallthrough();
  sweep->add_option("--state", state, "state file or builtin")->required();
  sweep->add_option("--p-max", p_max, "highest hierarchy level");
  sweep->add_option("--csv", csv_path, "also write rows as CSV");
  sweep->add_option("--jobs", opt.jobs, "parallel sweep rows")->check(CLI::PositiveNumber);

  CLI::App* counter =
      app.add_subcommand("counterexample", "punch-card additivity violation of E_kappa");
  counter->fallthrough();

  CLI::App* validate = app.add_subcommand("validate", "check a state file");
  validate->fallthrough();
  validate->add_option("file", validate_path, "state file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  // the flag callback marks explicit --gap-tol so the counterexample default
  // below does not override it
  gap_tol_given = app.count("--gap-tol") > 0;

  try {
    if (compute->parsed()) return cmd_compute(state, measure, opt);
    if (sweep->parsed()) return cmd_sweep(state, p_max, csv_path, opt);
    if (counter->parsed()) {
      // the large solve only needs ~1e-6; keep the default run inside budget
      if (!gap_tol_given && !std::getenv("PPTCOST_GAP_TOL")) opt.solver.gap_tol = 1e-6;
      return cmd_counterexample(opt);
    }
    if (validate->parsed()) return cmd_validate(validate_path, opt);
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParse;
  } catch (const DimCapError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDimCap;
  } catch (const pptcost::DimensionError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitDimCap;
  } catch (const pptcost::SolverError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  } catch (const pptcost::NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  } catch (const pptcost::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    // file-reading problems are parse errors; physics checks are validation
    return std::string(e.what()).rfind("read_state_file:", 0) == 0 ? kExitParse : kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return 0;
}
