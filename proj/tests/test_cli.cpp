#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "pptcost/states.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string cli_path() {
  const char* p = std::getenv("PPTCOST_CLI_PATH");
  REQUIRE_MESSAGE(p != nullptr, "PPTCOST_CLI_PATH must point at the pptcost binary");
  return p;
}

RunResult run(const std::string& args, const std::string& env_prefix = "") {
  const std::string cmd = env_prefix + "\"" + cli_path() + "\" " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("compute prints the closed-form negativity") {
  const RunResult r = run("compute --state phi:3 --measure negativity");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("value_bits: 1.584962500721156") != std::string::npos);
  CHECK(r.out.find("status: ok") != std::string::npos);
}

TEST_CASE("compute solves the punch-card kappa oracle") {
  const RunResult r = run("compute --state punchcard:pi0 --measure kappa:1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("value_bits: 0.51457") != std::string::npos);
}

TEST_CASE("json output is byte-identical across runs") {
  const RunResult a = run("compute --state random:2,3,6,9 --measure chi:1 --json");
  const RunResult b = run("compute --state random:2,3,6,9 --measure chi:1 --json");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"seconds\"") == std::string::npos);  // wall time stays out of JSON
  CHECK(a.out.find("\"residual\"") != std::string::npos);
}

TEST_CASE("cost measure reports a bracket") {
  const RunResult r = run("compute --state pure:1 --measure cost:0.01");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("lower_bits: 0.0") != std::string::npos);
  CHECK(r.out.find("upper_bits: 0.0") != std::string::npos);
}

TEST_CASE("sweep emits the fixed CSV schema") {
  const std::string csv = "pptcost_cli_sweep.csv";
  const RunResult r =
      run("sweep --state random:2,2,4,5 --p-max 2 --csv " + csv);
  CHECK(r.exit_code == 0);
  std::ifstream in(csv);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "p,e_chi_bits,e_kappa_bits,eps_p,gap_bound_bits,iters,seconds");
  int rows = 0;
  for (std::string line; std::getline(in, line) && !line.empty();) ++rows;
  CHECK(rows == 2);
  in.close();
  std::remove(csv.c_str());
}

TEST_CASE("exit codes distinguish failure classes") {
  CHECK(run("bogus-command").exit_code == 2);
  CHECK(run("compute --state phi:3").exit_code == 0);            // default measure
  CHECK(run("compute --state phi:notanumber --measure negativity").exit_code == 2);
  CHECK(run("compute --state no_such_file.json --measure negativity").exit_code == 2);
  CHECK(run("compute --state phi:17 --measure negativity").exit_code == 5);  // 289 > 256
  CHECK(run("compute --state phi:4 --measure negativity --max-dim 9").exit_code == 5);
}

TEST_CASE("validate separates parse and physics failures") {
  {
    std::ofstream bad("pptcost_cli_bad.json");
    bad << "{ not json";
  }
  CHECK(run("validate pptcost_cli_bad.json").exit_code == 2);
  std::remove("pptcost_cli_bad.json");

  {
    std::ofstream bad("pptcost_cli_trace.json");
    bad << R"({"dim_a":2,"dim_b":1,"matrix_real":[[0.5,0],[0,0.4]],)"
        << R"("matrix_imag":[[0,0],[0,0]]})";
  }
  CHECK(run("validate pptcost_cli_trace.json").exit_code == 3);
  std::remove("pptcost_cli_trace.json");

  const std::string good = "pptcost_cli_good.json";
  pptcost::write_state_file(good, pptcost::punch_card(pptcost::punch_card_pi0_spec()));
  const RunResult r = run("validate " + good);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("non-zero bi-negativity") != std::string::npos);
  std::remove(good.c_str());
}

TEST_CASE("environment variables set defaults and flags override them") {
  CHECK(run("compute --state phi:4 --measure negativity",
            "PPTCOST_MAX_DIM=9 ").exit_code == 5);
  CHECK(run("compute --state phi:4 --measure negativity --max-dim 16",
            "PPTCOST_MAX_DIM=9 ").exit_code == 0);
  // a looser gap tolerance from the environment still converges here
  const RunResult r = run("compute --state phi:2 --measure chi:1", "PPTCOST_GAP_TOL=1e-6 ");
  CHECK(r.exit_code == 0);
}
