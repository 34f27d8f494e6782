// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver over the C interface.
#include "sharpgap/sharpgap.h"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct CliError {
  int status;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << path << '\n';
    throw CliError{2};
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!(out << text)) {
    std::cerr << "error: cannot write " << path << '\n';
    throw CliError{2};
  }
}

void check(sg_status s) {
  if (s != SG_OK) {
    std::cerr << "error (" << sg_status_name(s) << "): " << sg_last_error()
              << '\n';
    throw CliError{2};
  }
}

struct CString {
  char *p = nullptr;
  ~CString() { sg_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using CircuitPtr = std::unique_ptr<sg_circuit, decltype(&sg_circuit_free)>;
using ProfilePtr = std::unique_ptr<sg_profile, decltype(&sg_profile_free)>;
using VerdictPtr = std::unique_ptr<sg_verdict, decltype(&sg_verdict_free)>;

CircuitPtr load_circuit(const std::string &path) {
  sg_circuit *c = nullptr;
  check(sg_circuit_parse(read_file(path).c_str(), &c));
  return {c, sg_circuit_free};
}

ProfilePtr make_profile(const std::vector<std::string> &overrides) {
  ProfilePtr p(sg_profile_new(), sg_profile_free);
  for (const auto &kv : overrides) {
    size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
      throw CliError{2};
    }
    check(sg_profile_set(p.get(), kv.substr(0, eq).c_str(),
                         kv.substr(eq + 1).c_str()));
  }
  return p;
}

int report(sg_verdict *v) {
  CString json;
  check(sg_verdict_json(v, &json.p));
  std::cout << json.str() << '\n';
  return sg_verdict_accepted(v) ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"sharpgap: GAP-UNSAT pipeline and #SAT-driven verifier"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sg_version());

  std::string netlist, out_path, witness_path, dimacs_path;
  std::vector<std::string> overrides;
  int result = 0;

  auto *count = app.add_subcommand("count", "Count satisfying assignments");
  std::vector<std::string> fixed;
  uint32_t budget = 28;
  count->add_option("netlist", netlist, "Circuit netlist")->required();
  count->add_option("--fixed", fixed, "Fix input i (1-based) to b, as i=b");
  count->add_option("--budget", budget, "Largest input count to enumerate");
  count->callback([&] {
    CircuitPtr c = load_circuit(netlist);
    uint32_t n = 0;
    check(sg_circuit_info(c.get(), &n, nullptr));
    std::vector<int8_t> pin(n, -1);
    for (const auto &f : fixed) {
      size_t eq = f.find('=');
      unsigned long i = 0;
      std::string b = eq == std::string::npos ? "" : f.substr(eq + 1);
      try {
        i = std::stoul(f.substr(0, eq));
      } catch (const std::exception &) {
        i = 0;
      }
      if (i < 1 || i > n || (b != "0" && b != "1")) {
        std::cerr << "error: bad --fixed '" << f << "'\n";
        throw CliError{2};
      }
      pin[i - 1] = int8_t(b == "1");
    }
    CString out;
    check(sg_count(c.get(), fixed.empty() ? nullptr : pin.data(),
                   fixed.empty() ? 0 : pin.size(), budget, &out.p));
    std::cout << out.str() << '\n';
  });

  auto *amp = app.add_subcommand("amplify", "Amplify the UNSAT gap");
  uint32_t g = 2, psi = 8, walk_t = 0;
  double max_lambda = 0.99;
  uint64_t seed = 0;
  amp->add_option("netlist", netlist, "Circuit netlist")->required();
  amp->add_option("--g", g, "Gap parameter");
  amp->add_option("--psi", psi, "Seed-length multiplier");
  amp->add_option("--t", walk_t, "Walk length (0: ceil(4 log2 g))");
  amp->add_option("--max-lambda", max_lambda, "Largest accepted walk eigenvalue");
  amp->add_option("--seed", seed, "Offset search seed");
  amp->add_option("-o,--output", out_path, "Output netlist (default stdout)");
  amp->callback([&] {
    CircuitPtr c = load_circuit(netlist);
    sg_circuit *a = nullptr;
    CString prov, text;
    check(sg_amplify(c.get(), g, psi, walk_t, max_lambda, seed, &a, &prov.p));
    CircuitPtr owned(a, sg_circuit_free);
    check(sg_circuit_format(a, &text.p));
    write_file(out_path, prov.str() + text.str());
  });

  auto *code = app.add_subcommand("code", "Build a linear code");
  uint32_t code_n = 4, code_c = 4;
  code->add_option("--n", code_n, "Message length")->required();
  code->add_option("--c", code_c, "Rate constant (cn codeword bits)");
  code->add_option("--seed", seed, "Construction seed");
  code->callback([&] {
    CString text;
    check(sg_code_build(code_n, seed, code_c, &text.p));
    std::cout << text.str();
  });

  auto *reduce = app.add_subcommand("reduce", "Circuit to grouped CNF");
  uint32_t repeat_k = 1;
  reduce->add_option("netlist", netlist, "Circuit netlist")->required();
  reduce->add_option("--code-c", code_c, "Code rate constant");
  reduce->add_option("--code-seed", seed, "Code seed");
  reduce->add_option("--repeat-k", repeat_k, "Serial repetition count");
  reduce->add_option("-o,--output", out_path, "Output DIMACS (default stdout)");
  reduce->callback([&] {
    CircuitPtr c = load_circuit(netlist);
    CString text;
    check(sg_reduce(c.get(), code_c, seed, repeat_k, &text.p));
    write_file(out_path, text.str());
  });

  auto *fglss = app.add_subcommand("fglss", "Grouped CNF to independent-set graph");
  fglss->add_option("dimacs", dimacs_path, "Grouped DIMACS file")->required();
  fglss->add_option("-o,--output", out_path, "Output gis file (default stdout)");
  fglss->callback([&] {
    CString text;
    check(sg_fglss(read_file(dimacs_path).c_str(), &text.p));
    write_file(out_path, text.str());
  });

  auto *e2e = app.add_subcommand("e2e", "Honest prover and verifier end to end");
  e2e->add_option("netlist", netlist, "Base circuit netlist")->required();
  e2e->add_option("--set", overrides, "Profile override key=value");
  e2e->callback([&] {
    CircuitPtr c = load_circuit(netlist);
    ProfilePtr p = make_profile(overrides);
    sg_verdict *v = nullptr;
    check(sg_e2e(c.get(), p.get(), &v));
    VerdictPtr owned(v, sg_verdict_free);
    result = report(v);
  });

  auto *prove = app.add_subcommand("prove", "Write the honest witness");
  prove->add_option("netlist", netlist, "Base circuit netlist")->required();
  prove->add_option("-o,--output", out_path, "Witness file")->required();
  prove->add_option("--set", overrides, "Profile override key=value");
  prove->callback([&] {
    CircuitPtr c = load_circuit(netlist);
    ProfilePtr p = make_profile(overrides);
    CString text;
    sg_verdict *v = nullptr;
    check(sg_prove(c.get(), p.get(), &text.p, &v));
    VerdictPtr owned(v, sg_verdict_free);
    write_file(out_path, text.str());
    result = report(v);
  });

  auto *verify = app.add_subcommand("verify", "Check a witness file");
  verify->add_option("netlist", netlist, "Base circuit netlist")->required();
  verify->add_option("--witness", witness_path, "Witness file")->required();
  verify->callback([&] {
    CircuitPtr c = load_circuit(netlist);
    sg_verdict *v = nullptr;
    check(sg_verify(c.get(), read_file(witness_path).c_str(), &v));
    VerdictPtr owned(v, sg_verdict_free);
    result = report(v);
  });

  auto *selftest = app.add_subcommand("selftest", "Run the bundled invariant suite");
  uint64_t st_seed = 1;
  selftest->add_option("--seed", st_seed, "Random seed");
  selftest->callback([&] {
    int passed = 0;
    CString text;
    check(sg_selftest(st_seed, &passed, &text.p));
    std::cout << text.str();
    result = passed ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  } catch (const CliError &e) {
    return e.status;
  }
  return result;
}
