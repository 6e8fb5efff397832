// Runs every verification suite twice and prints one PASS/FAIL line per acceptance criterion.
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>

#include "inflow/harness.hpp"

namespace fs = std::filesystem;
using namespace inflow;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::function<bool(const Assertion&)> member;
};

bool starts(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<SuiteReport> run_all(const RunConfig& c, const fs::path& dir) {
  fs::remove_all(dir);
  std::vector<SuiteReport> reps;
  for (const auto& s : suite_names()) reps.push_back(run_verify(c, s, dir));
  write_summary(reps, dir / "summary.csv");
  return reps;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "inflow_acceptance";
  const RunConfig c;  // defaults: strengths (0.02, 0.05, 0.02, 0.05), N = 4096, t_final = 200

  std::vector<SuiteReport> a, b;
  try {
    a = run_all(c, root / "run1");
    b = run_all(c, root / "run2");
  } catch (const std::exception& e) {
    std::cout << "FAIL numerical error: " << e.what() << '\n';
    return 1;
  }

  const std::vector<Criterion> crit{
      {1, "boundary-layer tail law",
       [](const Assertion& x) { return starts(x.name, "bl.tail") || x.name == "bl.ode_residual"; }},
      {2, "subsonic boundary layer", [](const Assertion& x) { return starts(x.name, "bl.subsonic"); }},
      {3, "contact wave", [](const Assertion& x) { return x.suite == "contact"; }},
      {4, "rarefaction norms",
       [](const Assertion& x) { return x.suite == "rarefaction" && x.name != "rarefaction.burgers_fv_l1"; }},
      {5, "interaction estimates", [](const Assertion& x) { return x.suite == "interactions" && x.gating; }},
      {6, "source norms", [](const Assertion& x) { return x.suite == "sources"; }},
      {7, "perturbation decay at desk scale",
       [](const Assertion& x) {
         return x.name == "stability.sup_ratio" || x.name == "stability.h1_bound" ||
                x.name == "stability.energy_decrease" || x.name == "stability.edge_monitor";
       }},
      {8, "solver validation",
       [](const Assertion& x) {
         return x.name == "stability.steady_state" || x.name == "stability.manufactured_order" ||
                x.name == "rarefaction.burgers_fv_l1";
       }},
  };

  bool all = true;
  for (const auto& cr : crit) {
    bool ok = true;
    std::ostringstream detail;
    int n = 0;
    for (const auto& r : a)
      for (const auto& x : r.items)
        if (cr.member(x)) {
          ++n;
          ok = ok && x.pass;
          detail << "    " << (x.pass ? "pass" : "FAIL") << "  " << x.name << " = " << format_double(x.measured)
                 << "  (" << x.stated << ")\n";
        }
    ok = ok && n > 0;
    all = all && ok;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << cr.id << ": " << cr.title << '\n' << detail.str();
  }

  // determinism: every CSV of the two runs byte-identical
  bool same = true;
  int files = 0;
  for (const auto& e : fs::directory_iterator(root / "run1")) {
    if (e.path().extension() != ".csv") continue;
    ++files;
    const fs::path other = root / "run2" / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
      same = false;
      std::cout << "    differs: " << e.path().filename().string() << '\n';
    }
  }
  same = same && files > 0;
  all = all && same;
  std::cout << (same ? "PASS" : "FAIL") << " criterion 9: byte-identical CSVs across two runs (" << files
            << " files)\n";
  return all ? 0 : 1;
}
