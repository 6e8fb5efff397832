#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "inflow/harness.hpp"

namespace fs = std::filesystem;
using namespace inflow;

namespace {

// exit codes
constexpr int kPass = 0, kFail = 1, kConfig = 2, kNumerical = 3;

struct Overrides {
  std::string config;
  std::string out = "out";
  std::optional<int> N, q;
  std::optional<double> L, cfl, t_final;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("-c,--config", o.config, "JSON config file");
  app->add_option("-o,--out", o.out, "output directory");
  app->add_option("--N", o.N, "grid cells");
  app->add_option("--L", o.L, "domain length (0: automatic)");
  app->add_option("--cfl", o.cfl, "CFL number");
  app->add_option("--t-final", o.t_final, "final time");
  app->add_option("--q", o.q, "smoothing exponent of the rarefaction data");
}

RunConfig resolve(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.N) c.N = *o.N;
  if (o.q) c.q = *o.q;
  if (o.L) c.L = *o.L;
  if (o.cfl) c.cfl = *o.cfl;
  if (o.t_final) c.t_final = *o.t_final;
  c.validate();
  return c;
}

void print_report(const std::vector<SuiteReport>& reps) {
  for (const auto& r : reps)
    for (const auto& a : r.items)
      std::cout << (a.pass ? "PASS" : (a.gating ? "FAIL" : "SOFT")) << "  " << a.name << "  measured "
                << format_double(a.measured) << "  (" << a.stated << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composite-wave construction and stability checks for the inflow problem"};
  app.require_subcommand(1);
  Overrides o;

  auto* cas = app.add_subcommand("case", "medium states");
  cas->require_subcommand(1);
  auto* solve = cas->add_subcommand("solve", "solve the medium states from left and right states");
  auto* gen = cas->add_subcommand("generate", "build a case from the right state and wave strengths");
  add_common(solve, o);
  add_common(gen, o);

  auto* waves = app.add_subcommand("waves", "wave profiles");
  auto* build = waves->add_subcommand("build", "write component profiles at time t");
  waves->require_subcommand(1);
  double wave_t = 0;
  add_common(build, o);
  build->add_option("--t", wave_t, "time")->required();

  auto* verify = app.add_subcommand("verify", "run verification suites");
  std::string suite = "all";
  add_common(verify, o);
  verify->add_option("suite", suite, "suite name or all");

  auto* sim = app.add_subcommand("simulate", "run the perturbed problem and write norms and profiles");
  add_common(sim, o);

  auto* rep = app.add_subcommand("report", "print a summary.csv");
  std::string summary = "out/summary.csv";
  rep->add_option("summary", summary, "summary file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed() || gen->parsed()) {
      RunConfig c = resolve(o);
      if (solve->parsed() && c.mode != "solve") throw ConfigError("case solve needs mode solve with a left_state");
      if (gen->parsed() && c.mode != "forward") throw ConfigError("case generate needs mode forward with strengths");
      MediumSolveInfo info;
      const CaseSetup cs = make_case(c, &info);
      std::cout << case_to_json_text(cs, c.gas) << '\n';
      return kPass;
    }
    if (build->parsed()) {
      const RunConfig c = resolve(o);
      const fs::path p = fs::path(o.out) / "waves.csv";
      write_waves(c, wave_t, p);
      std::cout << "wrote " << p.string() << '\n';
      return kPass;
    }
    if (verify->parsed()) {
      const RunConfig c = resolve(o);
      std::vector<std::string> list;
      if (suite == "all")
        list = c.suites;
      else
        list.push_back(suite);
      std::vector<SuiteReport> reps;
      for (const auto& s : list) reps.push_back(run_verify(c, s, o.out));
      write_summary(reps, fs::path(o.out) / "summary.csv");
      print_report(reps);
      for (const auto& r : reps)
        if (!r.passed()) return kFail;
      return kPass;
    }
    if (sim->parsed()) {
      const RunConfig c = resolve(o);
      const SimulationResult r = simulate(c, o.out);
      const auto& a = r.norms.front();
      const auto& b = r.norms.back();
      std::cout << "t = " << format_double(b.t) << "  sup " << format_double(std::max({b.sup_phi, b.sup_psi, b.sup_theta}))
                << " (t=0: " << format_double(std::max({a.sup_phi, a.sup_psi, a.sup_theta})) << ")  h1 "
                << format_double(b.h1) << " (t=0: " << format_double(a.h1) << ")\n";
      return kPass;
    }
    if (rep->parsed()) {
      std::ifstream in(summary);
      if (!in) throw ConfigError("cannot read " + summary);
      std::string line;
      std::getline(in, line);
      bool ok = true;
      while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
        if (f.size() != 6) throw ConfigError("malformed summary row: " + line);
        std::cout << f[4] << "  " << f[1] << "  measured " << f[3] << "  (" << f[2] << ")\n";
        ok = ok && (f[4] == "PASS" || f[5] != "gating");
      }
      return ok ? kPass : kFail;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kPass;
}
