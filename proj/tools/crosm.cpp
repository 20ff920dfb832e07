// crosm: builds the invariant geometry of tangent sphere bundles of
// compact rank-one symmetric spaces and verifies contact metric,
// K-contact, Sasakian, 3-Sasakian and Einstein structures on them,
// in exact rational or floating arithmetic.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "crosm/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw crosm::input_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct FlagValues {
  std::string config_path;
  std::string space, mode, format, out, type, dump_tensors;
  int n = 0;
  double tol = 0;
  std::string kappa, qeps, qhalf, alpha, r, a0, sign;
  double theta = 0, phi = 0;
  bool theta_set = false, phi_set = false;
};

void add_common_flags(CLI::App* cmd, FlagValues& v) {
  cmd->add_option("-c,--config", v.config_path,
                  "TOML config file ([space], [run], [family], [metric])");
  cmd->add_option("--space", v.space, "sphere | rpn | cpn");
  cmd->add_option("--n", v.n, "dimension parameter n");
  cmd->add_option("--mode", v.mode,
                  "exact | float (default exact; env CROSM_MODE)");
  cmd->add_option("--tol", v.tol, "tolerance for float mode (default 1e-9)");
  cmd->add_option("--out", v.out, "write the report to this path");
  cmd->add_option("--format", v.format, "json | csv | text (default json)");
  cmd->add_option("--type", v.type,
                  "family type: gc | AI | AII | AIII | BI | BII | BIII | C | "
                  "sasaki | sasaki-scaled");
  cmd->add_option("--kappa", v.kappa,
                  "family parameter kappa (rational, e.g. 3/4)");
  cmd->add_option("--qeps", v.qeps, "family parameter q_eps");
  cmd->add_option("--qhalf", v.qhalf, "family parameter q_eps/2");
  cmd->add_option("--alpha", v.alpha, "family parameter alpha");
  cmd->add_option("--sign", v.sign, "sign of xi for A types (+1 | -1)");
  cmd->add_option("--r", v.r, "radius for the Sasaki-metric families");
  cmd->add_option("--a0", v.a0, "a block coefficient for the Einstein solver");
  cmd->add_option("--dump-tensors", v.dump_tensors,
                  "write curvature/Ricci tensors of the verified metric "
                  "(.json or .csv)");
  cmd->add_option("--theta", v.theta, "angle theta in radians (float mode)")
      ->each([&v](const std::string&) { v.theta_set = true; });
  cmd->add_option("--phi", v.phi, "angle phi in radians (float mode)")
      ->each([&v](const std::string&) { v.phi_set = true; });
}

crosm::RunConfig make_config(const FlagValues& v, crosm::Task task) {
  crosm::RunConfig cfg;
  if (!v.config_path.empty())
    crosm::apply_config_map(
        cfg, crosm::parse_toml_subset(read_file(v.config_path)));
  cfg.task = task;  // the subcommand wins over run.task in the file
  if (!v.space.empty()) cfg.space = v.space;
  if (v.n > 0) cfg.n = v.n;
  if (!v.mode.empty()) cfg.mode = v.mode;
  if (v.tol > 0) cfg.tolerance = v.tol;
  if (!v.out.empty()) cfg.out_path = v.out;
  if (!v.format.empty()) cfg.format = crosm::format_from_string(v.format);
  auto set = [&cfg](const char* key, const std::string& val) {
    if (!val.empty()) cfg.params[key] = val;
  };
  set("family.type", v.type);
  set("family.kappa", v.kappa);
  set("family.q_eps", v.qeps);
  set("family.q_half", v.qhalf);
  set("family.alpha", v.alpha);
  set("family.sign", v.sign);
  set("family.r", v.r);
  set("family.a0", v.a0);
  set("run.dump_tensors", v.dump_tensors);
  if (v.theta_set) cfg.params["family.theta"] = std::to_string(v.theta);
  if (v.phi_set) cfg.params["family.phi"] = std::to_string(v.phi);
  return cfg;
}

int execute(const FlagValues& v, crosm::Task task) {
  try {
    const crosm::RunConfig cfg = make_config(v, task);
    const crosm::RunResult res = crosm::run_and_write(cfg);
    std::cout << res.render(cfg.format);
    return res.exit_code;
  } catch (const crosm::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "crosm: invariant contact metric structures on tangent sphere bundles "
      "of compact rank-one symmetric spaces"};
  app.require_subcommand(1);

  FlagValues v;
  struct Sub {
    const char* name;
    const char* help;
    crosm::Task task;
  };
  const std::vector<Sub> subs = {
      {"verify", "verify a family instance against the classification",
       crosm::Task::verify},
      {"catalog", "emit the orthogonal catalog and check its rows",
       crosm::Task::catalog},
      {"einstein", "Einstein metrics: solver and checks",
       crosm::Task::einstein},
      {"cone", "almost Kaehler extension on the metric cone",
       crosm::Task::cone},
      {"isomorphism", "infinitesimal-model isomorphism checks",
       crosm::Task::isomorphism},
      {"full-suite", "run the complete verification battery for a space",
       crosm::Task::full_suite},
  };
  for (const auto& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    add_common_flags(cmd, v);
  }

  CLI11_PARSE(app, argc, argv);
  for (const auto& s : subs)
    if (app.got_subcommand(s.name)) return execute(v, s.task);
  std::cerr << "error: no subcommand\n";
  return 1;
}
