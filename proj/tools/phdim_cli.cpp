// phdim: persistent homology and fractal dimension experiments.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "phdim/cli.hpp"

namespace {

struct Flags {
  std::string family;
  std::string complex;
  std::string method;
};

void add_output(CLI::App* sub, phdim::ExperimentConfig& c, bool with_table = true) {
  sub->add_option("-o,--out", c.output, "Primary artifact path (stdout when omitted)");
  if (with_table) sub->add_option("--table", c.table, "CSV table path");
}

void add_generator(CLI::App* sub, phdim::ExperimentConfig& c, Flags& f) {
  sub->add_option("--family", f.family,
                  "sierpinski | cantor_interval | arcs | uniform_cube | segment | lattice_subset | bipartite");
  sub->add_option("--n", c.n, "Sample size")->check(CLI::PositiveNumber);
  sub->add_option("--m", c.m, "Ambient dimension (uniform_cube, lattice_subset)");
  sub->add_option("--levels", c.levels, "Cantor depth");
  sub->add_option("--width", c.lattice_width, "Lattice side N (lattice_subset)");
  sub->add_option("--density", c.density, "Lattice inclusion probability");
  sub->add_option("--level", c.level, "Bipartite level");
  sub->add_option("--seed", c.seed, "Experiment seed");
  sub->add_option("--input", c.input, "CSV point cloud used instead of the generator");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistent homology and fractal dimension experiments"};
  app.set_version_flag("--version", std::string("phdim ") + std::string(phdim::kToolVersion) + " (format version " +
                                        std::to_string(phdim::kFormatVersion) + ")");
  std::string config_path;
  bool print_config = false;
  app.add_option("--config", config_path, "Run the experiment described by a config JSON file");
  app.add_flag("--print-config", print_config, "Print the canonical config JSON instead of running");
  app.require_subcommand(0, 1);

  phdim::ExperimentConfig c;
  Flags f;

  auto* gen = app.add_subcommand("generate", "Sample a generator family to CSV with a JSON sidecar");
  add_generator(gen, c, f);
  add_output(gen, c, false);
  gen->add_flag("--metric", c.input_is_metric, "Treat --input as a distance matrix");

  auto* bar = app.add_subcommand("barcode", "Persistence barcode of a sample or CSV input");
  add_generator(bar, c, f);
  add_output(bar, c);
  bar->add_option("--complex", f.complex, "rips | cech | alpha2d");
  bar->add_option("--degree", c.degree, "Highest homology degree");
  bar->add_option("--budget", c.budget, "Simplex budget");
  bar->add_flag("--metric", c.input_is_metric, "Treat --input as a distance matrix");

  auto* dim = app.add_subcommand("dimension", "Box, PH, MST or PH-complexity dimension estimate");
  add_generator(dim, c, f);
  add_output(dim, c);
  dim->add_option("--method", f.method, "box | ph | mst | ph-complexity");
  dim->add_option("--degree", c.degree, "Homology degree (ph, ph-complexity)");
  dim->add_option("--complex", f.complex, "rips | cech | alpha2d");
  dim->add_option("--sizes", c.sizes, "Increasing sample sizes")->delimiter(',');
  dim->add_option("--scales", c.scales, "Box sizes delta")->delimiter(',');
  dim->add_option("--alpha-grid", c.alpha_grid, "Exponents alpha")->delimiter(',');
  dim->add_flag("--packing", c.packing, "Count 4-delta net points instead of grid boxes");
  dim->add_option("--budget", c.budget, "Simplex budget");
  dim->add_option("--diagnostics", c.diagnostics, "Full diagnostics CSV path");

  auto* mst = app.add_subcommand("mst", "Euclidean minimum spanning tree and its power sums");
  add_generator(mst, c, f);
  add_output(mst, c);
  mst->add_option("--alpha-grid", c.alpha_grid, "Exponents alpha")->delimiter(',');

  auto* arcs = app.add_subcommand("arcs", "Cech PH_1 counts and E^1_1 of the two-arcs samples");
  add_output(arcs, c);
  arcs->add_option("--sizes", c.sizes, "Sample sizes")->delimiter(',');
  arcs->add_option("--budget", c.budget, "Simplex budget");

  auto* bip = app.add_subcommand("bipartite", "Rips PH_1 of the complete bipartite space");
  add_output(bip, c);
  bip->add_option("--level", c.level, "Level n (2^n points per side)");

  auto* stable = app.add_subcommand("stable", "Stable PH_1-class certificate for a lattice subset");
  add_generator(stable, c, f);
  add_output(stable, c);
  stable->add_option("--trials", c.trials, "Perturbation trials");

  auto* xi = app.add_subcommand("xi", "Largest grid subset without a long-lived triangle class");
  add_output(xi, c);
  xi->add_option("--N", c.xi_n, "Grid side");
  xi->add_option("--threshold", c.threshold, "Persistence threshold");
  xi->add_option("--restarts", c.restarts, "Local search restarts");
  xi->add_option("--seed", c.seed, "Experiment seed");

  auto* tp = app.add_subcommand("tp-verify", "Grid check of the total-persistence corner minima");
  add_output(tp, c, false);
  tp->add_option("--N", c.tp_n, "N");
  tp->add_option("--c", c.tp_c, "c");
  tp->add_option("--steps", c.tp_steps, "Grid steps per axis");

  auto* ver = app.add_subcommand("verify", "Run the acceptance checks");
  add_output(ver, c, false);
  ver->add_option("--filter", c.filter, "Run only checks whose name contains this text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : phdim::kExitInvalid;
  }

  try {
    if (!config_path.empty()) {
      if (!app.get_subcommands().empty()) {
        std::cerr << "invalid input: --config cannot be combined with a subcommand\n";
        return phdim::kExitInvalid;
      }
      c = phdim::parse_config(phdim::read_file(config_path));
    } else {
      if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return phdim::kExitInvalid;
      }
      c.command = phdim::parse_command(app.get_subcommands().front()->get_name());
      if (!f.family.empty()) c.family = phdim::parse_family(f.family);
      if (!f.complex.empty()) c.complex = phdim::parse_complex(f.complex);
      if (!f.method.empty()) c.method = phdim::parse_method(f.method);
    }
  } catch (const phdim::Error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return phdim::kExitInvalid;
  }

  if (print_config) {
    std::cout << phdim::canonical_config(c);
    return phdim::kExitOk;
  }
  return phdim::run(c);
}
