// Command-line front end for the Kraus-pair entanglement toolkit.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include "ktangle/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace ktangle::cli;

struct ChannelFlags {
  std::string name;
  std::string k0, k1, unitary;

  void attach(CLI::App* cmd) {
    cmd->add_option("--channel", name,
                    "channel family: ad, dephasing, phase-flip, custom, "
                    "unitary");
    cmd->add_option("--k0", k0,
                    "custom channel: 4 comma-separated complex entries of K0, "
                    "row-major, each in re+imj form (e.g. 0.5-0.5j)");
    cmd->add_option("--k1", k1, "custom channel: 4 entries of K1");
    cmd->add_option("--unitary", unitary,
                    "unitary channel: 16 complex entries of the S-E dilation, "
                    "row-major over the basis index 2s+e");
  }

  void apply(ChannelSpec& spec) const {
    if (!name.empty()) spec.kind = channel_from_name(name);
    if (!k0.empty()) spec.k0 = parse_mat2(k0);
    if (!k1.empty()) spec.k1 = parse_mat2(k1);
    if (!unitary.empty()) spec.unitary = parse_mat4(unitary);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement of a 3-qubit register evolving under a local "
               "Kraus channel: closed-form tangles, family classification, "
               "parameter sweeps and oracle verification"};
  app.require_subcommand(1);

  // classify ----------------------------------------------------------------
  auto* classify_cmd = app.add_subcommand(
      "classify", "report every tangle and the entanglement family of one "
                  "(channel, initial state) point");
  ChannelFlags classify_channel;
  classify_channel.attach(classify_cmd);
  std::optional<double> cl_p, cl_rho, cl_phi, cl_e0, cl_tol;
  std::string cl_config;
  classify_cmd->add_option("--p", cl_p, "channel strength in [0,1]");
  classify_cmd->add_option("--rho-ee", cl_rho,
                           "initial excited population of S");
  classify_cmd->add_option("--phi", cl_phi, "initial coherence phase");
  classify_cmd->add_option("--e0sq", cl_e0,
                           "initial S-S' entanglement (squared concurrence)");
  classify_cmd->add_option("--tol", cl_tol, "classification tolerance");
  classify_cmd->add_option("--config", cl_config, "JSON config file");

  // sweep -------------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "evaluate the closed forms over a parameter grid and emit CSV");
  ChannelFlags sweep_channel;
  sweep_channel.attach(sweep_cmd);
  std::optional<int> sw_figure, sw_grid;
  std::string sw_p, sw_rho, sw_e0, sw_out, sw_config;
  std::optional<double> sw_phi, sw_tol;
  sweep_cmd->add_option("--figure", sw_figure,
                        "preset 1-9 reproducing the published surface grids");
  sweep_cmd->add_option("--grid", sw_grid,
                        "points per sweep axis for --figure (default 50)");
  sweep_cmd->add_option("--p", sw_p, "value or start:stop:count");
  sweep_cmd->add_option("--rho-ee", sw_rho, "value or start:stop:count");
  sweep_cmd->add_option("--e0sq", sw_e0, "value or start:stop:count");
  sweep_cmd->add_option("--phi", sw_phi, "initial coherence phase (fixed)");
  sweep_cmd->add_option("--tol", sw_tol, "classification tolerance");
  sweep_cmd->add_option("--out", sw_out, "CSV output path (default stdout)");
  sweep_cmd->add_option("--config", sw_config, "JSON config file");

  // verify ------------------------------------------------------------------
  auto* verify_cmd = app.add_subcommand(
      "verify", "run the closed-form vs state-vector oracle suite on seeded "
                "random instances");
  std::optional<int> vf_n;
  std::optional<std::uint64_t> vf_seed;
  std::optional<double> vf_tol;
  std::string vf_config;
  verify_cmd->add_option("--n", vf_n, "number of random instances");
  verify_cmd->add_option("--seed", vf_seed, "RNG seed");
  verify_cmd->add_option("--tol", vf_tol,
                         "override every identity threshold with one value");
  verify_cmd->add_option("--config", vf_config, "JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*classify_cmd) {
      ClassifyConfig cfg;
      if (!cl_config.empty()) apply_json(cl_config, cfg);
      classify_channel.apply(cfg.channel);
      if (cl_p) cfg.p = *cl_p;
      if (cl_rho) cfg.rho_ee = *cl_rho;
      if (cl_phi) cfg.phi = *cl_phi;
      if (cl_e0) cfg.e0sq = *cl_e0;
      if (cl_tol) cfg.tol = *cl_tol;
      return cmd_classify(cfg, std::cout);
    }
    if (*sweep_cmd) {
      SweepConfig cfg;
      if (sw_figure) cfg = figure_preset(*sw_figure, sw_grid.value_or(50));
      if (!sw_config.empty()) apply_json(sw_config, cfg);
      sweep_channel.apply(cfg.channel);
      if (!sw_p.empty()) cfg.p = parse_grid(sw_p);
      if (!sw_rho.empty()) cfg.rho_ee = parse_grid(sw_rho);
      if (!sw_e0.empty()) cfg.e0sq = parse_grid(sw_e0);
      if (sw_phi) cfg.phi = *sw_phi;
      if (sw_tol) cfg.tol = *sw_tol;
      if (!sw_out.empty()) cfg.out = sw_out;
      return cmd_sweep(cfg, std::cerr);
    }
    if (*verify_cmd) {
      VerifyConfig cfg;
      if (!vf_config.empty()) apply_json(vf_config, cfg);
      if (vf_n) cfg.n = *vf_n;
      if (vf_seed) cfg.seed = *vf_seed;
      if (vf_tol) cfg.tol = *vf_tol;
      return cmd_verify(cfg, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
