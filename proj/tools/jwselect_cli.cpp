#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jwselect/jwselect.hpp"

namespace {

using namespace jwselect;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct CliConfig {
  std::vector<std::size_t> n{4};
  std::size_t k = 2;
  std::string variant = "star";
  std::string layout = "auto";
  std::size_t controls = 0;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  std::string input;
  std::string output;
};

Variant parse_variant(const std::string& s) { return s == "plain" ? Variant::plain : Variant::star; }

LayoutMode layout_for(const CliConfig& cfg) {
  if (cfg.layout == "k2") return LayoutMode::k2;
  if (cfg.layout == "general") return LayoutMode::general;
  return cfg.k == 2 ? LayoutMode::k2 : LayoutMode::general;
}

std::size_t single_n(const CliConfig& cfg) {
  if (cfg.n.size() != 1) throw CLI::ValidationError("--n", "expects exactly one value here");
  return cfg.n.front();
}

void write_out(const CliConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw Error("cannot open output file '" + cfg.output + "'");
  f << text;
}

int cmd_transform(const CliConfig& cfg) {
  std::ifstream f(cfg.input, std::ios::binary);
  if (!f) throw Error("cannot open input file '" + cfg.input + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  const std::size_t n = single_n(cfg);
  const PauliLCU lcu = jw_transform(parse_hamiltonian(buf.str(), n, cfg.k));
  SelectionLayout layout = SelectionLayout::make_k2(n);
  if (cfg.layout == "general" || (cfg.layout == "auto" && !fits_k2(lcu))) {
    layout = SelectionLayout::make_general(n, cfg.k);
  }
  write_out(cfg, lcu_table(encode_lcu(lcu, layout), layout));
  return kExitPass;
}

int cmd_synth(const CliConfig& cfg) {
  const std::size_t n = single_n(cfg);
  const SelectCircuit sc =
      controlled_select(n, cfg.k, layout_for(cfg), parse_variant(cfg.variant), cfg.controls);
  write_out(cfg, emit_text(sc.circuit));
  return kExitPass;
}

int cmd_resources(const CliConfig& cfg) {
  write_out(cfg, formula_csv(check_against_formulas(cfg.n)));
  return kExitPass;
}

int cmd_verify(const CliConfig& cfg) {
  const VerifyReport rep = verify_select(single_n(cfg), cfg.k, parse_variant(cfg.variant),
                                         cfg.trials, cfg.seed, layout_for(cfg));
  write_out(cfg, rep.to_json() + "\n");
  return rep.pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jordan-Wigner SELECT synthesis and verification"};
  app.require_subcommand(1);
  CliConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--k", cfg.k, "address slots per term")->check(CLI::Range(1, 64));
    sub->add_option("--variant", cfg.variant, "plain or star")
        ->check(CLI::IsMember({"plain", "star"}));
    sub->add_option("--layout", cfg.layout, "auto, k2 or general")
        ->check(CLI::IsMember({"auto", "k2", "general"}));
    sub->add_option("--output", cfg.output, "write to file instead of stdout");
  };

  auto* transform = app.add_subcommand("transform", "Jordan-Wigner transform to an LCU table");
  transform->add_option("--input", cfg.input, "Hamiltonian text file")->required();
  transform->add_option("--n", cfg.n, "number of orbitals")->required()->expected(1);
  add_common(transform);

  auto* synth = app.add_subcommand("synth", "emit a SELECT circuit");
  synth->add_option("--n", cfg.n, "number of orbitals")->required()->expected(1);
  synth->add_option("--controls", cfg.controls, "extra controls on SELECT");
  add_common(synth);

  auto* resources = app.add_subcommand("resources", "compare measured costs with formulas");
  resources->add_option("--n", cfg.n, "one or more sizes")->expected(1, 64);
  resources->add_option("--output", cfg.output, "write to file instead of stdout");

  auto* verify = app.add_subcommand("verify", "check SELECT against the Pauli oracle");
  verify->add_option("--n", cfg.n, "number of orbitals")->required()->expected(1);
  verify->add_option("--trials", cfg.trials, "random system states per selection word");
  verify->add_option("--seed", cfg.seed, "random seed");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*transform) return cmd_transform(cfg);
    if (*synth) return cmd_synth(cfg);
    if (*resources) {
      if (resources->count("--n") == 0) cfg.n = {2, 4, 8, 16, 32, 64};
      return cmd_resources(cfg);
    }
    if (*verify) return cmd_verify(cfg);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
