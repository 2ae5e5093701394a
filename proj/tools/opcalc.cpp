#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "opcalc/cli.hpp"

using namespace opcalc;

namespace {

// Flags shared by every subcommand.
struct Common {
  std::string ring = "z";
  std::optional<int> r_max, d_min, d_max;
  std::uint64_t seed = 20261016;
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--ring", c.ring, "coefficient ring: z, q or fp:<p>")->capture_default_str();
  sub->add_option("--arity-max", c.r_max, "largest arity");
  sub->add_option("--degree-min", c.d_min, "lowest degree of the window");
  sub->add_option("--degree-max", c.d_max, "highest degree of the window");
  sub->add_option("--seed", c.seed, "seed for randomised checks")->capture_default_str();
  sub->add_option("--out", c.out, "write the JSON report here instead of stdout");
}

// Registers a string option that lands in JobSpec::options under `key`.
void opt(CLI::App* sub, std::map<std::string, std::string>& o, const std::string& key, const std::string& help) {
  sub->add_option_function<std::string>("--" + key, [&o, key](const std::string& v) { o[key] = v; }, help);
}

void flag(CLI::App* sub, std::map<std::string, std::string>& o, const std::string& key, const std::string& help) {
  sub->add_flag_callback("--" + key, [&o, key] { o[key] = "1"; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opcalc: exact computations with operads, surjections and partition Lie algebras"};
  app.require_subcommand(1);
  Common common;
  std::string input;
  std::map<std::string, std::string> o;

  auto* hom = app.add_subcommand("homology", "homology of a complex given as JSON");
  hom->add_option("--input", input, "GComplex JSON file")->required()->check(CLI::ExistingFile);
  opt(hom, o, "degree", "only this degree");

  auto* comp = app.add_subcommand("compose", "composition product of two symmetric sequences");
  comp->add_option("--input", input, "left SymSeq JSON file")->required()->check(CLI::ExistingFile);
  opt(comp, o, "right", "right SymSeq JSON file");
  opt(comp, o, "mode", "orbits or invariants");

  auto* surj = app.add_subcommand("surj", "the surjections cooperad");
  flag(surj, o, "ranks", "ranks of Surj(r)_d");
  flag(surj, o, "check", "cooperad axioms and the retraction");
  flag(surj, o, "homology", "homology table");
  opt(surj, o, "arity", "single arity");

  auto* plie = app.add_subcommand("plie", "the spectral partition Lie operad");
  flag(plie, o, "constants", "composition structure constants");
  flag(plie, o, "check", "operad axioms and the mixed composition rule");
  flag(plie, o, "homology", "homology table");
  opt(plie, o, "arity", "single arity");

  auto* part = app.add_subcommand("partition", "partition lattices and the subdivided bar construction");
  opt(part, o, "poset", "the partition poset P_r");
  opt(part, o, "sdbar", "sdBar(Com^nu)(r) as a simplicial set");
  opt(part, o, "dual-operad", "Lie^pi_Delta(r)");
  flag(part, o, "check", "with --sdbar: simplicial identities, cocomposition and homology");
  flag(part, o, "homology", "with --dual-operad: normalised cohomology");

  auto* bar = app.add_subcommand("bar", "homology of the bar construction");
  auto* cobar = app.add_subcommand("cobar", "homology of the cobar construction");
  auto* kd = app.add_subcommand("kd", "homology of the Koszul dual");
  auto* cop = app.add_subcommand("check-operad", "operad axioms in a window");
  auto* ccoop = app.add_subcommand("check-cooperad", "cooperad axioms in a window");
  for (auto* s : {bar, cobar, kd, cop, ccoop}) opt(s, o, "of", "object name");
  for (auto* s : {bar, cobar, kd}) opt(s, o, "arity", "single arity");

  auto* acc = app.add_subcommand("acceptance", "run the acceptance suite");
  flag(acc, o, "all", "every criterion (the default)");
  opt(acc, o, "criterion", "comma-separated criterion numbers");

  auto* diff = app.add_subcommand("diff-golden", "compare a homology table with a golden one");
  opt(diff, o, "current", "table produced now");
  opt(diff, o, "golden", "frozen table");

  for (auto* s : app.get_subcommands({})) add_common(s, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  JobSpec job;
  job.command = app.get_subcommands().front()->get_name();
  job.ring = common.ring;
  job.r_max = common.r_max;
  job.d_min = common.d_min;
  job.d_max = common.d_max;
  job.seed = common.seed;
  job.input = input;
  job.output = common.out;
  job.options = o;

  try {
    JobResult res = run(job);
    for (auto& l : res.lines) std::cerr << l << "\n";
    std::string text = dump(res.payload);
    if (job.output.empty())
      std::cout << text;
    else
      write_file_atomic(job.output, text);
    return res.ok ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
