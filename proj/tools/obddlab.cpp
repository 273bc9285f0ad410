// obddlab: build functions and programs, run width and equivalence
// experiments, and run the acceptance suites.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lab/criteria.hpp"
#include "lab/experiment.hpp"
#include "lab/registry.hpp"
#include "obddlab/errors.hpp"
#include "obddlab/fingerprint.hpp"

namespace lab = obddlab::lab;
using obddlab::AddressMode;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapacity = 3;

struct Output {
  std::string path;

  void write(const std::string &text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw obddlab::ParameterError("cannot write " + path);
    out << text;
  }
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw obddlab::ParameterError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int parse_layout(const std::string &text) {
  const std::string digits = text.rfind("q=", 0) == 0 ? text.substr(2) : text;
  try {
    std::size_t used = 0;
    const int q = std::stoi(digits, &used);
    if (used == digits.size())
      return q;
  } catch (const std::logic_error &) {
  }
  throw obddlab::ParameterError("--layout expects q=<power of two>");
}

// A program id, or @file holding a text diagram or quantum JSON.
lab::NamedProgram load_program(const std::string &ref) {
  if (ref.empty() || ref[0] != '@')
    return lab::make_program(ref);
  const std::string text = read_file(ref.substr(1));
  lab::NamedProgram p{ref, obddlab::LeveledObdd{}, 0.5};
  const auto start = text.find_first_not_of(" \t\r\n");
  if (start != std::string::npos && text[start] == '{')
    p.program = obddlab::qobdd_from_json(text);
  else if (text.compare(start, 6, "nobdd ") == 0)
    p.program = obddlab::nobdd_from_text(text);
  else if (text.compare(start, 6, "pobdd ") == 0)
    p.program = obddlab::pobdd_from_text(text);
  else
    p.program = obddlab::obdd_from_text(text);
  return p;
}

obddlab::Bits parse_bits(const std::string &text, int n) {
  if (static_cast<int>(text.size()) != n)
    throw obddlab::ParameterError("--input needs " + std::to_string(n) + " bits");
  obddlab::Bits x;
  for (char c : text) {
    if (c != '0' && c != '1')
      throw obddlab::ParameterError("--input takes 0/1 characters");
    x.push_back(c == '1');
  }
  return x;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Width experiments for ordered binary decision diagrams"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all");

  std::string format = "json";
  std::string fixtures;
  bool timing = false;
  Output out;
  app.add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--fixtures", fixtures, "multiplier fixtures file");
  app.add_flag("--timing", timing, "include wall-clock seconds in reports");
  app.add_option("--out", out.path, "write output to this file");

  auto add_enumeration = [](CLI::App *cmd, std::size_t &samples,
                            std::uint64_t &seed) {
    auto *exhaustive = cmd->add_flag("--exhaustive", "enumerate every input");
    auto *seed_opt = cmd->add_option("--seed", seed, "RNG seed for sampling");
    auto *samples_opt = cmd->add_option("--samples", samples, "sample N inputs")
                            ->check(CLI::PositiveNumber);
    samples_opt->needs(seed_opt);
    samples_opt->excludes(exhaustive);
  };

  // eval
  auto *eval = app.add_subcommand("eval", "truth table of a function, or one value");
  std::string eval_id, eval_input;
  eval->add_option("function", eval_id, "function id")->required();
  eval->add_option("--input", eval_input, "assignment x1..xn as 0/1 characters");

  // nsub
  auto *nsub = app.add_subcommand("nsub", "count distinct subfunctions");
  lab::ExperimentSpec nsub_spec;
  nsub_spec.kind = "nsub";
  nsub->add_option("function", nsub_spec.function, "function id")->required();
  nsub->add_option("--order", nsub_spec.order, "variable order, e.g. 3,1,2");
  nsub->add_option("--cut", nsub_spec.cut, "cut position; default is the max over cuts");
  std::uint64_t nsub_expected = 0;
  auto *nsub_expect = nsub->add_option("--expect", nsub_expected, "expected count");

  // width-exact
  auto *wexact = app.add_subcommand("width-exact", "exact minimum OBDD width N(f)");
  lab::ExperimentSpec wexact_spec;
  wexact_spec.kind = "width-exact";
  wexact->add_option("function", wexact_spec.function, "function id")->required();
  std::uint64_t wexact_expected = 0;
  auto *wexact_expect = wexact->add_option("--expect", wexact_expected, "expected N(f)");

  // build
  auto *build = app.add_subcommand("build", "serialize a program");
  std::string build_id;
  build->add_option("program", build_id, "program id or @file")->required();

  // reorder
  auto *reorder = app.add_subcommand("reorder", "lift a commutative program");
  std::string reorder_id, reorder_layout, reorder_mode = "xor";
  reorder->add_option("program", reorder_id, "program id or @file")->required();
  reorder->add_option("--layout", reorder_layout, "q=<blocks>; default is the arity");
  reorder->add_option("--mode", reorder_mode, "address mode")
      ->check(CLI::IsMember({"direct", "xor"}));
  bool reorder_assume = false;
  reorder->add_flag("--assume-commutative", reorder_assume,
                    "skip the commutativity check (needed above 12 variables)");

  // verify
  auto *verify = app.add_subcommand("verify", "run one experiment");
  std::string verify_spec_path, verify_kind, verify_function, verify_program,
      verify_layout, verify_mode = "xor";
  std::size_t verify_samples = 0;
  std::uint64_t verify_seed = 0;
  double verify_eps = 0.0;
  verify->add_option("--spec", verify_spec_path, "experiment spec as a JSON file");
  verify->add_option("--kind", verify_kind, "experiment kind")
      ->check(CLI::IsMember(lab::kExperimentKinds));
  verify->add_option("--function", verify_function, "function id");
  verify->add_option("--program", verify_program, "program id");
  verify->add_option("--layout", verify_layout, "q=<blocks>");
  verify->add_option("--mode", verify_mode, "address mode")
      ->check(CLI::IsMember({"direct", "xor"}));
  auto *verify_eps_opt = verify->add_option("--epsilon", verify_eps, "error margin");
  add_enumeration(verify, verify_samples, verify_seed);

  // suite
  auto *suite = app.add_subcommand("suite", "run an acceptance suite");
  std::string suite_id;
  suite->add_option("id", suite_id, "paper-core, quick, or A1..A9")->required();

  // report
  auto *report = app.add_subcommand("report", "re-emit a saved JSON report");
  std::string report_path;
  report->add_option("file", report_path, "report file")->required();

  // multipliers
  auto *mult = app.add_subcommand("multipliers", "search a fingerprint multiplier set");
  int mult_modulus = 0, mult_t = 1;
  double mult_target = 1.0 / 3.0;
  obddlab::SearchBudget budget;
  mult->add_option("--modulus", mult_modulus, "M")->required();
  mult->add_option("--t", mult_t, "number of multipliers")->required();
  mult->add_option("--target", mult_target, "largest allowed error");
  mult->add_option("--budget", budget.max_candidates, "candidate budget");
  mult->add_option("--seed", budget.seed, "seed for random search");

  auto *list = app.add_subcommand("list", "describe function and program ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (!fixtures.empty())
      lab::set_fixtures_path(fixtures);

    if (*list) {
      out.write(lab::describe_ids());
      return kExitPass;
    }
    if (*eval) {
      const lab::NamedFunction f = lab::make_function(eval_id);
      if (!eval_input.empty()) {
        const auto v = obddlab::evaluate(f.fn, parse_bits(eval_input, f.fn.arity()));
        out.write((v ? std::string(*v ? "1" : "0") : std::string("undefined")) + "\n");
        return kExitPass;
      }
      const obddlab::PartialHex hex = obddlab::to_hex(f.fn);
      nlohmann::json j = {{"id", eval_id}, {"n", f.fn.arity()}, {"table", hex.values}};
      if (!f.total)
        j["mask"] = hex.mask;
      out.write(j.dump(2) + "\n");
      return kExitPass;
    }
    if (*build) {
      out.write(lab::serialize(load_program(build_id).program));
      return kExitPass;
    }
    if (*reorder) {
      const lab::NamedProgram p = load_program(reorder_id);
      const int q = reorder_layout.empty() ? lab::program_arity(p.program)
                                           : parse_layout(reorder_layout);
      const obddlab::BlockLayout layout(q);
      const AddressMode mode = obddlab::parse_address_mode(reorder_mode);
      obddlab::LiftOptions options;
      options.assume_commutative = reorder_assume;
      const lab::AnyProgram lifted = std::visit(
          [&](const auto &prog) -> lab::AnyProgram {
            using T = std::decay_t<decltype(prog)>;
            if constexpr (std::is_same_v<T, obddlab::QuantumProgram>) {
              if (mode != AddressMode::prefix_xor)
                throw obddlab::ParameterError(
                    "quantum programs lift with xor addressing only");
              return obddlab::xor_reorder_qobdd(prog, layout);
            } else if constexpr (std::is_same_v<T, obddlab::LeveledObdd>) {
              return obddlab::reorder_obdd(prog, layout, mode, options);
            } else if constexpr (std::is_same_v<T, obddlab::Nobdd>) {
              return obddlab::reorder_nobdd(prog, layout, mode, options);
            } else {
              return obddlab::reorder_pobdd(prog, layout, mode, options);
            }
          },
          p.program);
      out.write(lab::serialize(lifted));
      return kExitPass;
    }
    if (*mult) {
      const obddlab::MultiplierSearch s =
          obddlab::search_good_multipliers(mult_modulus, mult_t, mult_target, budget);
      const nlohmann::json j = {{"modulus", mult_modulus},
                                {"t", mult_t},
                                {"target", mult_target},
                                {"found", s.found},
                                {"exhaustive", s.exhaustive},
                                {"multipliers", s.multipliers},
                                {"worst_error", s.worst_error},
                                {"candidates_tried", s.candidates_tried}};
      out.write(j.dump(2) + "\n");
      return s.found ? kExitPass : kExitFail;
    }
    if (*report) {
      const nlohmann::json j = nlohmann::json::parse(read_file(report_path));
      std::vector<lab::Report> reports;
      if (j.contains("reports"))
        for (const auto &r : j.at("reports"))
          reports.push_back(lab::report_from_json(r));
      else
        reports.push_back(lab::report_from_json(j));
      out.write(lab::emit(reports, format));
      bool ok = true;
      for (const auto &r : reports)
        ok = ok && r.pass();
      return ok ? kExitPass : kExitFail;
    }
    if (*suite) {
      const std::vector<lab::Report> reports = lab::run_suite(suite_id, timing);
      out.write(lab::emit(reports, format));
      for (const auto &r : reports)
        if (!r.pass())
          return kExitFail;
      return kExitPass;
    }

    lab::ExperimentSpec spec;
    if (*nsub) {
      spec = nsub_spec;
      if (*nsub_expect)
        spec.expected = nsub_expected;
    } else if (*wexact) {
      spec = wexact_spec;
      if (*wexact_expect)
        spec.expected = wexact_expected;
    } else {
      if (!verify_spec_path.empty()) {
        spec = lab::spec_from_json(nlohmann::json::parse(read_file(verify_spec_path)));
      } else {
        if (verify_kind.empty())
          throw obddlab::ParameterError("verify needs --spec or --kind");
        spec.kind = verify_kind;
        spec.function = verify_function;
        spec.program = verify_program;
        if (!verify_layout.empty())
          spec.layout = parse_layout(verify_layout);
        spec.mode = obddlab::parse_address_mode(verify_mode);
        if (*verify_eps_opt)
          spec.epsilon = verify_eps;
        if (verify_samples != 0)
          spec.inputs = lab::Enumeration{false, verify_samples, verify_seed};
      }
    }
    const lab::Report r = lab::run(spec, timing);
    out.write(lab::emit(r, format));
    return r.pass() ? kExitPass : kExitFail;
  } catch (const obddlab::CapacityError &e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const nlohmann::json::exception &e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument &e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const obddlab::DependencyError &e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
