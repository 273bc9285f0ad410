// Named functions and programs for the command line and the experiment
// runner. An id is `name:key=value,key=value`; see describe_ids().

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "obddlab/diagrams.hpp"
#include "obddlab/qobdd.hpp"
#include "obddlab/reorder.hpp"

namespace obddlab::lab {

struct ParsedId {
  std::string name;
  std::map<std::string, std::string> params;

  bool has(const std::string &key) const { return params.count(key) != 0; }
  int integer(const std::string &key) const;
  int integer(const std::string &key, int fallback) const;
  double real(const std::string &key, double fallback) const;
  std::string text(const std::string &key, const std::string &fallback) const;
};

/// Throws ParameterError on malformed ids.
ParsedId parse_id(const std::string &id);

struct NamedFunction {
  std::string id;
  PartialBoolFn fn;
  bool total = true;
  /// Lower bound on N(f) and the claim it comes from, when one is known.
  std::optional<std::uint64_t> width_bound;
  std::string claim;
};

NamedFunction make_function(const std::string &id);

using AnyProgram = std::variant<LeveledObdd, Nobdd, Pobdd, QuantumProgram>;

struct NamedProgram {
  std::string id;
  AnyProgram program;
  /// Margin the program is designed for (bounded-error programs only).
  double epsilon = 0.5;
};

NamedProgram make_program(const std::string &id);

int program_arity(const AnyProgram &p);
std::size_t program_width(const AnyProgram &p);
const char *program_kind(const AnyProgram &p);
/// Acceptance probability (0 or 1 for deterministic and nondeterministic).
double program_accept(const AnyProgram &p, std::span<const std::uint8_t> x);
std::string serialize(const AnyProgram &p);

/// Multiplier sets stored in the fixtures file.
struct MultiplierFixture {
  int modulus = 0;
  std::vector<int> multipliers;
  double worst_error = 1.0;
  double target = 1.0 / 3.0;
  bool target_met = false;
};

/// Location of fixtures/multipliers.json; overridable for the CLI.
void set_fixtures_path(const std::string &path);
const std::string &fixtures_path();

MultiplierFixture eq_multipliers(int q);
MultiplierFixture modp_multipliers(int p);

std::string describe_ids();

} // namespace obddlab::lab
