// Experiment specs, the runner and report serialisation.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "obddlab/reorder.hpp"

namespace obddlab::lab {

struct Check {
  std::string name;
  bool pass = false;
  nlohmann::json measured;
  nlohmann::json bound;
};

struct Report {
  std::string kind;
  nlohmann::json spec;
  std::vector<Check> checks;
  std::string claim;
  std::optional<double> seconds;

  bool pass() const;
  Check &add(std::string name, bool pass, nlohmann::json measured,
             nlohmann::json bound);
};

nlohmann::json to_json(const Report &r);
Report report_from_json(const nlohmann::json &j);

/// "json" (sorted keys, one document) or "csv" (header plus one row per
/// check). Throws ParameterError on other formats.
std::string emit(const std::vector<Report> &reports, const std::string &format);
std::string emit(const Report &report, const std::string &format);

struct Enumeration {
  bool exhaustive = true;
  std::size_t samples = 0;
  std::optional<std::uint64_t> seed;
};

/// Exhaustive enumeration is limited to this many variables.
inline constexpr int kMaxExhaustiveVars = 16;

struct ExperimentSpec {
  std::string kind;
  std::string function;
  std::string program;
  std::string order; ///< comma-separated permutation; empty is identity
  int cut = 0;       ///< 0 means the maximum over all cuts
  std::optional<int> layout;
  AddressMode mode = AddressMode::prefix_xor;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> expected;
  double tolerance = 1e-9;
  Enumeration inputs;
};

inline const std::vector<std::string> kExperimentKinds = {
    "width-exact",       "nsub",           "equivalence", "error-margin",
    "reorder-roundtrip", "hierarchy-probe"};

nlohmann::json to_json(const ExperimentSpec &spec);
/// Throws ParameterError on unknown kinds, missing ids or unknown keys.
ExperimentSpec spec_from_json(const nlohmann::json &j);
void validate(const ExperimentSpec &spec);

Report run(const ExperimentSpec &spec, bool timing = false);

/// A uniformly random allowed input of `layout` under `mode`.
Bits random_allowed_input(const BlockLayout &layout, AddressMode mode,
                          std::mt19937_64 &rng);

/// Calls visit(x) on every input (exhaustive) or on `samples` seeded draws.
/// With a layout, sampled draws are allowed inputs of it.
template <class Visit>
void for_each_input(int n, const Enumeration &e, const BlockLayout *layout,
                    AddressMode mode, Visit &&visit);

} // namespace obddlab::lab

#include "experiment_inputs.ipp"
