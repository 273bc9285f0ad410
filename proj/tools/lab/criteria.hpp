// The acceptance criteria A1..A9 and the named suites built from them.

#pragma once

#include <string>
#include <vector>

#include "experiment.hpp"

namespace obddlab::lab {

struct Criterion {
  std::string id;
  std::string title;
  Report (*run)();
};

const std::vector<Criterion> &criteria();

/// Runs one criterion; the report kind is its id.
Report run_criterion(const std::string &id, bool timing = false);

/// Members of "paper-core" or "quick". ParameterError on unknown or empty ids.
std::vector<std::string> suite_members(const std::string &suite);

std::vector<Report> run_suite(const std::string &suite, bool timing = false);

} // namespace obddlab::lab
