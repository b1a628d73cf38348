#pragma once

#include <string>
#include <vector>

#include "equispec/reports.hpp"

namespace equispec {

/// How a computed value is compared with its reference.
enum class Relation { Near, Less, Greater, Equal };

struct ReproduceRow {
  std::string name;
  double computed = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;  // absolute, for Near
  Relation relation = Relation::Near;
  std::string detail;      // symbolic form where the value is an expression
  bool pass = false;
};

struct ReproduceResult {
  std::string suite;
  std::vector<ReproduceRow> rows;
  Json extra;  // suite-specific side information (k_min, spectra, ...)
  bool pass = true;
};

std::vector<std::string> reproduce_suites();

/// Runs one of "sphere-table", "k0", "disk", "nodal", "ledger".
ReproduceResult reproduce(const std::string& suite);

Json reproduce_json(const ReproduceResult& r);

/// Fixed-width pass/fail table, failing rows marked.
std::string reproduce_table(const ReproduceResult& r);

/// kappa for rotation about the x-axis on K0 (pair = -K0 u K0) at a level.
NodalDomains k0_killing_nodal_domains(int level, bool pair);

}  // namespace equispec
