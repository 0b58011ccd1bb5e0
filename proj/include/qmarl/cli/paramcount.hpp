#pragma once

#include <iosfwd>

#include <json.hpp>

#include "qmarl/cli/config.hpp"

namespace qmarl::cli {

// Parameter accounting in the published table's shape: preprocessing / VQC /
// readout / actor / critic / total, plus flags for cells the table reports
// inconsistently with every convention this project supports.
nlohmann::json paramcount_report(const ExperimentConfig& cfg);

void print_paramcount(const nlohmann::json& report, std::ostream& out);

// Compares a report against a golden-cell file:
//   [{"config": {...}, "expect": {"actor": 496, ...},
//     "expect_flags": ["readout"]}, ...]
// Prints offending cells; returns the number of mismatches.
int check_paramcount_expectations(const nlohmann::json& golden, std::ostream& out);

}  // namespace qmarl::cli
