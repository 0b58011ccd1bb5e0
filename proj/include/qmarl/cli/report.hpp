#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace qmarl::cli {

struct ReportOptions {
    std::string out_dir = "report";
    int window = 100;  // rolling-mean window
};

struct VariantSummary {
    std::string dir;
    std::string label;          // env/entanglement/hybridisation
    int n_seeds_expected = 0;
    int n_seeds_present = 0;
    bool complete = true;
    double mean = 0.0;  // mean metric over all episodes and seeds
    double std = 0.0;   // across per-seed means
    double best = 0.0;  // best per-seed mean
    double final_mean = 0.0;  // rolling value at the end, averaged over seeds
};

struct ReportResult {
    std::vector<VariantSummary> variants;
    bool any_incomplete = false;
};

// Aggregates finished experiment directories: writes one rolling-mean series
// CSV per directory (mean and std across seeds) plus summary_table.csv with
// Mean / Std / Best columns. Missing seed files are reported and skipped.
ReportResult write_report(const std::vector<std::string>& result_dirs,
                          const ReportOptions& options);

}  // namespace qmarl::cli
