#pragma once

#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace qmarl {

// Rolling mean over the trailing `window` entries (shorter at the start).
std::vector<double> rolling_mean(std::span<const double> series, int window);

// Fixed "%.10g" float formatting so metric files are byte-stable across runs.
std::string format_metric(double value);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    void row(std::span<const double> values);
    void close();

private:
    std::ofstream out_;
    std::size_t n_columns_;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column_index(const std::string& name) const;  // -1 when absent
    std::vector<double> column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace qmarl
