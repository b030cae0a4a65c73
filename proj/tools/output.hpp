#pragma once

#include "jdrift/walker.hpp"

#include "json.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace jdrift::cli {

inline constexpr const char* kToolVersion = "1.0.0";

// %.17g rendering: enough digits to round-trip a double, so re-running a
// manifest reproduces byte-identical files.
std::string format_double(double value);

// CSV with a `#schema=` version line, optional `#scalar name value` lines,
// then one header row and data rows.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& schema);

    void scalar(const std::string& name, const std::string& value);
    void scalar(const std::string& name, double value);
    void scalar(const std::string& name, long value);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
    bool header_written_ = false;
};

// Mean curve with a +-1 population-std band and a dashed equilibrium line,
// in the layout of the trajectory figures.
void write_trajectory_svg(const std::string& path, const TrajectoryBatch& batch, double d_star);

struct RunManifest {
    std::string subcommand;
    nlohmann::json parameters;
    std::vector<std::string> outputs;
};

void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace jdrift::cli
