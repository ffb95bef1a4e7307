#pragma once

// Text serialization. Every floating-point value goes out with 17
// significant digits so files round-trip bit-exactly.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "logdelta/dynamics.hpp"
#include "logdelta/fields.hpp"
#include "logdelta/stationary.hpp"

namespace logdelta {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// printf("%.17g").
std::string format_double(double v);

/// Serializes with format_double for every number (nlohmann's own dump
/// prints the shortest round-trip form instead).
std::string dump_json(const Json& doc, int indent = 2);

void write_sweep_csv(std::ostream& os, const std::vector<BifurcationPoint>& sweep);
Json sweep_json(const std::vector<BifurcationPoint>& sweep);

void write_field_csv(std::ostream& os, const Field& u);
Json field_json(const Field& u);
/// Parses x,re,im rows written by write_field_csv; the grid is recovered from
/// the coordinates and must be a staggered grid.
Field read_field_csv(const std::filesystem::path& path);

Json report_json(const FunctionalReport& r);
Json residual_json(const StationaryResidual& r);
Json params_json(const GroundStateParams& p);

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRecord>& records);
Json stability_json(const StabilitySummary& s);

/// Writes to a sibling temporary file and renames it over `path`; on any
/// failure the temporary is removed and IoError is thrown, so no partial file
/// is left behind.
void atomic_write(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

}  // namespace logdelta
