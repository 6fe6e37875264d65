#pragma once

#include <string>
#include <vector>

#include "aklab/operators.hpp"

namespace aklab {

struct VerificationReport {
  std::string version;
  std::string config_json;  // canonical config echo
  std::vector<OperatorReport> entries;
  double calabi = 0.0;

  bool pass() const;
};

/// Sign and normalization conventions embedded in every report.
std::string convention_sheet_json();

/// Serializes a report. An empty timestamp omits the field, which makes the output byte-comparable.
std::string report_to_json(const VerificationReport& report, const std::string& timestamp);

/// Writes through a temporary file in the same directory and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

}  // namespace aklab
