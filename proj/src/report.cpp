#include "aklab/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace aklab {

using nlohmann::ordered_json;

bool VerificationReport::pass() const {
  for (const auto& e : entries)
    if (!e.pass) return false;
  return true;
}

namespace {

ordered_json conventions() {
  return ordered_json{
      {"riemann", "R(X,Y) = D_Y D_X - D_X D_Y + D_[X,Y] (minus the standard curvature); Ric is the standard positive Ricci"},
      {"d_c", "d^c f = -df o J"},
      {"two_form_inner", "(a, b) = (1/2) a_ij b^ij"},
      {"endomorphism_inner", "(u, v) = g_ab g^cd u^a_c v^b_d"},
      {"nijenhuis", "N(X,Y) = ([JX,JY] - J[JX,Y] - J[X,JY] - [X,Y]) / 4"},
      {"P", "P(f) = L_{J grad f} J / 2"},
      {"flow", "dJ/dt = J P(s) = J (L_K J) / 2, K = J grad s"},
      {"symbol", "principal part of 2 JP(JP)^* is v -> (v, Xi) Xi / 2"},
  };
}

ordered_json entry_json(const OperatorReport& r) {
  return ordered_json{{"name", r.name},         {"pass", r.pass},           {"absolute", r.absolute},
                      {"reference", r.reference}, {"relative", r.relative}, {"tolerance", r.tolerance},
                      {"relative_test", r.relative_test}, {"m", r.m},        {"n", r.n},
                      {"note", r.note}};
}

}  // namespace

std::string convention_sheet_json() { return conventions().dump(2); }

std::string report_to_json(const VerificationReport& report, const std::string& timestamp) {
  ordered_json out;
  out["artifact"] = "aklab";
  out["version"] = report.version;
  if (!timestamp.empty()) out["timestamp"] = timestamp;
  out["pass"] = report.pass();
  out["calabi"] = report.calabi;
  out["conventions"] = conventions();
  out["config"] = report.config_json.empty() ? ordered_json::object() : ordered_json::parse(report.config_json);
  ordered_json entries = ordered_json::array();
  for (const auto& e : report.entries) entries.push_back(entry_json(e));
  out["checks"] = entries;
  return out.dump(2) + "\n";
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace aklab
