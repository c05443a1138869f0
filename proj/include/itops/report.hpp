#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace itops {

using Json = nlohmann::ordered_json;

struct ResidualEntry {
  std::string name;
  double max_residual = 0.0;
  int samples = 0;
  double tol = 0.0;
  bool pass = false;
  // Set for properties judged by something other than residual < tol.
  std::optional<bool> verdict;
  Json extra = Json::object();
};

// Ordered collection of named max-residuals.
class ResidualReport {
 public:
  ResidualEntry& entry(const std::string& name);
  const ResidualEntry* find(const std::string& name) const;

  // Folds one sample into the named entry (NaN is sticky).
  void record(const std::string& name, double residual);

  // Fixes tol on every entry and computes pass flags.
  void finalize(double tol);
  bool all_pass() const;
  double max_residual() const;

  const std::vector<ResidualEntry>& entries() const { return entries_; }
  Json to_json() const;

 private:
  std::vector<ResidualEntry> entries_;
};

}  // namespace itops
