#include "itops/report.hpp"

#include <cmath>

namespace itops {

ResidualEntry& ResidualReport::entry(const std::string& name) {
  for (auto& e : entries_)
    if (e.name == name) return e;
  entries_.push_back(ResidualEntry{});
  entries_.back().name = name;
  return entries_.back();
}

const ResidualEntry* ResidualReport::find(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

void ResidualReport::record(const std::string& name, double residual) {
  auto& e = entry(name);
  if (std::isnan(residual) || std::isnan(e.max_residual))
    e.max_residual = std::nan("");
  else if (residual > e.max_residual)
    e.max_residual = residual;
  ++e.samples;
}

void ResidualReport::finalize(double tol) {
  for (auto& e : entries_) {
    e.tol = tol;
    if (e.verdict)
      e.pass = *e.verdict;
    else
      e.pass = std::isfinite(e.max_residual) && e.max_residual < tol;
  }
}

bool ResidualReport::all_pass() const {
  for (const auto& e : entries_)
    if (!e.pass) return false;
  return !entries_.empty();
}

double ResidualReport::max_residual() const {
  double m = 0.0;
  for (const auto& e : entries_) {
    if (e.verdict) continue;
    if (std::isnan(e.max_residual)) return e.max_residual;
    m = std::max(m, e.max_residual);
  }
  return m;
}

Json ResidualReport::to_json() const {
  Json out = Json::object();
  for (const auto& e : entries_) {
    Json j;
    if (std::isfinite(e.max_residual))
      j["max_residual"] = e.max_residual;
    else
      j["max_residual"] = nullptr;
    j["samples"] = e.samples;
    j["tol"] = e.tol;
    j["pass"] = e.pass;
    for (auto it = e.extra.begin(); it != e.extra.end(); ++it) j[it.key()] = it.value();
    out[e.name] = j;
  }
  return out;
}

}  // namespace itops
