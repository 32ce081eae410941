#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <string>

#include "seirint/galois.hpp"
#include "seirint/risch.hpp"

namespace seirint {

enum class Verdict { pass, fail, elementary, non_elementary, discrepancy };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::elementary: return "elementary";
    case Verdict::non_elementary: return "non_elementary";
    case Verdict::discrepancy: return "discrepancy";
  }
  return "fail";
}

/// Exit status for a delivered verdict: 0 unless a check failed or disagrees
/// with the claim it tests.
inline int verdict_exit_code(Verdict v) { return v == Verdict::fail || v == Verdict::discrepancy ? 1 : 0; }

struct Report {
  std::string command;
  std::map<std::string, std::string> inputs;
  Verdict verdict = Verdict::fail;
  std::optional<std::string> residual;
  nlohmann::json witness;  // null when absent
  long runtime_ms = 0;

  /// Keys are sorted, so equal reports serialize identically.
  nlohmann::json to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["verdict"] = verdict_name(verdict);
    j["residual"] = residual ? nlohmann::json(*residual) : nlohmann::json(nullptr);
    j["witness"] = witness;
    j["runtime_ms"] = runtime_ms;
    return j;
  }
};

// ---- witness encoders -----------------------------------------------------

inline nlohmann::json to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : m) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& e : r) row.push_back(e.to_string());
    rows.push_back(row);
  }
  return rows;
}

inline nlohmann::json to_json(const std::vector<RatFunc>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : v) out.push_back(e.to_string());
  return out;
}

inline nlohmann::json to_json(const Certificate& c) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : c.steps)
    steps.push_back({{"name", s.name},
                     {"equation", s.equation},
                     {"conclusion", s.conclusion},
                     {"checked", s.checked},
                     {"data", s.data}});
  const char* kind = c.kind == Certificate::Kind::exp_log ? "exp_log" : c.kind == Certificate::Kind::risch_ode ? "risch_ode" : "none";
  return {{"kind", kind}, {"steps", steps}, {"verified", check_certificate(c)}};
}

inline nlohmann::json to_json(const NoncommutativityCertificate& c) {
  nlohmann::json gam;
  for (const auto& [k, v] : c.gammas) gam[k] = v.to_string();
  return {{"case", case_name(c.which)},
          {"gammas", gam},
          {"m1", {{"family", 1}, {"c", c.c1.str()}, {"matrix", to_json(c.m1.m)}}},
          {"m2", {{"family", 2}, {"c", c.c2.str()}, {"alpha1", c.alpha1.str()}, {"matrix", to_json(c.m2.m)}}},
          {"commutator", to_json(c.commutator)},
          {"entry", {{"row", c.row}, {"col", c.col}, {"value", c.value.to_string()}}},
          {"verified", verify_certificate(c)}};
}

inline nlohmann::json to_json(const std::vector<EntryMismatch>& ms) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& m : ms) {
    nlohmann::json matches = nlohmann::json::array();
    for (auto [r, c] : m.computed_matches) matches.push_back({r, c});
    out.push_back({{"row", m.row},
                   {"col", m.col},
                   {"printed", m.printed},
                   {"printed_value", m.printed_value ? nlohmann::json(m.printed_value->to_string()) : nlohmann::json(nullptr)},
                   {"computed", m.computed.to_string()},
                   {"computed_matches_printed_at", matches}});
  }
  return out;
}

}  // namespace seirint
