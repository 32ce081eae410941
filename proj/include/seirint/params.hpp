#pragma once

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "seirint/ratfunc.hpp"

namespace seirint {

/// Exact values for parameter symbols (a, b, r, C2, ...).
using ParamAssignment = std::map<std::string, Rat>;

/// Floating-point parameter values used by numerical evaluation.
using NumericParams = std::map<std::string, double>;

/// Parses "a=1,b=2/3,r=1".
inline ParamAssignment parse_params(std::string_view text) {
  ParamAssignment out;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("parameter '" + item + "' lacks '='");
    auto key = item.substr(0, eq);
    if (key.empty()) throw std::invalid_argument("empty parameter name in '" + item + "'");
    out[key] = Rat::parse(item.substr(eq + 1));
  }
  return out;
}

/// Substitution map (symbol id -> constant) for exact specialisation.
inline std::map<std::uint32_t, RatFunc> substitution(const ParamAssignment& p) {
  std::map<std::uint32_t, RatFunc> m;
  for (const auto& [k, v] : p) m[Symbol(k).id()] = RatFunc(v);
  return m;
}

/// Converts to floating point and adds C3 = exp(-r*C2/a), the relation that
/// symbolic work leaves free. Rejects an explicit C3 that contradicts it.
inline NumericParams numeric_params(const ParamAssignment& p, bool enforce_c3 = true) {
  NumericParams out;
  for (const auto& [k, v] : p) out[k] = v.to_double();
  if (enforce_c3 && out.count("r") && out.count("C2") && out.count("a")) {
    if (out.at("a") == 0.0) throw std::domain_error("C3 relation needs a != 0");
    double c3 = std::exp(-out.at("r") * out.at("C2") / out.at("a"));
    if (auto it = out.find("C3"); it != out.end() && std::abs(it->second - c3) > 1e-12 * std::abs(c3))
      throw std::domain_error("C3 is fixed by C3 = exp(-r*C2/a) and cannot be assigned");
    out["C3"] = c3;
  }
  return out;
}

}  // namespace seirint
