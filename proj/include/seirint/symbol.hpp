#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace seirint {

namespace detail {

// Append-only interned name table. Ids are never reused, so a Symbol stays
// valid for the life of the process. The common names are registered up front
// in a fixed order so the variable order (and therefore printed term order) does
// not depend on which code path touched a name first.
class SymbolRegistry {
 public:
  static SymbolRegistry& instance() {
    static SymbolRegistry reg;
    return reg;
  }

  std::uint32_t intern(std::string_view name) {
    std::lock_guard lock(mu_);
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
  }

  const std::string& name(std::uint32_t id) {
    std::lock_guard lock(mu_);
    return names_.at(id);
  }

 private:
  SymbolRegistry() {
    // Parameters first so that products print as "a*t", "r*S".
    for (const char* n : {"a", "b", "r", "C1", "C2", "C3", "c", "alpha", "alpha1", "alpha2",
                          "alpha3", "alpha4", "alpha5", "gamma", "gamma1", "gamma2", "t", "x",
                          "S", "E", "I", "R", "X", "Y", "Z", "w", "y", "z", "u", "v"}) {
      names_.emplace_back(n);
      ids_.emplace(names_.back(), static_cast<std::uint32_t>(names_.size() - 1));
    }
  }

  std::mutex mu_;
  std::deque<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

}  // namespace detail

/// Interned symbol. Comparison is by id; lower ids are more significant in
/// the lexicographic tie-break of the monomial order.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string_view name) : id_(detail::SymbolRegistry::instance().intern(name)) {}
  static Symbol from_id(std::uint32_t id) {
    Symbol s;
    s.id_ = id;
    return s;
  }

  std::uint32_t id() const { return id_; }
  const std::string& name() const { return detail::SymbolRegistry::instance().name(id_); }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend auto operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }

 private:
  std::uint32_t id_ = 0;
};

}  // namespace seirint
