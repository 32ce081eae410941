#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seirint/dtower.hpp"
#include "seirint/linalg.hpp"

namespace seirint {

/// Syntax or lowering error; `pos` is a 0-based offset into the input text.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t pos() const { return pos_; }

 private:
  std::size_t pos_;
};

struct Ast {
  enum class Kind { number, symbol, add, sub, mul, div, pow, exp, log, neg };
  Kind kind = Kind::number;
  Rat value;             // number
  std::string name;      // symbol
  long exponent = 0;     // pow
  std::size_t pos = 0;   // source offset, for error messages
  std::vector<std::shared_ptr<const Ast>> kids;
};
using AstPtr = std::shared_ptr<const Ast>;

/// Names known to the parser. An empty table accepts any identifier;
/// otherwise unknown identifiers are rejected.
class SymbolTable {
 public:
  enum class Category { parameter, state, generator };

  void declare(const std::string& name, Category cat) {
    auto [it, fresh] = names_.emplace(name, cat);
    if (!fresh && it->second != cat)
      throw std::invalid_argument("symbol '" + name + "' declared in two categories");
  }
  void declare_parameter(const std::string& n) { declare(n, Category::parameter); }
  void declare_state(const std::string& n) { declare(n, Category::state); }
  void declare_generators(const Tower& t) {
    for (const TowerGen* g : t.gens())
      if (!names_.count(g->sym.name())) declare(g->sym.name(), Category::generator);
  }

  bool permissive() const { return names_.empty(); }
  bool known(const std::string& n) const { return permissive() || names_.count(n); }
  std::optional<Category> category(const std::string& n) const {
    auto it = names_.find(n);
    if (it == names_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<std::string, Category> names_;
};

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, const SymbolTable& syms) : s_(text), syms_(syms) {}

  AstPtr parse() {
    auto e = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, i_); }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++i_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  bool digit_ahead() {
    skip();
    return i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]));
  }

  static AstPtr node(Ast::Kind k, std::size_t pos, std::vector<AstPtr> kids) {
    auto n = std::make_shared<Ast>();
    n->kind = k;
    n->pos = pos;
    n->kids = std::move(kids);
    return n;
  }

  AstPtr expr() {
    auto lhs = term();
    while (true) {
      std::size_t pos = (skip(), i_);
      if (accept('+')) lhs = node(Ast::Kind::add, pos, {lhs, term()});
      else if (accept('-')) lhs = node(Ast::Kind::sub, pos, {lhs, term()});
      else return lhs;
    }
  }

  AstPtr term() {
    auto lhs = unary();
    while (true) {
      std::size_t pos = (skip(), i_);
      if (accept('*')) lhs = node(Ast::Kind::mul, pos, {lhs, unary()});
      else if (accept('/')) lhs = node(Ast::Kind::div, pos, {lhs, unary()});
      else return lhs;
    }
  }

  AstPtr unary() {
    std::size_t pos = (skip(), i_);
    if (accept('-')) return node(Ast::Kind::neg, pos, {unary()});
    return factor();
  }

  AstPtr factor() {
    auto b = base();
    std::size_t pos = (skip(), i_);
    if (!accept('^')) return b;
    if (!digit_ahead()) fail("non-integer exponent");
    auto n = std::make_shared<Ast>();
    n->kind = Ast::Kind::pow;
    n->pos = pos;
    n->kids = {b};
    mpz_class e = integer();
    if (!e.fits_slong_p()) fail("exponent too large");
    n->exponent = e.get_si();
    return n;
  }

  mpz_class integer() {
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    return mpz_class(std::string(s_.substr(start, i_ - start)));
  }

  AstPtr base() {
    skip();
    std::size_t pos = i_;
    if (i_ >= s_.size()) fail("unexpected end of input");
    char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class num = integer();
      mpz_class den = 1;
      // rational := int ("/" int)? -- only when an integer follows the slash.
      std::size_t save = i_;
      if (accept('/') && digit_ahead()) {
        den = integer();
        if (den == 0) {
          i_ = save;
          fail("division by zero in rational literal");
        }
      } else {
        i_ = save;
      }
      auto n = std::make_shared<Ast>();
      n->kind = Ast::Kind::number;
      n->pos = pos;
      n->value = Rat(mpq_class(num, den));
      return n;
    }
    if (accept('(')) {
      auto e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
      std::string id(s_.substr(pos, i_ - pos));
      if (id == "exp" || id == "log") {
        if (!accept('(')) fail("expected '(' after " + id);
        auto arg = expr();
        expect(')');
        return node(id == "exp" ? Ast::Kind::exp : Ast::Kind::log, pos, {arg});
      }
      if (!syms_.known(id)) {
        i_ = pos;
        fail("unknown identifier '" + id + "'");
      }
      auto n = std::make_shared<Ast>();
      n->kind = Ast::Kind::symbol;
      n->pos = pos;
      n->name = id;
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const SymbolTable& syms_;
  std::size_t i_ = 0;
};

}  // namespace detail

inline AstPtr parse_expr(std::string_view text, const SymbolTable& syms = {}) {
  return detail::ExprParser(text, syms).parse();
}

/// Printed form of an Ast; fully parenthesised where precedence requires.
inline std::string pretty_print(const Ast& a) {
  auto prec = [](const Ast& n) {
    switch (n.kind) {
      case Ast::Kind::add:
      case Ast::Kind::sub: return 1;
      case Ast::Kind::mul:
      case Ast::Kind::div: return 2;
      case Ast::Kind::neg: return 3;
      case Ast::Kind::pow: return 4;
      case Ast::Kind::number: return n.value.is_integer() && n.value.sign() >= 0 ? 5 : 2;
      default: return 5;
    }
  };
  auto wrap = [&](const Ast& n, int min) {
    std::string s = pretty_print(n);
    return prec(n) < min ? "(" + s + ")" : s;
  };
  switch (a.kind) {
    case Ast::Kind::number: return a.value.str();
    case Ast::Kind::symbol: return a.name;
    case Ast::Kind::add: return wrap(*a.kids[0], 1) + "+" + wrap(*a.kids[1], 2);
    case Ast::Kind::sub: return wrap(*a.kids[0], 1) + "-" + wrap(*a.kids[1], 2);
    case Ast::Kind::mul: return wrap(*a.kids[0], 2) + "*" + wrap(*a.kids[1], 3);
    case Ast::Kind::div: return wrap(*a.kids[0], 2) + "/" + wrap(*a.kids[1], 3);
    case Ast::Kind::neg: return "-" + wrap(*a.kids[0], 3);
    case Ast::Kind::pow: return wrap(*a.kids[0], 5) + "^" + std::to_string(a.exponent);
    case Ast::Kind::exp: return "exp(" + pretty_print(*a.kids[0]) + ")";
    case Ast::Kind::log: return "log(" + pretty_print(*a.kids[0]) + ")";
  }
  return "";
}

inline std::string pretty_print(const TowerElem& e) { return e.str(); }

struct LowerOptions {
  /// Register a new exponential generator when exp(u) has u a non-integer
  /// rational multiple of an existing generator's argument.
  bool auto_extend = false;
};

/// Lowers an Ast into the tower, which may grow: exp/log of arguments not
/// matched by existing generators register new generators. exp(u) with u a
/// Z-combination of existing exponential arguments becomes the matching
/// power product.
inline TowerElem lower_to_tower(const Ast& ast, Tower& tower, const LowerOptions& opt = {}) {
  std::function<RatFunc(const Ast&)> go = [&](const Ast& n) -> RatFunc {
    switch (n.kind) {
      case Ast::Kind::number: return RatFunc(n.value);
      case Ast::Kind::symbol: return RatFunc::var(n.name);
      case Ast::Kind::add: return go(*n.kids[0]) + go(*n.kids[1]);
      case Ast::Kind::sub: return go(*n.kids[0]) - go(*n.kids[1]);
      case Ast::Kind::mul: return go(*n.kids[0]) * go(*n.kids[1]);
      case Ast::Kind::div: {
        RatFunc d = go(*n.kids[1]);
        if (d.is_zero()) throw ParseError("division by zero", n.pos);
        return go(*n.kids[0]) / d;
      }
      case Ast::Kind::neg: return -go(*n.kids[0]);
      case Ast::Kind::pow: {
        RatFunc b = go(*n.kids[0]);
        if (b.is_zero() && n.exponent == 0) throw ParseError("0^0 is undefined", n.pos);
        return b.pow(n.exponent);
      }
      case Ast::Kind::exp: {
        RatFunc u = go(*n.kids[0]);
        if (u.is_zero()) return RatFunc(1);
        if (tower.generators_in(u).empty())
          throw ParseError("exp of a constant is not representable; use a parameter", n.pos);
        std::vector<const TowerGen*> exps;
        std::vector<RatFunc> args;
        for (const TowerGen* g : tower.gens())
          if (g->kind == GenKind::exponential) {
            exps.push_back(g);
            args.push_back(g->arg);
          }
        if (auto k = rational_combination(u, args)) {
          bool integral = true;
          for (const Rat& q : *k) integral = integral && q.is_integer();
          if (integral) {
            RatFunc r(1);
            for (std::size_t i = 0; i < exps.size(); ++i)
              if (!(*k)[i].is_zero()) r *= RatFunc::var(exps[i]->sym).pow((*k)[i].to_long());
            return r;
          }
          if (!opt.auto_extend)
            throw ParseError("exp argument is a non-integer multiple of an existing generator "
                             "(enable auto-extend to register it)", n.pos);
        }
        std::string name = "exp_" + std::to_string(tower.size());
        tower = tower.extend(name, GenKind::exponential, u);
        return RatFunc::var(name);
      }
      case Ast::Kind::log: {
        RatFunc u = go(*n.kids[0]);
        if (u.is_zero()) throw ParseError("log of zero", n.pos);
        if (u.is_one()) return {};
        if (u.is_polynomial() && u.num().is_monomial() && u.num().lc().is_one()) {
          auto gs = tower.generators_in(u);
          if (gs.size() == 1) {
            const TowerGen* g = tower.find(gs[0]);
            if (g->kind == GenKind::exponential && u.num().lm().e.size() == 1)
              return g->arg * RatFunc(static_cast<long>(u.num().lm().e[0].second));
          }
        }
        if (tower.generators_in(u).empty())
          throw ParseError("log of a constant is not representable; use a parameter", n.pos);
        for (const TowerGen* g : tower.gens())
          if (g->kind == GenKind::logarithmic && g->arg == u) return RatFunc::var(g->sym);
        std::string name = "log_" + std::to_string(tower.size());
        tower = tower.extend(name, GenKind::logarithmic, u);
        return RatFunc::var(name);
      }
    }
    return {};
  };
  try {
    RatFunc v = go(ast);
    return {tower, v};
  } catch (const TowerError& e) {
    throw ParseError(e.what(), ast.pos);
  }
}

inline TowerElem parse_into(std::string_view text, Tower& tower, const SymbolTable& syms = {},
                            const LowerOptions& opt = {}) {
  return lower_to_tower(*parse_expr(text, syms), tower, opt);
}

/// One `name = expr` line of a system file.
struct Binding {
  std::string name;
  std::string text;
  std::size_t line = 0;
};

/// Reads `name = expr` lines; '#' starts a comment, blank lines are skipped.
inline std::vector<Binding> parse_bindings(std::string_view text) {
  std::vector<Binding> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected 'name = expr'", first);
    std::string name = line.substr(0, eq);
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    bool ident = !name.empty() && (std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_');
    for (char c : name) ident = ident && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
    if (!ident) throw ParseError("line " + std::to_string(lineno) + ": bad name '" + name + "'", first);
    if (!seen.insert(name).second)
      throw ParseError("line " + std::to_string(lineno) + ": duplicate binding '" + name + "'", first);
    out.push_back({name, line.substr(eq + 1), lineno});
  }
  return out;
}

}  // namespace seirint
