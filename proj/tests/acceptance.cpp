// Acceptance suite: one PASS/FAIL line per criterion on stdout, details on
// stderr. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "seirint/cli.hpp"

using namespace seirint;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("FAILED: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

/// Runs `body` and requires it to finish within `limit` seconds.
template <class F>
void timed(Outcome& o, const std::string& what, double limit, F body) {
  auto t0 = Clock::now();
  body();
  double s = seconds_since(t0);
  o.require(s < limit, what + " took " + std::to_string(s) + " s (limit " + std::to_string(limit) + " s)");
}

// 1 ------------------------------------------------------------------------
Outcome first_integrals() {
  Outcome o;
  for (const char* id : {"F1", "F2", "F2_sei", "F1_a0"})
    timed(o, id, 1.0, [&] {
      auto [e, res] = check_claim(find_claim(id));
      o.require(res.is_zero(), std::string(id) + " residual " + res.to_string());
    });
  return o;
}

// 2 ------------------------------------------------------------------------
Outcome commuting_fields() {
  Outcome o;
  timed(o, "brackets", 1.0, [&] {
    VectorField ext = catalog("seir_ext");
    std::vector<VectorField> fs{ext, scaling_field(ext, "X"), scaling_field(ext, "Y"), scaling_field(ext, "Z")};
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::size_t j = i + 1; j < fs.size(); ++j)
        o.require(is_zero(lie_bracket(fs[i], fs[j])), "[" + fs[i].name + "," + fs[j].name + "] != 0");
  });
  return o;
}

// 3 ------------------------------------------------------------------------
Outcome particular_solutions() {
  Outcome o;
  for (Case c : {Case::a_ne_b, Case::a_eq_b}) {
    auto plane = verify_particular_solution(plane_solution(c), plane_system(c));
    o.require(all_zero(plane), std::string("plane solution ") + case_name(c));
    auto ext = verify_particular_solution(extended_solution(), extended_field(c));
    o.require(all_zero(ext), std::string("extended solution ") + case_name(c));
  }
  return o;
}

// 4 ------------------------------------------------------------------------
Outcome ve_fundamental_set() {
  Outcome o;
  timed(o, "VE columns and controls", 10.0, [&] {
    for (Case c : {Case::a_ne_b, Case::a_eq_b}) {
      FundamentalSet fs = fundamental_columns(c);
      LinearSystem sys = build_ve(c);
      std::size_t primitives = 0;
      for (const TowerGen* g : fs.tower.gens()) primitives += g->kind == GenKind::primitive;
      o.require(primitives > 0, std::string("no primitive generators in ") + case_name(c));
      for (std::size_t j = 0; j < 6; ++j) {
        o.require(all_zero(verify_ve_column(fs.cols[j], sys)),
                  std::string(case_name(c)) + " column " + std::to_string(j + 1) + " residual");
        o.require(is_unit_vector(initial_value(fs, j), j),
                  std::string(case_name(c)) + " column " + std::to_string(j + 1) + " initial value");
      }
      auto ps = perturbation_controls(fs, sys);
      std::size_t detected = 0;
      for (const auto& p : ps) detected += p.detected();
      o.require(!ps.empty() && detected == ps.size(), std::string(case_name(c)) + " undetected perturbation");
      o.note(std::string(case_name(c)) + ": " + std::to_string(detected) + "/" + std::to_string(ps.size()) +
             " perturbations detected");
    }
  });
  return o;
}

// 5 ------------------------------------------------------------------------
Outcome sigma_actions() {
  Outcome o;
  for (Case c : {Case::a_ne_b, Case::a_eq_b}) {
    auto rep = sigma_action_check(c);
    o.require(all_zero(rep.residual), std::string("sigma(Phi2) combination ") + case_name(c));
    for (std::size_t j = 0; j < rep.fixed_residuals.size(); ++j)
      o.require(all_zero(rep.fixed_residuals[j]), std::string(case_name(c)) + " sigma moves Phi" + std::to_string(j + 3));
  }
  return o;
}

// 6 ------------------------------------------------------------------------
Outcome risch() {
  Outcome o;
  RatFunc x = RatFunc::var("x"), th1 = RatFunc::var("th1");
  for (long n = 1; n <= 5; ++n)
    timed(o, "alpha=" + std::to_string(n), 1.0, [&] {
      RischVerdict v = gamma_elementary(Rat(n));
      bool ok = v.status == RischStatus::elementary && v.antiderivative &&
                (v.tower.derive(*v.antiderivative) - x.pow(n - 1) * th1).is_zero();
      o.require(ok, "alpha=" + std::to_string(n) + " elementary with verified antiderivative");
    });
  for (const char* a : {"0", "-1", "-2", "1/2", "3/2", "2/3", "-1/2"})
    timed(o, std::string("alpha=") + a, 1.0, [&] {
      RischVerdict v = gamma_elementary(Rat::parse(a));
      o.require(v.status == RischStatus::non_elementary && !v.cert.empty() && check_certificate(v.cert),
                std::string("alpha=") + a + " non_elementary with checked certificate");
    });
  for (long beta = 1; beta <= 3; ++beta)
    timed(o, "beta=" + std::to_string(beta), 1.0, [&] {
      auto r = solve_risch_ode({Rat(-1), RatFunc(1) / x.pow(beta)});
      bool recurrence = false;
      for (const auto& s : r.cert.steps) recurrence = recurrence || (s.name == "recurrence" && s.checked);
      o.require(!r.q && recurrence && check_certificate(r.cert),
                "q'-q = x^-" + std::to_string(beta) + " nonexistence via recurrence");
    });
  return o;
}

// 7 ------------------------------------------------------------------------
GaloisParams random_params(std::mt19937& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
  GaloisParams p;
  for (const auto& n : galois_param_names()) p[n] = RatFunc(Rat(num(rng), den(rng)));
  return p;
}

std::string describe(const EntryMismatch& m) {
  return "(" + std::to_string(m.row) + "," + std::to_string(m.col) + ") printed " + m.printed + ", computed " +
         m.computed.to_string();
}

Outcome galois() {
  Outcome o;
  for (Case c : {Case::a_ne_b, Case::a_eq_b}) {
    for (long k = 1; k <= 6; ++k)
      o.require(power_closed_form(c, galois_params(), k) == power_iterative(c, galois_params(), k),
                std::string("symbolic closed form ") + case_name(c) + " k=" + std::to_string(k));
    for (unsigned seed = 1; seed <= 10; ++seed) {
      std::mt19937 rng(seed);
      auto p = random_params(rng);
      for (long k = 1; k <= 20; ++k)
        o.require(power_closed_form(c, p, k) == power_iterative(c, p, k),
                  std::string("random closed form ") + case_name(c) + " seed " + std::to_string(seed) + " k=" +
                      std::to_string(k));
    }
    auto sq = power_report(c, galois_params(), 2);
    for (const auto& m : sq.mismatches) o.note(std::string("A^2 ") + case_name(c) + " discrepancy " + describe(m));
    o.require(sq.mismatches.empty(), std::string("A^2 display matches entry-by-entry for ") + case_name(c));
    auto gen = compare_with_printed(power_iterative(c, galois_params(), 3),
                                    printed_matrix(c, galois_params(), 3, true));
    for (const auto& m : gen) o.note(std::string("A^k ") + case_name(c) + " discrepancy (k=3) " + describe(m));
    auto cert = noncommutativity_certificate(c);
    o.require(verify_certificate(cert) && !cert.value.is_zero(),
              std::string("non-commutativity certificate ") + case_name(c));
  }
  return o;
}

// 8 ------------------------------------------------------------------------
Outcome numerics() {
  Outcome o;
  timed(o, "numerics", 30.0, [&] {
    ToleranceConfig tol{1e-10, 1e-12, 1000000};
    for (auto [a, b, r] : {std::tuple{1.0, 2.0, 1.5}, std::tuple{0.5, 0.5, 2.0}, std::tuple{2.0, 0.3, 4.0}}) {
      NumericParams p{{"a", a}, {"b", b}, {"r", r}};
      auto tr = integrate(catalog("seir"), p, {0.8, 0.1, 0.1, 0.0}, 0.0, 50.0, tol);
      for (const char* id : {"F1", "F2"}) {
        double d = conservation_drift(find_claim(id).expr, tr, catalog("seir"), p);
        std::ostringstream s;
        s << id << " drift " << d << " at (a,b,r)=(" << a << "," << b << "," << r << ")";
        o.require(d < 1e-8, s.str());
        o.note(s.str());
      }
    }
    for (auto [c, b] : {std::pair{Case::a_ne_b, 2L}, std::pair{Case::a_eq_b, 1L}}) {
      auto chk = check_fundamental(c, {{"a", Rat(1)}, {"b", Rat(b)}, {"r", Rat(1)}, {"C2", Rat(1)}}, 1.0, tol);
      std::ostringstream s;
      s << case_name(c) << ": max |numeric - symbolic| " << chk.max_abs_diff << ", |det - Abel| "
        << std::abs(chk.det - chk.abel);
      o.require(chk.max_abs_diff < 1e-8, s.str());
      o.require(std::abs(chk.det - chk.abel) < 1e-8, s.str());
      o.note(s.str());
    }
  });
  return o;
}

// 9 ------------------------------------------------------------------------
Outcome discrepancy_honesty() {
  Outcome o;
  auto check = [&](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    auto j = nlohmann::json::parse(out.str());
    std::string verdict = j["verdict"], residual = j["residual"].is_null() ? "" : j["residual"].get<std::string>();
    bool honest = (verdict == "pass" && residual == "0" && code == 0) ||
                  (verdict == "discrepancy" && !residual.empty() && residual != "0" && code == 1);
    o.require(honest, args[0] + " " + args[1] + ": verdict " + verdict + " residual '" + residual + "'");
    o.note(args[0] + " " + args[1] + ": " + verdict + ", residual " + residual);
  };
  check({"check", "integral", "--claim", "F3"});
  check({"risch", "recurrence"});
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"first integrals", first_integrals},
      {"commuting fields", commuting_fields},
      {"particular solutions", particular_solutions},
      {"VE fundamental set", ve_fundamental_set},
      {"sigma actions", sigma_actions},
      {"Risch decisions", risch},
      {"Galois matrices", galois},
      {"numerics", numerics},
      {"discrepancy honesty", discrepancy_honesty},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.ok;
    std::printf("criterion %zu %-22s %s (%.0f ms)\n", i + 1, criteria[i].first.c_str(), o.ok ? "PASS" : "FAIL",
                1000 * seconds_since(t0));
    std::fflush(stdout);
    for (const auto& n : o.notes) std::cerr << "    " << n << "\n";
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
