#include "qforge/forge/pipeline.hpp"

#include <algorithm>
#include <random>

#include "qforge/error.hpp"
#include "qforge/exact/sampling.hpp"
#include "qforge/forge/registry.hpp"
#include "qforge/qseries/phi21.hpp"
#include "qforge/relations/derive.hpp"

namespace qforge::forge {

using relations::Var;

namespace {

RationalFunction V(Var v) { return RationalFunction::variable(v); }

constexpr int idx(Var v) { return static_cast<int>(v); }

ExactScalar qpow(const ExactScalar& q, long e) { return q.pow(e); }

// (a q^{k t}, b q^{l t}, c q^{m t}, x q^{n t}) at an evaluated point.
ExactPoint advance(const ExactPoint& p, const ShiftVector& s, int t) {
  const ExactScalar& q = p[idx(Var::q)];
  ExactPoint out = p;
  out[idx(Var::a)] = p[idx(Var::a)] * qpow(q, static_cast<long>(s.k) * t);
  out[idx(Var::b)] = p[idx(Var::b)] * qpow(q, static_cast<long>(s.l) * t);
  out[idx(Var::c)] = p[idx(Var::c)] * qpow(q, static_cast<long>(s.m) * t);
  out[idx(Var::x)] = p[idx(Var::x)] * qpow(q, static_cast<long>(s.n) * t);
  return out;
}

qseries::ExactParams params_of(const ExactPoint& p) {
  return {p[idx(Var::a)], p[idx(Var::b)], p[idx(Var::c)], p[idx(Var::q)], p[idx(Var::x)]};
}

const ThreeTermRelation& pick(const ThreeTermRelation* given, ThreeTermRelation& storage, const ShiftVector& s) {
  if (given) return *given;
  storage = relations::relation_for(s);
  return storage;
}

}  // namespace

// ---------------------------------------------------------------- families

std::vector<ParamFamily> solution_families(const ShiftVector& s) {
  const RationalFunction a = V(Var::a), b = V(Var::b), c = V(Var::c), q = V(Var::q), x = V(Var::x), w = V(Var::w);
  std::vector<ParamFamily> out;
  auto add = [&](ParamFamily f) {
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(std::move(f));
  };
  auto binomial = [&] { return ParamFamily(a, -a, -q, x); };
  auto gauss = [&] { return ParamFamily(a, b, c, c / (a * b)); };
  auto kummer = [&] { return ParamFamily(a, b, b * q / a, -q / a); };
  auto rooted = [&](int l) { return ParamFamily(w * q, b, w * b, RationalFunction(1), l); };

  if (s == ShiftVector{0, 0, 0, 2}) add(binomial());
  if (s == ShiftVector{0, 1, 1, 0}) add(gauss());
  if (s == ShiftVector{0, 2, 2, 0} || s == ShiftVector{1, 2, 1, -1}) add(kummer());
  if (s == ShiftVector{0, 3, 3, 0}) add(rooted(3));

  if (s.k == s.l && s.m == 0 && s.n % 2 == 0) add(binomial());
  if (s.k + s.l - s.m + s.n == 0) add(gauss());
  if (s.m == s.l - s.k && s.n == -s.k && s.l % 2 == 0) add(kummer());
  if (s.k == 0 && s.n == 0 && s.l == s.m && s.l >= 2) add(rooted(s.l));
  return out;
}

// ---------------------------------------------------------------- Q^(N) = 0

FamilyCheck check_family_detailed(const ShiftVector& s, const ParamFamily& fam, int n_max, int trials,
                                  std::uint64_t seed, Execution exec, const ThreeTermRelation* relation) {
  ThreeTermRelation storage;
  const ThreeTermRelation& rel = pick(relation, storage, s);
  const std::vector<Var> free = fam.free_symbols();
  std::mt19937_64 rng(seed);
  FamilyCheck result;
  enum Outcome : int { Zero, Nonzero, Singular };

  for (int N = 1; N <= n_max; ++N) {
    const ParamFamily famN = shift_params(fam, s, N);
    int valid = 0, drawn = 0;
    while (valid < trials) {
      if (drawn >= 10 * trials)
        throw Error(ErrorKind::SamplingExhausted,
                    "too many singular sample points for shift " + s.to_string() + " at N = " + std::to_string(N));
      int chunk = std::min(trials - valid, 10 * trials - drawn);
      std::vector<ExactPoint> candidates(chunk);
      for (auto& pt : candidates) {
        pt = relations::make_point(0, 0, 0, 0, 0);
        for (Var v : free) pt[idx(v)] = random_rational(rng, 97, false);
        Rational q;
        do q = random_rational(rng, 97, false);
        while (q == 1 || q == -1);
        pt[idx(Var::q)] = q;
      }
      drawn += chunk;
      std::vector<int> outcome(chunk, Singular);
      auto evaluate = [&](int i) {
        try {
          outcome[i] = rel.Q.evaluate(famN.evaluate(candidates[i])).is_zero() ? Zero : Nonzero;
        } catch (const Error& e) {
          outcome[i] = Singular;
        }
      };
      if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < chunk; ++i) evaluate(i);
      } else {
        for (int i = 0; i < chunk; ++i) evaluate(i);
      }
      for (int i = 0; i < chunk; ++i) {
        if (outcome[i] == Singular) {
          ++result.resamples;
          continue;
        }
        ++valid;
        ++result.evaluations;
        if (outcome[i] == Nonzero && result.passed) {
          result.passed = false;
          result.first_failing_step = N;
        }
      }
    }
    if (!result.passed) break;
  }
  return result;
}

bool check_family(const ShiftVector& s, const ParamFamily& fam, int n_max, int trials, std::uint64_t seed) {
  return check_family_detailed(s, fam, n_max, trials, seed).passed;
}

// ---------------------------------------------------------------- telescoping

RationalFunction product_R(const ShiftVector& s, const ParamFamily& fam, int n, const ThreeTermRelation* relation) {
  ThreeTermRelation storage;
  const ThreeTermRelation& rel = pick(relation, storage, s);
  RationalFunction prod(1);
  for (int i = 1; i <= n; ++i) {
    RationalFunction Ri;
    try {
      Ri = rel.R.substitute(shift_params(fam, s, i).substitution());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ZeroDenominator || e.kind() == ErrorKind::DivisionByZero)
        throw Error(ErrorKind::DegenerateFamily, "R^(" + std::to_string(i) + ") is undefined on the family");
      throw;
    }
    if (Ri.is_zero()) throw Error(ErrorKind::DegenerateFamily, "R^(" + std::to_string(i) + ") vanishes on the family");
    prod *= Ri;
  }
  return prod;
}

namespace {

ExactScalar product_at(const ThreeTermRelation& rel, const ShiftVector& s, const ExactPoint& base, int N) {
  ExactScalar prod(1);
  for (int i = 1; i <= N; ++i) prod = prod * rel.R.evaluate(advance(base, s, i - 1));
  if (prod.is_zero()) throw Error(ErrorKind::ZeroDenominator, "R product vanishes at the point");
  return prod;
}

}  // namespace

ExactScalar telescoped_value(const ShiftVector& s, const ParamFamily& fam, int N, const ExactPoint& values,
                             const ThreeTermRelation& rel) {
  ExactPoint base = fam.evaluate(values);
  ExactScalar prod = product_at(rel, s, base, N);
  return qseries::phi21_exact(params_of(advance(base, s, N))).value / prod;
}

bool PipelineRun::all_pass() const {
  return std::all_of(steps.begin(), steps.end(), [](const PipelineStep& st) { return st.pass; });
}

nlohmann::json PipelineRun::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& st : steps) {
    nlohmann::json j{{"N", st.N},           {"lhs", st.lhs},   {"product", st.product}, {"telescoped", st.telescoped},
                     {"residual", st.residual}, {"exact", st.exact}, {"pass", st.pass}};
    if (!st.error.empty()) j["error"] = st.error;
    arr.push_back(j);
  }
  return {{"shift", shift.to_string()}, {"family", family}, {"n_max", n_max},
          {"point", point},             {"steps", arr},     {"all_pass", all_pass()}};
}

PipelineRun telescoped_check(const ShiftVector& s, const ParamFamily& fam, int n_max, const ExactPoint& values,
                             double tol, const ThreeTermRelation* relation) {
  ThreeTermRelation storage;
  const ThreeTermRelation& rel = pick(relation, storage, s);
  PipelineRun run;
  run.shift = s;
  run.family = fam.to_string();
  run.n_max = n_max;
  for (Var v : fam.free_symbols()) run.point[relations::kVarNames[idx(v)]] = values[idx(v)].to_string();
  run.point["q"] = values[idx(Var::q)].to_string();

  ExactPoint base = fam.evaluate(values);
  for (int N = 1; N <= n_max; ++N) {
    PipelineStep st;
    st.N = N;
    try {
      ExactScalar prod = product_at(rel, s, base, N);
      st.product = prod.to_string();
      auto shifted = params_of(advance(base, s, N));
      std::optional<ExactScalar> lhs_exact, rhs_series;
      try {
        lhs_exact = qseries::phi21_exact(params_of(base)).value;
        rhs_series = qseries::phi21_exact(shifted).value;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotTerminating) throw;
      }
      if (lhs_exact && rhs_series) {
        ExactScalar tel = *rhs_series / prod;
        st.exact = true;
        st.lhs = lhs_exact->to_string();
        st.telescoped = tel.to_string();
        st.residual = std::abs((tel - *lhs_exact).to_complex());
        st.pass = tel == *lhs_exact;
      } else {
        auto lhs = qseries::phi21_numeric(qseries::to_numeric(params_of(base)), tol / 10);
        auto sh = qseries::phi21_numeric(qseries::to_numeric(shifted), tol / 10);
        ApproxScalar tel = sh.value / ApproxScalar::from_exact(prod);
        st.lhs = lhs.value.to_string(20);
        st.telescoped = tel.to_string(20);
        st.residual = distance(tel, lhs.value);
        st.pass = st.residual <= tol;
      }
    } catch (const Error& e) {
      st.error = e.what();
      st.pass = false;
    }
    run.steps.push_back(std::move(st));
  }
  return run;
}

// ---------------------------------------------------------------- (1 - a^{N+1}) / (1 - a)

bool sv5_cauchy_check(const ExactScalar& a, int n_max, const std::vector<Rational>& qs) {
  if (a.is_one()) throw Error(ErrorKind::DegenerateParameter, "a = 1 is the excluded limit of the identity");
  if (a.is_zero()) throw Error(ErrorKind::DegenerateParameter, "a = 0 makes q/a undefined");
  for (const Rational& qr : qs) {
    const ExactScalar q(qr);
    auto poch = [&](const ExactScalar& base, int count) { return qseries::qpoch_finite(base, q, count); };
    for (int N = 0; N <= n_max; ++N) {
      ExactScalar closed = (ExactScalar(1) - a.pow(N + 1)) / (ExactScalar(1) - a);
      ExactScalar geometric(0);
      for (int j = 0; j <= N; ++j) geometric = geometric + a.pow(j);
      // Coefficient of x^N in (sum (aq;q)_i x^i/(q;q)_i) (sum (q/a;q)_j (ax)^j/(q;q)_j).
      ExactScalar cauchy(0);
      for (int i = 0; i <= N; ++i)
        cauchy = cauchy + poch(a * q, i) * poch(q / a, N - i) * a.pow(N - i) / (poch(q, i) * poch(q, N - i));
      if (!(closed == geometric) || !(cauchy == closed)) return false;

      // The rearranged sum and the terminating series, where their denominators are defined.
      const ExactScalar qmN = q.pow(-N);
      try {
        ExactScalar rearranged(0);
        ExactScalar scale = poch(a * qmN, N) / poch(qmN, N);
        for (int i = 0; i <= N; ++i)
          rearranged = rearranged + poch(a * q, i) * poch(qmN, i) * scale / (poch(q, i) * poch(a * qmN, i));
        if (!(rearranged == closed)) return false;
        auto series = qseries::phi21_exact({a * q, qmN, a * qmN, q, ExactScalar(1)});
        if (!(series.value * scale == closed)) return false;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ZeroDenominator && e.kind() != ErrorKind::DivisionByZero) throw;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------- conjectures

const std::vector<std::string>& conjecture_patterns() {
  static const std::vector<std::string> p{"llon-even", "balanced", "kummer", "root-of-unity"};
  return p;
}

bool matches_pattern(const std::string& pattern, const ShiftVector& s) {
  if (pattern == "llon-even") return s.k == s.l && s.m == 0 && s.n % 2 == 0;
  if (pattern == "balanced") return s.k + s.l - s.m + s.n == 0;
  if (pattern == "kummer") return s.m == s.l - s.k && s.n == -s.k && s.l % 2 == 0;
  if (pattern == "root-of-unity") return s.k == 0 && s.n == 0 && s.l == s.m && s.l >= 2;
  throw Error(ErrorKind::Usage, "unknown conjecture pattern '" + pattern + "'");
}

bool ConjectureReport::all_pass() const {
  return std::all_of(steps.begin(), steps.end(),
                     [](const ConjectureStep& s) { return s.status == "pass" || s.status == "skipped"; });
}

nlohmann::json ConjectureReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : steps) arr.push_back({{"name", s.name}, {"status", s.status}, {"detail", s.detail}});
  return {{"pattern", pattern}, {"instance", instance.to_string()}, {"steps", arr}, {"all_pass", all_pass()}};
}

namespace {

ParamFamily pattern_family(const std::string& pattern, const ShiftVector& s) {
  const RationalFunction a = V(Var::a), b = V(Var::b), c = V(Var::c), q = V(Var::q), x = V(Var::x), w = V(Var::w);
  if (pattern == "llon-even") return ParamFamily(a, -a, -q, x);
  if (pattern == "balanced") return ParamFamily(a, b, c, c / (a * b));
  if (pattern == "kummer") return ParamFamily(a, b, b * q / a, -q / a);
  return ParamFamily(w * q, b, w * b, RationalFunction(1), s.l);
}

ExactPoint values_of(std::initializer_list<std::pair<Var, Rational>> vals) {
  ExactPoint p = relations::make_point(0, 0, 0, 0, 0);
  for (const auto& [v, r] : vals) p[idx(v)] = r;
  return p;
}

ConjectureStep from_run(const std::string& name, const PipelineRun& run) {
  std::string detail = "N = 1.." + std::to_string(run.n_max) + " at " + nlohmann::json(run.point).dump();
  for (const auto& st : run.steps)
    if (!st.pass) detail += "; N = " + std::to_string(st.N) + " failed" + (st.error.empty() ? "" : ": " + st.error);
  return {name, run.all_pass() ? "pass" : "fail", detail};
}

ConjectureStep identity_step(const std::string& name, const std::string& id, const Bindings& b, double tol) {
  IdentityReport r = verify_identity_noexcept(Registry::builtin().get(id), b, tol);
  return {name, to_string(r.status), id + ": lhs " + r.lhs + ", rhs " + r.rhs + (r.error.empty() ? "" : ", " + r.error)};
}

}  // namespace

ConjectureReport conjecture_check(const std::string& pattern, const ShiftVector& s, int trials, std::uint64_t seed,
                                  int n_max) {
  ConjectureReport rep;
  rep.pattern = pattern;
  rep.instance = s;
  if (!matches_pattern(pattern, s)) {
    rep.steps.push_back({"shape", "fail", s.to_string() + " does not have the shape of pattern " + pattern});
    return rep;
  }
  rep.steps.push_back({"shape", "pass", s.to_string() + " matches " + pattern});

  ThreeTermRelation rel;
  try {
    rel = relations::qr_derive(s);
    rep.steps.push_back({"derive", "pass",
                         "Q has " + std::to_string(rel.Q.num().size()) + "/" + std::to_string(rel.Q.den().size()) +
                             " terms, R has " + std::to_string(rel.R.num().size()) + "/" +
                             std::to_string(rel.R.den().size())});
  } catch (const Error& e) {
    rep.steps.push_back({"derive", "error", e.what()});
    return rep;
  }

  const ParamFamily fam = pattern_family(pattern, s);
  try {
    FamilyCheck fc = check_family_detailed(s, fam, n_max, trials, seed, Execution::Parallel, &rel);
    rep.steps.push_back({"check_family", fc.passed ? "pass" : "fail",
                         fam.to_string() + ", N = 1.." + std::to_string(n_max) + ", " + std::to_string(trials) +
                             " trials" +
                             (fc.passed ? "" : ", Q^(" + std::to_string(fc.first_failing_step) + ") != 0")});
  } catch (const Error& e) {
    rep.steps.push_back({"check_family", "error", e.what()});
  }

  const Rational half(1, 2);
  const double tol = 1e-12;
  if (pattern == "llon-even") {
    if (s.n <= 0) {
      rep.steps.push_back({"telescoped", "skipped", "the identity needs n > 0"});
    } else {
      ExactPoint v = values_of({{Var::a, Rational(1, 3)}, {Var::x, Rational(1, 4)}, {Var::q, half}});
      rep.steps.push_back(from_run("telescoped", telescoped_check(s, fam, std::min(n_max, 3), v, tol, &rel)));
      rep.steps.push_back(identity_step("qbinom2", "qbinom2", {{"a", Rational(1, 3)}, {"x", Rational(1, 4)}, {"q", half}},
                                        tol));
    }
  } else if (pattern == "balanced") {
    if (s.k < 0 || s.l < 0 || s.n < 0 || s.m <= 0) {
      rep.steps.push_back({"telescoped", "skipped", "the identity needs k, l, n >= 0 and m > 0"});
    } else {
      Rational a(1, 3), b(1, 5), c(1, 70);
      ExactPoint v = values_of({{Var::a, a}, {Var::b, b}, {Var::c, c}, {Var::q, half}});
      rep.steps.push_back(from_run("telescoped", telescoped_check(s, fam, std::min(n_max, 3), v, tol, &rel)));
      rep.steps.push_back(identity_step("qgauss", "qgauss", {{"a", a}, {"b", b}, {"c", c}, {"q", half}}, tol));
    }
  } else if (pattern == "kummer") {
    // Terminating instances b = q^{-lN'} and q^{-lN'-1}: the telescoped value must match
    // the sv1 and sv2 closed forms at a = q^{M+2}.
    if (s.l <= 0) {
      rep.steps.push_back({"sv1-sv2", "skipped", "the identity needs l > 0"});
    } else {
      const IdentityRecord& sv1 = Registry::builtin().get("sv1");
      const IdentityRecord& sv2 = Registry::builtin().get("sv2");
      std::string failures;
      int checked = 0;
      for (int M = 0; M <= 2; ++M)
        for (int Np = 1; Np <= n_max; ++Np)
          for (int extra = 0; extra <= 1; ++extra) {
            const ExactScalar q(half);
            long Nsv = static_cast<long>(s.l) * Np / 2;
            ExactPoint v = values_of({{Var::q, half}});
            v[idx(Var::a)] = q.pow(M + 2);
            v[idx(Var::b)] = q.pow(-(static_cast<long>(s.l) * Np + extra));
            try {
              ExactScalar tel = telescoped_value(s, fam, Np, v, rel);
              Bindings b{{"M", ExactScalar(M)}, {"N", ExactScalar(Nsv)}, {"q", q}};
              const IdentityRecord& rec = extra == 0 ? sv1 : sv2;
              ExactScalar expected = qseries::closed_form_eval_exact(rec.rhs, b);
              if (!(tel == expected))
                failures += " " + rec.id + "(M=" + std::to_string(M) + ",N=" + std::to_string(Nsv) + ")";
            } catch (const Error& e) {
              failures += std::string(" error: ") + e.what();
            }
            ++checked;
          }
      rep.steps.push_back({"sv1-sv2", failures.empty() ? "pass" : "fail",
                           std::to_string(checked) + " terminating instances at q = 1/2" + failures});
    }
  } else {
    // b = q^{-lN'-j}: the telescoped value is the (1 - a^{N+1})/(1 - a) closed form at
    // a = zeta_l, N = lN' + j.
    const IdentityRecord& sv5 = Registry::builtin().get("sv5");
    const ExactScalar zeta = ExactScalar::root_of_unity(s.l, 1);
    const ExactScalar q(half);
    std::string failures;
    int checked = 0;
    for (int Np = 1; Np <= n_max; ++Np)
      for (int j = 0; j < s.l; ++j) {
        long Nsv = static_cast<long>(s.l) * Np + j;
        ExactPoint v = values_of({{Var::q, half}});
        v[idx(Var::b)] = q.pow(-Nsv);
        try {
          ExactScalar tel = telescoped_value(s, fam, Np, v, rel);
          ExactScalar base = qseries::phi21_exact(params_of(fam.evaluate(v))).value;
          Bindings b{{"a", zeta}, {"N", ExactScalar(Nsv)}, {"q", q}};
          ExactScalar expected = qseries::closed_form_eval_exact(sv5.rhs, b);
          if (!(tel == expected) || !(base == expected)) failures += " N=" + std::to_string(Nsv);
        } catch (const Error& e) {
          failures += std::string(" error: ") + e.what();
        }
        ++checked;
      }
    rep.steps.push_back({"sv5-instances", failures.empty() ? "pass" : "fail",
                         std::to_string(checked) + " terminating instances with a = zeta_" + std::to_string(s.l) +
                             " at q = 1/2" + failures});
  }
  return rep;
}

}  // namespace qforge::forge
