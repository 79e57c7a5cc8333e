#include "qforge/symmetry/symmetry.hpp"

#include <deque>
#include <map>
#include <sstream>

#include "qforge/error.hpp"

namespace qforge::symmetry {

using relations::Var;

std::string to_string(const GeneratorWord& word) {
  if (word.empty()) return "id";
  std::string s;
  for (Generator g : word) {
    if (!s.empty()) s += ' ';
    s += "s" + std::to_string(static_cast<int>(g));
  }
  return s;
}

GeneratorWord parse_word(std::string_view text) {
  std::istringstream in{std::string(text)};
  GeneratorWord word;
  std::string tok;
  while (in >> tok) {
    if (tok == "id") continue;
    if (tok.size() != 2 || tok[0] != 's' || tok[1] < '0' || tok[1] > '6')
      throw Error(ErrorKind::ParseError, "bad generator '" + tok + "'");
    word.push_back(static_cast<Generator>(tok[1] - '0'));
  }
  return word;
}

const GeneratorWord& expansion(Generator g) {
  using G = Generator;
  static const std::array<GeneratorWord, 7> table{
      GeneratorWord{G::s0},
      GeneratorWord{G::s1},
      GeneratorWord{G::s2},
      GeneratorWord{G::s3},
      GeneratorWord{G::s3, G::s2, G::s1, G::s3, G::s1, G::s2, G::s3},
      GeneratorWord{G::s1, G::s3, G::s1, G::s3, G::s1, G::s2},
      GeneratorWord{G::s1, G::s3, G::s1, G::s3, G::s1, G::s3},
  };
  return table[static_cast<int>(g)];
}

GeneratorWord expand(const GeneratorWord& word) {
  GeneratorWord out;
  for (Generator g : word) {
    const auto& e = expansion(g);
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

FullPoint FullPoint::generic(const ShiftVector& s) {
  return {s,
          {RationalFunction::variable(Var::a), RationalFunction::variable(Var::b), RationalFunction::variable(Var::c),
           RationalFunction::variable(Var::x)}};
}

ShiftVector apply_to_shift(Generator g, const ShiftVector& s) {
  auto [k, l, m, n] = s;
  switch (g) {
    case Generator::s0: return {-k, -l, -m, -n};
    case Generator::s1: return {n, m - k, l + n, k};
    case Generator::s2: return {-k, -l, -m, k + l - m + n};
    case Generator::s3: return {l, k, m, n};
    default: return apply_to_shift(expansion(g), s);
  }
}

ShiftVector apply_to_shift(const GeneratorWord& word, const ShiftVector& s) {
  ShiftVector v = s;
  for (Generator g : word) v = apply_to_shift(g, v);
  return v;
}

namespace {

RationalFunction qpow(int e) {
  relations::Exponents ex{};
  ex[static_cast<int>(Var::q)] = e;
  return RationalFunction(relations::Poly::term(1, relations::Monomial(ex)));
}

RationalFunction checked_div(const RationalFunction& n, const RationalFunction& d, const char* what) {
  if (d.is_zero()) throw Error(ErrorKind::UndefinedAction, std::string("generator divides by zero: ") + what);
  return n / d;
}

}  // namespace

FullPoint apply_generator(Generator g, const FullPoint& p) {
  const auto& [a, b, c, x] = p.params;
  ShiftVector s = apply_to_shift(g, p.shift);
  const RationalFunction q = RationalFunction::variable(Var::q);
  switch (g) {
    case Generator::s0:
      return {s, {a * qpow(p.shift.k), b * qpow(p.shift.l), c * qpow(p.shift.m), x * qpow(p.shift.n)}};
    case Generator::s1:
      return {s, {x, checked_div(c, a, "c/a"), b * x, a}};
    case Generator::s2:
      return {s,
              {checked_div(q, a, "q/a"), checked_div(q, b, "q/b"), checked_div(q * q, c, "q^2/c"),
               checked_div(a * b * x, c, "abx/c")}};
    case Generator::s3:
      return {s, {b, a, c, x}};
    default:
      return apply_word(expansion(g), p);
  }
}

FullPoint apply_word(const GeneratorWord& word, const FullPoint& p) {
  FullPoint v = p;
  for (Generator g : word) v = apply_generator(g, v);
  return v;
}

LambdaVector to_lambda(const ShiftVector& s) { return {s.k, s.l, -s.n, s.k + s.l - s.m}; }

ShiftVector from_lambda(const LambdaVector& v) { return {v.l1, v.l2, v.l1 + v.l2 - v.l4, -v.l3}; }

LambdaVector apply_lambda_map(LambdaMap m, const LambdaVector& v) {
  auto [l1, l2, l3, l4] = v;
  switch (m) {
    case LambdaMap::NegateAll: return {-l1, -l2, -l3, -l4};
    case LambdaMap::Swap12: return {l2, l1, l3, l4};
    case LambdaMap::Swap13: return {l3, l2, l1, l4};
    case LambdaMap::Bar21: return {l4 - l2, l4 - l1, l3, l4};
    case LambdaMap::Bar123: return {l4 - l1, l4 - l2, l4 - l3, l4};
  }
  return v;
}

const GeneratorWord& lambda_map_word(LambdaMap m) {
  using G = Generator;
  static const std::array<GeneratorWord, 5> words{GeneratorWord{G::s0}, GeneratorWord{G::s3}, GeneratorWord{G::s4},
                                                  GeneratorWord{G::s5}, GeneratorWord{G::s0, G::s6}};
  return words[static_cast<int>(m)];
}

LambdaVector GroupElement::apply(const LambdaVector& v) const {
  std::array<int, 4> in{v.l1, v.l2, v.l3, v.l4}, out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i] += matrix[i][j] * in[j];
  return {out[0], out[1], out[2], out[3]};
}

const std::vector<GroupElement>& lambda_group() {
  static const std::vector<GroupElement> group = [] {
    using Mat = std::array<std::array<int, 4>, 4>;
    auto matrix_of = [](LambdaMap m) {
      Mat out{};
      for (int j = 0; j < 4; ++j) {
        LambdaVector e{j == 0, j == 1, j == 2, j == 3};
        LambdaVector img = apply_lambda_map(m, e);
        std::array<int, 4> col{img.l1, img.l2, img.l3, img.l4};
        for (int i = 0; i < 4; ++i) out[i][j] = col[i];
      }
      return out;
    };
    auto mul = [](const Mat& l, const Mat& r) {
      Mat out{};
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          for (int k = 0; k < 4; ++k) out[i][j] += l[i][k] * r[k][j];
      return out;
    };
    Mat id{};
    for (int i = 0; i < 4; ++i) id[i][i] = 1;
    std::vector<GroupElement> elems{{id, {}}};
    std::map<Mat, std::size_t> seen{{id, 0}};
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
      std::size_t cur = queue.front();
      queue.pop_front();
      for (LambdaMap m : kLambdaMaps) {
        // Apply the current element first, then m.
        Mat next = mul(matrix_of(m), elems[cur].matrix);
        if (seen.count(next)) continue;
        GeneratorWord w = elems[cur].word;
        const auto& mw = lambda_map_word(m);
        w.insert(w.end(), mw.begin(), mw.end());
        seen.emplace(next, elems.size());
        elems.push_back({next, std::move(w)});
        queue.push_back(elems.size() - 1);
      }
    }
    return elems;
  }();
  return group;
}

bool in_representative_set(const ShiftVector& s) {
  LambdaVector v = to_lambda(s);
  return v.l4 >= 0 && v.l4 <= 2 * v.l3 && v.l3 <= v.l1 && v.l1 <= v.l2;
}

Representative canonical_representative(const ShiftVector& s) {
  LambdaVector v = to_lambda(s);
  std::optional<Representative> best;
  for (const auto& g : lambda_group()) {
    ShiftVector img = from_lambda(g.apply(v));
    if (!in_representative_set(img)) continue;
    if (!best || img < best->rep) best = Representative{img, g.word};
  }
  if (!best) throw Error(ErrorKind::NoRepresentativeFound, "no representative for shift " + s.to_string());
  return *best;
}

std::set<ShiftVector> orbit_enumerate(const ShiftVector& s) {
  std::set<ShiftVector> orbit{s};
  std::deque<ShiftVector> queue{s};
  while (!queue.empty()) {
    ShiftVector cur = queue.front();
    queue.pop_front();
    for (LambdaMap m : kLambdaMaps) {
      ShiftVector next = from_lambda(apply_lambda_map(m, to_lambda(cur)));
      if (orbit.insert(next).second) queue.push_back(next);
    }
  }
  return orbit;
}

}  // namespace qforge::symmetry
