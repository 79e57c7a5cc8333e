#include "qforge/forge/grid.hpp"

#include "qforge/error.hpp"

namespace qforge::forge {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

long parse_long(const std::string& text, const std::string& context) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size())
    throw Error(ErrorKind::Usage, "expected an integer in '" + context + "'");
  return v;
}

}  // namespace

std::size_t GridSpec::size() const {
  std::size_t n = qs.empty() ? 1 : qs.size();
  for (const auto& ax : axes) n *= static_cast<std::size_t>(ax.hi - ax.lo + 1);
  return n;
}

std::vector<Bindings> GridSpec::cells() const {
  std::vector<Bindings> out;
  out.reserve(size());
  std::vector<long> cur(axes.size());
  auto emit = [&](const std::optional<ExactScalar>& q) {
    for (std::size_t i = 0; i < axes.size(); ++i) cur[i] = axes[i].lo;
    while (true) {
      Bindings b = fixed;
      if (q) b["q"] = *q;
      for (std::size_t i = 0; i < axes.size(); ++i) b[axes[i].symbol] = ExactScalar(cur[i]);
      out.push_back(std::move(b));
      std::size_t i = axes.size();
      while (i > 0) {
        --i;
        if (++cur[i] <= axes[i].hi) break;
        cur[i] = axes[i].lo;
        if (i == 0) return;
      }
      if (axes.empty()) return;
    }
  };
  if (qs.empty()) emit(std::nullopt);
  for (const auto& q : qs) emit(q);
  return out;
}

std::vector<GridAxis> parse_grid(const std::string& text) {
  std::vector<GridAxis> axes;
  if (text.empty()) return axes;
  for (const std::string& part : split(text, ',')) {
    auto eq = part.find('=');
    auto dots = part.find("..");
    if (eq == std::string::npos || dots == std::string::npos || dots < eq || eq == 0)
      throw Error(ErrorKind::Usage, "grid ranges look like sym=lo..hi, got '" + part + "'");
    GridAxis ax{part.substr(0, eq), parse_long(part.substr(eq + 1, dots - eq - 1), part),
                parse_long(part.substr(dots + 2), part)};
    if (ax.hi < ax.lo) throw Error(ErrorKind::Usage, "empty grid range '" + part + "'");
    for (const auto& other : axes)
      if (other.symbol == ax.symbol) throw Error(ErrorKind::Usage, "symbol '" + ax.symbol + "' ranged twice");
    axes.push_back(ax);
  }
  return axes;
}

std::vector<ExactScalar> parse_scalar_list(const std::string& text) {
  std::vector<ExactScalar> out;
  if (text.empty()) return out;
  // Cyclotomic literals contain commas inside brackets, so split only at depth zero.
  int depth = 0;
  std::string cur;
  auto flush = [&] {
    try {
      out.push_back(ExactScalar::parse(cur));
    } catch (const Error& e) {
      throw Error(ErrorKind::Usage, "cannot parse scalar '" + cur + "': " + e.what());
    }
    cur.clear();
  };
  for (char ch : text) {
    if (ch == '[') ++depth;
    if (ch == ']') --depth;
    if (ch == ',' && depth == 0) {
      flush();
      continue;
    }
    cur += ch;
  }
  flush();
  return out;
}

std::vector<IdentityReport> run_grid(const IdentityRecord& rec, const std::vector<Bindings>& cells, double tol,
                                     std::optional<Mode> mode, Execution exec) {
  std::vector<IdentityReport> out(cells.size());
  const long n = static_cast<long>(cells.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) out[i] = verify_identity_noexcept(rec, cells[i], tol, mode);
  } else {
    for (long i = 0; i < n; ++i) out[i] = verify_identity_noexcept(rec, cells[i], tol, mode);
  }
  return out;
}

}  // namespace qforge::forge
