#include "qforge/cli/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "qforge/error.hpp"
#include "qforge/forge/grid.hpp"
#include "qforge/forge/pipeline.hpp"
#include "qforge/forge/registry.hpp"
#include "qforge/relations/derive.hpp"
#include "qforge/symmetry/symmetry.hpp"

namespace qforge::cli {

using nlohmann::json;
using relations::ShiftVector;
using relations::Var;

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"verify", "derive", "normalize", "pipeline", "conjecture"};
  return c;
}

json CommandRequest::to_json() const {
  json j{{"command", command}, {"tol", tol}, {"seed", seed}, {"format", format}};
  auto put = [&](const char* key, const std::string& v) {
    if (!v.empty()) j[key] = v;
  };
  put("identity", identity);
  put("shift", shift);
  put("grid", grid);
  put("q", q);
  put("bind", bind);
  put("registry", registry);
  put("pattern", pattern);
  if (mode) j["mode"] = *mode;
  if (check_against_table) j["check_against_table"] = true;
  if (command == "pipeline" || command == "conjecture") {
    j["n_max"] = n_max;
    j["trials"] = trials;
  }
  return j;
}

std::optional<CommandRequest> parse_command_line(int argc, const char* const* argv) {
  CLI::App app{"Exact and numeric checks of 2phi1 three-term relations and summation identities", "qforge"};
  app.require_subcommand(1, 1);
  CommandRequest req;
  std::string mode;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", req.seed, "random seed");
    sub->add_option("--output", req.output, "write the report to this file instead of stdout");
    sub->add_option("--format", req.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  };
  auto evaluation = [&](CLI::App* sub) {
    sub->add_option("--tol", req.tol, "absolute tolerance for numeric checks");
    sub->add_option("--q", req.q, "comma-separated q values, e.g. 1/2,2/3");
    sub->add_option("--bind", req.bind, "fixed bindings, e.g. a=3,b=1/5");
  };

  CLI::App* verify = app.add_subcommand("verify", "verify a registered identity over a grid");
  verify->add_option("--identity", req.identity, "identity id")->required();
  verify->add_option("--grid", req.grid, "inclusive integer ranges, e.g. M=0..6,N=0..6");
  verify->add_option("--mode", mode, "exact or numeric")->check(CLI::IsMember({"exact", "numeric"}));
  verify->add_option("--registry", req.registry, "identity registry JSON file");
  verify->add_flag("--serial", req.serial, "evaluate cells serially");
  evaluation(verify);
  common(verify);

  CLI::App* derive = app.add_subcommand("derive", "derive the (Q, R) pair of a shift");
  derive->add_option("--shift", req.shift, "k,l,m,n")->required();
  derive->add_flag("--check-against-table", req.check_against_table, "compare with the tabulated pair");
  common(derive);

  CLI::App* normalize = app.add_subcommand("normalize", "canonical representative of a shift");
  normalize->add_option("--shift", req.shift, "k,l,m,n")->required();
  common(normalize);

  CLI::App* pipeline = app.add_subcommand("pipeline", "family check and telescoping for a shift");
  pipeline->add_option("--shift", req.shift, "k,l,m,n")->required();
  pipeline->add_option("--n-max", req.n_max, "largest iteration step");
  pipeline->add_option("--trials", req.trials, "random points per step");
  evaluation(pipeline);
  common(pipeline);

  CLI::App* conjecture = app.add_subcommand("conjecture", "check a pattern instance");
  conjecture->add_option("--pattern", req.pattern, "llon-even | balanced | kummer | root-of-unity")->required();
  conjecture->add_option("--shift", req.shift, "k,l,m,n")->required();
  conjecture->add_option("--n-max", req.n_max, "largest iteration step");
  conjecture->add_option("--trials", req.trials, "random points per step");
  common(conjecture);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::Usage, e.what());
  }
  for (CLI::App* sub : app.get_subcommands()) req.command = sub->get_name();
  if (!mode.empty()) req.mode = mode;
  return req;
}

void validate(const CommandRequest& req) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::Usage, msg); };
  const auto& cmds = commands();
  if (std::find(cmds.begin(), cmds.end(), req.command) == cmds.end()) fail("unknown command '" + req.command + "'");
  if (!(req.tol > 0)) fail("--tol must be positive");
  if (req.format != "json" && req.format != "text") fail("--format must be json or text");
  if (req.mode && *req.mode != "exact" && *req.mode != "numeric") fail("--mode must be exact or numeric");
  if (req.command == "verify" && req.identity.empty()) fail("verify needs --identity");
  if (req.command != "verify" && req.shift.empty()) fail(req.command + " needs --shift");
  if (req.command == "conjecture" && req.pattern.empty()) fail("conjecture needs --pattern");
  if ((req.command == "pipeline" || req.command == "conjecture") && (req.n_max < 0 || req.trials <= 0))
    fail("--n-max must be non-negative and --trials positive");
}

// ---------------------------------------------------------------- report document

void ReportDocument::recount() {
  summary = {};
  summary.total = static_cast<long>(cases.size());
  for (const auto& c : cases) {
    if (c.status == "pass") ++summary.passed;
    else if (c.status == "fail") ++summary.failed;
    else ++summary.errored;
  }
}

int ReportDocument::exit_code() const { return summary.passed == summary.total ? 0 : 1; }

json ReportDocument::to_json() const {
  json cs = json::array();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    json r{{"index", i},   {"case", c.bindings},   {"status", c.status},       {"lhs", c.lhs},
           {"rhs", c.rhs}, {"abs_err", c.abs_err}, {"terms_used", c.terms_used}};
    if (!c.detail.empty()) r["detail"] = c.detail;
    cs.push_back(std::move(r));
  }
  return {{"tool_version", tool_version},
          {"command", command},
          {"seed", seed},
          {"result", result},
          {"cases", cs},
          {"summary",
           {{"total", summary.total}, {"passed", summary.passed}, {"failed", summary.failed},
            {"errored", summary.errored}}}};
}

ReportDocument ReportDocument::from_json(const json& j) {
  ReportDocument d;
  d.tool_version = j.at("tool_version").get<std::string>();
  d.command = j.at("command");
  d.seed = j.at("seed").get<std::uint64_t>();
  d.result = j.value("result", json::object());
  for (const auto& r : j.at("cases")) {
    CaseRecord c;
    c.bindings = r.at("case").get<std::map<std::string, std::string>>();
    c.status = r.at("status").get<std::string>();
    c.lhs = r.at("lhs").get<std::string>();
    c.rhs = r.at("rhs").get<std::string>();
    c.abs_err = r.at("abs_err").get<double>();
    c.terms_used = r.at("terms_used").get<long>();
    c.detail = r.value("detail", "");
    d.cases.push_back(std::move(c));
  }
  const json& s = j.at("summary");
  d.summary = {s.at("total").get<long>(), s.at("passed").get<long>(), s.at("failed").get<long>(),
               s.at("errored").get<long>()};
  return d;
}

std::string ReportDocument::to_text() const {
  std::ostringstream os;
  os << "qforge " << tool_version << "  " << command.value("command", "") << "  seed " << seed << "\n";
  for (const auto& [key, value] : result.items())
    os << "  " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    os << std::setw(5) << i << "  " << std::left << std::setw(6) << c.status << std::right;
    for (const auto& [k, v] : c.bindings) os << " " << k << "=" << v;
    if (!c.lhs.empty() || !c.rhs.empty()) os << "  lhs " << c.lhs << "  rhs " << c.rhs;
    if (c.abs_err != 0.0) os << "  err " << c.abs_err;
    if (!c.detail.empty()) os << "  " << c.detail;
    os << "\n";
  }
  os << "total " << summary.total << "  passed " << summary.passed << "  failed " << summary.failed << "  errors "
     << summary.errored << "\n";
  return os.str();
}

// ---------------------------------------------------------------- commands

namespace {

ShiftVector shift_arg(const std::string& text) {
  try {
    return ShiftVector::parse(text);
  } catch (const Error& e) {
    throw Error(ErrorKind::Usage, "bad --shift '" + text + "': " + e.what());
  }
}

forge::Bindings bindings_arg(const std::string& text) {
  forge::Bindings out;
  if (text.empty()) return out;
  // Values may be cyclotomic literals with commas inside brackets.
  int depth = 0;
  std::string cur;
  auto flush = [&] {
    auto eq = cur.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::Usage, "bindings look like sym=value, got '" + cur + "'");
    try {
      out[cur.substr(0, eq)] = ExactScalar::parse(cur.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorKind::Usage, "cannot parse binding '" + cur + "': " + e.what());
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

CaseRecord error_case(std::map<std::string, std::string> bindings, const std::exception& e) {
  CaseRecord c;
  c.bindings = std::move(bindings);
  c.status = "error";
  c.detail = e.what();
  return c;
}

CaseRecord from_report(const forge::IdentityReport& r) {
  CaseRecord c;
  c.bindings = r.bindings;
  c.status = forge::to_string(r.status);
  c.lhs = r.lhs;
  c.rhs = r.rhs;
  c.abs_err = r.abs_err;
  c.terms_used = r.terms_used;
  c.detail = r.error;
  if (r.trivial) c.detail = c.detail.empty() ? "trivial" : c.detail + "; trivial";
  return c;
}

void run_verify(const CommandRequest& req, ReportDocument& doc) {
  forge::Registry loaded;
  const forge::Registry* reg = &forge::Registry::builtin();
  if (!req.registry.empty()) {
    try {
      loaded = forge::Registry::from_file(req.registry);
    } catch (const Error& e) {
      throw Error(ErrorKind::Usage, "cannot load registry '" + req.registry + "': " + e.what());
    }
    reg = &loaded;
  }
  const forge::IdentityRecord* rec = nullptr;
  try {
    rec = &reg->get(req.identity);
  } catch (const Error&) {
    throw Error(ErrorKind::Usage, "unknown identity '" + req.identity + "'");
  }
  forge::GridSpec grid{forge::parse_grid(req.grid), forge::parse_scalar_list(req.q), bindings_arg(req.bind)};
  std::optional<forge::Mode> mode;
  if (req.mode) mode = forge::parse_mode(*req.mode);
  auto reports = forge::run_grid(*rec, grid.cells(), req.tol, mode,
                                 req.serial ? forge::Execution::Serial : forge::Execution::Parallel);
  for (const auto& r : reports) doc.cases.push_back(from_report(r));
  doc.result = {{"identity", rec->id}, {"description", rec->description},
                {"mode", forge::to_string(mode.value_or(rec->mode))}, {"cells", grid.size()}};
}

void run_derive(const CommandRequest& req, ReportDocument& doc) {
  const ShiftVector s = shift_arg(req.shift);
  const std::map<std::string, std::string> key{{"shift", s.to_string()}};
  relations::ThreeTermRelation rel;
  try {
    rel = relations::qr_derive(s);
  } catch (const Error& e) {
    doc.cases.push_back(error_case(key, e));
    return;
  }
  doc.result = {{"shift", s.to_string()}, {"Q", rel.Q.to_string()}, {"R", rel.R.to_string()}};
  CaseRecord derived;
  derived.bindings = key;
  derived.status = "pass";
  derived.detail = "derived; residual verified at random points";
  doc.cases.push_back(derived);
  if (req.check_against_table) {
    CaseRecord c;
    c.bindings = {{"shift", s.to_string()}, {"check", "table"}};
    try {
      auto table = relations::qr_lookup(s);
      bool same = table.Q == rel.Q && table.R == rel.R;
      c.status = same ? "pass" : "fail";
      c.lhs = "Q = " + rel.Q.to_string() + "; R = " + rel.R.to_string();
      c.rhs = "Q = " + table.Q.to_string() + "; R = " + table.R.to_string();
      c.detail = same ? "matches the tabulated pair" : "differs from the tabulated pair";
    } catch (const Error& e) {
      c = error_case(c.bindings, e);
    }
    doc.cases.push_back(c);
  }
}

void run_normalize(const CommandRequest& req, ReportDocument& doc) {
  const ShiftVector s = shift_arg(req.shift);
  auto r = symmetry::canonical_representative(s);
  auto orbit = symmetry::orbit_enumerate(s);
  doc.result = {{"shift", s.to_string()}, {"rep", r.rep.to_string()}, {"word", symmetry::to_string(r.word)},
                {"orbit_size", static_cast<long>(orbit.size())}};
  CaseRecord c;
  c.bindings = {{"shift", s.to_string()}};
  c.lhs = symmetry::apply_to_shift(r.word, s).to_string();
  c.rhs = r.rep.to_string();
  c.status = c.lhs == c.rhs && symmetry::in_representative_set(r.rep) ? "pass" : "fail";
  c.detail = "word " + symmetry::to_string(r.word);
  doc.cases.push_back(c);
}

void run_pipeline(const CommandRequest& req, ReportDocument& doc) {
  const ShiftVector s = shift_arg(req.shift);
  const forge::Bindings bind = bindings_arg(req.bind);
  const auto qs = forge::parse_scalar_list(req.q);
  auto fams = forge::solution_families(s);
  json fam_names = json::array();
  for (const auto& f : fams) fam_names.push_back(f.to_string());
  doc.result = {{"shift", s.to_string()}, {"families", fam_names}};
  if (fams.empty()) {
    CaseRecord c;
    c.bindings = {{"shift", s.to_string()}};
    c.status = "fail";
    c.detail = "no registered or pattern family";
    doc.cases.push_back(c);
    return;
  }
  for (const auto& fam : fams) {
    const std::string fname = fam.to_string();
    CaseRecord fc;
    fc.bindings = {{"family", fname}, {"check", "Q^(N) = 0"}};
    try {
      auto r = forge::check_family_detailed(s, fam, req.n_max, req.trials, req.seed);
      fc.status = r.passed ? "pass" : "fail";
      fc.terms_used = r.evaluations;
      fc.detail = std::to_string(r.evaluations) + " evaluations, " + std::to_string(r.resamples) + " resamples" +
                  (r.passed ? "" : ", first failure at N = " + std::to_string(r.first_failing_step));
    } catch (const Error& e) {
      fc = error_case(fc.bindings, e);
    }
    doc.cases.push_back(fc);

    // Telescoping needs every free symbol and q.
    bool complete = !qs.empty();
    for (Var v : fam.free_symbols()) complete = complete && bind.count(relations::kVarNames[static_cast<int>(v)]);
    if (!complete) continue;
    relations::ExactPoint values = relations::make_point(0, 0, 0, 0, 0);
    for (Var v : fam.free_symbols()) values[static_cast<int>(v)] = bind.at(relations::kVarNames[static_cast<int>(v)]);
    for (const auto& q : qs) {
      values[static_cast<int>(Var::q)] = q;
      try {
        auto run = forge::telescoped_check(s, fam, req.n_max, values, req.tol);
        for (const auto& st : run.steps) {
          CaseRecord c;
          c.bindings = run.point;
          c.bindings["family"] = fname;
          c.bindings["N"] = std::to_string(st.N);
          c.status = st.pass ? "pass" : (st.error.empty() ? "fail" : "error");
          c.lhs = st.lhs;
          c.rhs = st.telescoped;
          c.abs_err = st.residual;
          c.detail = st.error.empty() ? (st.exact ? "exact" : "numeric") : st.error;
          doc.cases.push_back(c);
        }
      } catch (const Error& e) {
        doc.cases.push_back(error_case({{"family", fname}, {"q", q.to_string()}}, e));
      }
    }
  }
}

void run_conjecture(const CommandRequest& req, ReportDocument& doc) {
  const ShiftVector s = shift_arg(req.shift);
  const auto& pats = forge::conjecture_patterns();
  if (std::find(pats.begin(), pats.end(), req.pattern) == pats.end())
    throw Error(ErrorKind::Usage, "unknown pattern '" + req.pattern + "'");
  auto rep = forge::conjecture_check(req.pattern, s, req.trials, req.seed, req.n_max);
  doc.result = {{"pattern", req.pattern}, {"instance", s.to_string()}};
  for (const auto& st : rep.steps) {
    if (st.status == "skipped") continue;
    CaseRecord c;
    c.bindings = {{"step", st.name}};
    c.status = st.status;
    c.detail = st.detail;
    doc.cases.push_back(c);
  }
}

}  // namespace

ReportDocument execute(const CommandRequest& req) {
  validate(req);
  ReportDocument doc;
  doc.command = req.to_json();
  doc.seed = req.seed;
  if (req.command == "verify") run_verify(req, doc);
  else if (req.command == "derive") run_derive(req, doc);
  else if (req.command == "normalize") run_normalize(req, doc);
  else if (req.command == "pipeline") run_pipeline(req, doc);
  else run_conjecture(req, doc);
  doc.recount();
  return doc;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    auto req = parse_command_line(argc, argv);
    if (!req) return 0;
    ReportDocument doc = execute(*req);
    std::string text = req->format == "json" ? doc.to_json().dump(2) + "\n" : doc.to_text();
    if (req->output.empty()) {
      out << text;
    } else {
      std::ofstream f(req->output);
      if (!f) {
        err << "qforge: cannot write " << req->output << "\n";
        return 2;
      }
      f << text;
    }
    return doc.exit_code();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Usage) {
      err << "qforge: " << e.what() << "\n";
      return 2;
    }
    err << "qforge: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qforge::cli
