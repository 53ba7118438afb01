#include "qcoord/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "qcoord/inclusions.hpp"
#include "qcoord/inequalities.hpp"

namespace qcoord::cli {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ClassId require_class(const json& j) {
  const std::string name = j.get<std::string>();
  const auto id = class_from_string(name);
  if (!id) throw UsageError("unknown class '" + name + "'");
  return *id;
}

std::string domain_text(const Domain& d) {
  if (const auto* iv = std::get_if<Interval>(&d)) {
    return "[" + format_number(iv->lo()) + ", " + format_number(iv->hi()) + "]";
  }
  const Box2& b = std::get<Box2>(d);
  return "[" + format_number(b.x.lo()) + ", " + format_number(b.x.hi()) + "] x [" +
         format_number(b.y.lo()) + ", " + format_number(b.y.hi()) + "]";
}

std::string point_text(Point p, int arity) {
  if (arity == 1) return format_number(p.x);
  return "(" + format_number(p.x) + ", " + format_number(p.y) + ")";
}

void print_witness(std::ostream& os, const Witness& w) {
  const int arity = arity_of(w.cls);
  os << "  witness for " << to_string(w.cls);
  if (w.slice) {
    os << " on the partial mapping " << to_string(w.slice->axis)
       << " = " << format_number(w.slice->frozen);
  }
  os << "\n    p1 = " << point_text(w.p1, arity) << ", p2 = " << point_text(w.p2, arity)
     << "\n    t = " << format_number(w.params.t);
  if (w.params.s) os << ", s = " << format_number(*w.params.s);
  if (w.params.delta) os << ", delta = " << format_number(*w.params.delta);
  os << "\n    lhs = " << format_number(w.lhs) << ", rhs = " << format_number(w.rhs)
     << ", margin = " << format_number(w.margin) << "\n";
}

void print_report(std::ostream& os, const InequalityReport& r, const std::string& indent) {
  os << indent << r.id << ": " << (r.all_hold() ? "holds" : "FAILS") << "\n";
  for (std::size_t i = 0; i < r.terms.size(); ++i) {
    os << indent << "  " << r.terms[i].name << " = " << format_number(r.terms[i].value) << "\n";
    if (i < r.slacks.size()) {
      os << indent << "    <=  slack " << format_number(r.slacks[i])
         << (r.holds[i] ? "" : "  (fails)") << "\n";
    }
  }
  for (const Term& t : r.details) {
    os << indent << "  [" << t.name << " = " << format_number(t.value) << "]\n";
  }
  for (const auto& p : r.parts) print_report(os, p, indent + "  ");
}

Execution error_outcome(const std::string& message) {
  Execution ex;
  ex.outcome = {{"kind", "error"}, {"message", message}};
  ex.exit_code = kExitUsage;
  ex.text = "error: " + message + "\n";
  return ex;
}

Domain domain_of(const json& inputs) {
  const json& d = inputs.at("domain");
  if (d.is_string()) return parse_domain(d.get<std::string>());
  return domain_from_json(d);
}

Execution run_check(const json& inputs, const json& config) {
  const Domain domain = domain_of(inputs);
  const ClassId cls = require_class(inputs.at("class"));
  if (arity_of(cls) != arity_of(domain)) {
    throw UsageError(std::string(to_string(cls)) + " needs " +
                     (arity_of(cls) == 1 ? "an interval domain a,b" : "a rectangle domain a,b,c,d"));
  }
  const Expr f = parse(inputs.at("f").get<std::string>(), arity_of(domain));
  const SearchBudget budget = budget_from_json(config);
  const Verdict v = check_membership(f, domain, cls, budget);

  Execution ex;
  ex.outcome = to_json(v);
  std::ostringstream os;
  os << to_string(cls) << " on " << domain_text(domain) << ": " << describe(v) << "\n";
  if (const auto* x = std::get_if<Violated>(&v)) {
    print_witness(os, x->witness);
    ex.exit_code = kExitFail;
  } else if (std::holds_alternative<Undefined>(v)) {
    ex.exit_code = kExitUsage;
  }
  ex.text = os.str();
  return ex;
}

Execution run_verify(const json& inputs, const json& config) {
  const Domain domain = domain_of(inputs);
  const std::string name = inputs.at("inequality").get<std::string>();
  const auto id = inequality_from_string(name);
  if (!id) throw UsageError("unknown inequality '" + name + "'");
  if (arity_of(*id) != arity_of(domain)) {
    throw UsageError(name + " needs " +
                     (arity_of(*id) == 1 ? "an interval domain a,b" : "a rectangle domain a,b,c,d"));
  }
  const Expr f = parse(inputs.at("f").get<std::string>(), arity_of(domain));
  const InequalityReport r = evaluate_inequality(*id, f, domain, quad_config_from_json(config));

  Execution ex;
  ex.outcome = to_json(r);
  bool ok = r.all_hold();
  for (const auto& p : r.parts) ok = ok && p.all_hold();
  ex.exit_code = ok ? kExitPass : kExitFail;
  std::ostringstream os;
  os << "f = " << inputs.at("f").get<std::string>() << " on " << domain_text(domain) << "\n";
  print_report(os, r, "");
  double worst = 0;
  for (double e : r.quad_errors) worst = std::max(worst, e);
  os << "largest quadrature error estimate " << format_number(worst)
     << (r.converged ? "" : "; quadrature did NOT converge") << "\n";
  ex.text = os.str();
  return ex;
}

Execution run_search(const json& inputs, const json& config) {
  SearchConfig cfg;
  cfg.target_in = require_class(inputs.at("in"));
  cfg.target_not_in = require_class(inputs.at("not_in"));
  const std::string family = inputs.at("family").get<std::string>();
  const auto fam = family_from_string(family);
  if (!fam) throw UsageError("unknown family '" + family + "' (use pwlN, pwlNxR or polyD)");
  cfg.family = *fam;
  cfg.trials = inputs.at("trials").get<int>();
  cfg.domain = domain_of(inputs);
  cfg.budget = budget_from_json(config);
  cfg.seed = cfg.budget.seed;
  try {
    validate_search(cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const SearchResult r = search_separation(cfg);

  Execution ex;
  ex.outcome = to_json(r);
  std::ostringstream os;
  if (const auto* f = std::get_if<Found>(&r)) {
    os << "found at trial " << f->trial << ": f = " << f->expr_text << "\n  "
       << to_string(cfg.target_in) << ": " << describe(Verdict{f->verdict_in}) << "\n  "
       << to_string(cfg.target_not_in) << ": violated\n";
    print_witness(os, f->witness_not_in);
  } else {
    os << "exhausted: no separating function in " << cfg.trials << " trials of "
       << to_string(cfg.family) << "\n";
    ex.exit_code = kExitFail;
  }
  ex.text = os.str();
  return ex;
}

Execution run_gallery(const json& inputs) {
  const std::string path = inputs.at("catalog").get<std::string>();
  const std::string mode = inputs.at("mode").get<std::string>();
  const Gallery g = load_gallery(path);
  Execution ex;
  std::ostringstream os;
  if (mode == "list") {
    json entries = json::array();
    for (const auto& e : g.entries) {
      entries.push_back({{"name", e.name},
                         {"expr", e.expr_text},
                         {"domain", to_json(e.domain)},
                         {"seed", e.seed},
                         {"resolution", e.resolution}});
      os << e.name << ": " << e.expr_text << " on " << domain_text(e.domain) << "\n";
    }
    ex.outcome = {{"kind", "list"}, {"version", g.version}, {"entries", entries}};
  } else {
    const GalleryReport report = validate_gallery(g);
    ex.outcome = to_json(report);
    for (const auto& r : report.results) os << r.message << "\n";
    for (const auto& c : report.conflicts) {
      os << c.entry << ": claimed in " << to_string(c.in) << " but not in its superclass "
         << to_string(c.not_in) << "\n";
    }
    os << (report.ok() ? "all claims re-validate" : "gallery drift detected") << " ("
       << report.results.size() << " claims, " << g.entries.size() << " entries)\n";
    ex.exit_code = report.ok() ? kExitPass : kExitFail;
  }
  ex.text = os.str();
  return ex;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(std::ostream& out, std::ostream& err, const Execution& ex, const json* record) {
  if (record) {
    out << record->dump(2) << "\n";
    if (ex.exit_code == kExitUsage) err << ex.text;
  } else {
    (ex.exit_code == kExitUsage ? err : out) << ex.text;
  }
}

}  // namespace

Execution execute(const std::string& command, const json& inputs, const json& config) {
  try {
    if (command == "check") return run_check(inputs, config);
    if (command == "verify") return run_verify(inputs, config);
    if (command == "search") return run_search(inputs, config);
    if (command == "gallery") return run_gallery(inputs);
    return error_outcome("unknown command '" + command + "'");
  } catch (const ParseError& e) {
    Execution ex = error_outcome(e.what());
    ex.outcome["offset"] = e.offset();
    return ex;
  } catch (const DomainError& e) {
    Execution ex = error_outcome(std::string("f is undefined: ") + e.what());
    return ex;
  } catch (const CatalogError& e) {
    return error_outcome(std::string("catalog ") + e.what());
  } catch (const json::exception& e) {
    return error_outcome(std::string("malformed record: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return error_outcome(e.what());
  } catch (const std::runtime_error& e) {
    return error_outcome(e.what());
  }
}

json make_record(const std::string& command, const json& inputs, const json& config,
                 const Execution& ex, double wall_time) {
  return {{"schema", kReportSchema},
          {"tool_version", QCOORD_VERSION},
          {"command", command},
          {"inputs", inputs},
          {"config", config},
          {"outcome", ex.outcome},
          {"exit_code", ex.exit_code},
          {"wall_time", wall_time}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qcoord: falsification checks for convexity-type classes and "
               "Hadamard-type inequality reports"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(QCOORD_VERSION));

  std::string f_text, domain_text_arg, class_name, inequality, in_name, not_in_name;
  std::string family = "pwl4", catalog = QCOORD_DEFAULT_CATALOG, record_path;
  std::string search_domain = "-1,1,-1,1";
  SearchBudget budget;
  QuadConfig quad;
  int trials = 100;
  bool as_json = false, validate = false, list = false;

  auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--resolution", budget.grid_side, "grid side (and slice count)")
        ->capture_default_str()
        ->check(CLI::Range(2, 1000));
    sub->add_option("--seed", budget.seed, "seed of the low-discrepancy shift")
        ->capture_default_str();
    sub->add_option("--samples", budget.lds_samples, "low-discrepancy candidates")
        ->capture_default_str()
        ->check(CLI::Range(0, 100000000));
    sub->add_option("--param-side", budget.param_side, "parameter grid side")
        ->capture_default_str()
        ->check(CLI::Range(1, 1000));
  };

  auto* check = app.add_subcommand("check", "search for a violation of a class");
  check->add_option("--f", f_text, "expression in x (and y)")->required();
  check->add_option("--domain", domain_text_arg, "a,b or a,b,c,d")->required();
  check->add_option("--class", class_name, "class id, e.g. QC2 or CoordJQC2")->required();
  add_budget(check);
  check->add_flag("--json", as_json, "print the run record as JSON");

  auto* verify = app.add_subcommand("verify", "evaluate every term of an inequality");
  verify->add_option("--inequality", inequality, "HH1D, JQC1D, WQC1D, CHAIN1_6, THM_2_1, THM_2_4")
      ->required();
  verify->add_option("--f", f_text, "expression in x (and y)")->required();
  verify->add_option("--domain", domain_text_arg, "a,b or a,b,c,d")->required();
  verify->add_option("--rel-tol", quad.rel_tol)->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--abs-tol", quad.abs_tol)->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--max-subdivisions", quad.max_subdivisions)
      ->capture_default_str()
      ->check(CLI::Range(1, 10000000));
  verify->add_flag("--json", as_json, "print the run record as JSON");

  auto* search = app.add_subcommand("search", "look for a function separating two classes");
  search->add_option("--in", in_name, "class the function must stay in")->required();
  search->add_option("--not-in", not_in_name, "subclass the function must leave")->required();
  search->add_option("--family", family, "pwlN, pwlNxR or polyD")->capture_default_str();
  search->add_option("--trials", trials)->capture_default_str()->check(CLI::NonNegativeNumber);
  search->add_option("--domain", search_domain, "a,b or a,b,c,d")->capture_default_str();
  add_budget(search);
  search->add_flag("--json", as_json, "print the run record as JSON");

  auto* gallery = app.add_subcommand("gallery", "validate or list the function gallery");
  gallery->add_flag("--validate", validate, "re-run every claim (default)");
  gallery->add_flag("--list", list, "list the entries");
  gallery->add_option("--catalog", catalog, "catalog file")->capture_default_str();
  gallery->add_flag("--json", as_json, "print the run record as JSON");

  auto* replay = app.add_subcommand("replay", "re-run a JSON run record and compare outcomes");
  replay->add_option("record", record_path, "file written by --json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  std::string command;
  json inputs, config;
  if (check->parsed()) {
    command = "check";
    inputs = {{"f", f_text}, {"domain", domain_text_arg}, {"class", class_name}};
    config = to_json(budget);
  } else if (verify->parsed()) {
    command = "verify";
    inputs = {{"f", f_text}, {"domain", domain_text_arg}, {"inequality", inequality}};
    config = to_json(quad);
  } else if (search->parsed()) {
    command = "search";
    inputs = {{"in", in_name},
              {"not_in", not_in_name},
              {"family", family},
              {"trials", trials},
              {"domain", search_domain}};
    config = to_json(budget);
  } else if (gallery->parsed()) {
    if (validate && list) {
      err << "error: --validate and --list are exclusive\n";
      return kExitUsage;
    }
    command = "gallery";
    inputs = {{"catalog", catalog}, {"mode", list ? "list" : "validate"}};
    config = json::object();
  } else {
    json record;
    try {
      record = json::parse(read_file(record_path));
      if (record.at("schema").get<int>() != kReportSchema) {
        throw UsageError("unsupported schema " + record.at("schema").dump());
      }
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    const Execution ex = execute(record.at("command").get<std::string>(), record.at("inputs"),
                                 record.at("config"));
    const bool same = ex.outcome == record.at("outcome") &&
                      ex.exit_code == record.value("exit_code", ex.exit_code);
    out << ex.text << (same ? "replay: outcome reproduced\n" : "replay: outcome DIFFERS\n");
    return same ? kExitPass : kExitFail;
  }

  const auto start = std::chrono::steady_clock::now();
  const Execution ex = execute(command, inputs, config);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (as_json) {
    const json record = make_record(command, inputs, config, ex, wall);
    emit(out, err, ex, &record);
  } else {
    emit(out, err, ex, nullptr);
  }
  return ex.exit_code;
}

}  // namespace qcoord::cli
