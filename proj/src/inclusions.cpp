#include "qcoord/inclusions.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace qcoord {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view s) {
  s = trim(s);
  double v = 0;
  const char* begin = s.data();
  if (!s.empty() && s.front() == '+') ++begin;
  auto [p, ec] = std::from_chars(begin, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

template <class Int>
Int parse_integer(std::string_view s) {
  s = trim(s);
  Int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<ClassId> parse_class_list(std::string_view s) {
  std::vector<ClassId> out;
  if (trim(s).empty()) return out;
  for (std::string_view item : split(s, ',')) {
    const auto id = class_from_string(trim(item));
    if (!id) throw std::invalid_argument("unknown class '" + std::string(trim(item)) + "'");
    out.push_back(*id);
  }
  return out;
}

std::string join_classes(const std::vector<ClassId>& ids) {
  std::string out;
  for (ClassId id : ids) {
    if (!out.empty()) out += ",";
    out += to_string(id);
  }
  return out;
}

GalleryEntry parse_entry(std::string_view line) {
  GalleryEntry e;
  bool have_name = false, have_expr = false, have_domain = false;
  for (std::string_view field : split(line, '|')) {
    field = trim(field);
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("field without '=': '" + std::string(field) + "'");
    }
    const std::string_view key = trim(field.substr(0, eq));
    const std::string_view value = trim(field.substr(eq + 1));
    if (key == "name") {
      e.name = value;
      have_name = !value.empty();
    } else if (key == "expr") {
      e.expr_text = value;
      have_expr = !value.empty();
    } else if (key == "domain") {
      e.domain = parse_domain(value);
      have_domain = true;
    } else if (key == "in") {
      e.claimed_in = parse_class_list(value);
    } else if (key == "not_in") {
      e.claimed_not_in = parse_class_list(value);
    } else if (key == "seed") {
      e.seed = parse_integer<std::uint64_t>(value);
    } else if (key == "resolution") {
      e.resolution = parse_integer<int>(value);
      if (e.resolution < 2) throw std::invalid_argument("resolution must be at least 2");
    } else if (key == "notes") {
      e.notes = value;
    } else {
      throw std::invalid_argument("unknown field '" + std::string(key) + "'");
    }
  }
  if (!have_name || !have_expr || !have_domain) {
    throw std::invalid_argument("entry needs name, expr and domain");
  }
  const int arity = arity_of(e.domain);
  (void)parse(e.expr_text, arity);
  for (const auto* list : {&e.claimed_in, &e.claimed_not_in}) {
    for (ClassId id : *list) {
      if (arity_of(id) != arity) {
        throw std::invalid_argument(std::string(to_string(id)) + " does not fit the domain of " +
                                    e.name);
      }
    }
  }
  return e;
}

std::string claim_message(const GalleryEntry& e, ClassId cls, bool member, const Verdict& v,
                          bool ok) {
  std::ostringstream os;
  os << e.name << ": " << (member ? "in " : "not in ") << to_string(cls) << ": "
     << (ok ? "ok" : "DRIFT") << " (" << describe(v) << ")";
  return os.str();
}

}  // namespace

Expr GalleryEntry::expr() const { return parse(expr_text, arity_of(domain)); }

SearchBudget GalleryEntry::budget() const {
  SearchBudget b;
  b.grid_side = resolution;
  b.seed = seed;
  return b;
}

const GalleryEntry* Gallery::find(std::string_view name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

Domain parse_domain(std::string_view text) {
  const auto parts = split(text, ',');
  std::vector<double> v;
  for (auto p : parts) v.push_back(parse_double(p));
  if (v.size() == 2) return Interval(v[0], v[1]);
  if (v.size() == 4) return Box2{Interval(v[0], v[1]), Interval(v[2], v[3])};
  throw std::invalid_argument("domain needs 2 numbers (a,b) or 4 numbers (a,b,c,d)");
}

std::string format_domain(const Domain& d) {
  if (const auto* iv = std::get_if<Interval>(&d)) {
    return format_number(iv->lo()) + "," + format_number(iv->hi());
  }
  const Box2& b = std::get<Box2>(d);
  return format_number(b.x.lo()) + "," + format_number(b.x.hi()) + "," +
         format_number(b.y.lo()) + "," + format_number(b.y.hi());
}

Gallery parse_gallery(std::istream& in) {
  Gallery g;
  bool have_version = false;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    try {
      if (!have_version) {
        const auto eq = line.find('=');
        if (eq == std::string_view::npos || trim(line.substr(0, eq)) != "version") {
          throw std::invalid_argument("catalog must start with 'version=N'");
        }
        g.version = parse_integer<int>(line.substr(eq + 1));
        if (g.version != kCatalogVersion) {
          throw std::invalid_argument("unsupported catalog version " +
                                      std::to_string(g.version));
        }
        have_version = true;
        continue;
      }
      GalleryEntry e = parse_entry(line);
      if (g.find(e.name)) throw std::invalid_argument("duplicate entry '" + e.name + "'");
      g.entries.push_back(std::move(e));
    } catch (const ParseError& ex) {
      throw CatalogError(std::string("expression: ") + ex.what(), lineno);
    } catch (const std::invalid_argument& ex) {
      throw CatalogError(ex.what(), lineno);
    }
  }
  if (!have_version) throw CatalogError("empty catalog", lineno);
  return g;
}

Gallery load_gallery(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open catalog " + path);
  return parse_gallery(in);
}

std::string format_gallery(const Gallery& g) {
  std::ostringstream os;
  os << "version=" << g.version << "\n";
  for (const auto& e : g.entries) {
    os << "name=" << e.name << " | expr=" << e.expr_text << " | domain=" << format_domain(e.domain)
       << " | in=" << join_classes(e.claimed_in) << " | not_in=" << join_classes(e.claimed_not_in)
       << " | seed=" << e.seed << " | resolution=" << e.resolution;
    if (!e.notes.empty()) os << " | notes=" << e.notes;
    os << "\n";
  }
  return os.str();
}

std::vector<std::pair<ClassId, ClassId>> chain_conflicts(const GalleryEntry& e) {
  std::vector<std::pair<ClassId, ClassId>> out;
  for (ClassId in : e.claimed_in) {
    for (ClassId out_cls : e.claimed_not_in) {
      if (is_subclass(in, out_cls)) out.emplace_back(in, out_cls);
    }
  }
  return out;
}

bool GalleryReport::ok() const {
  return conflicts.empty() &&
         std::all_of(results.begin(), results.end(), [](const ClaimResult& r) { return r.ok; });
}

GalleryReport validate_gallery(const Gallery& g) {
  GalleryReport report;
  for (const auto& e : g.entries) {
    for (const auto& [in, out] : chain_conflicts(e)) {
      report.conflicts.push_back({e.name, in, out});
    }
    const Expr f = e.expr();
    const SearchBudget budget = e.budget();
    auto run = [&](ClassId cls, bool member) {
      ClaimResult r;
      r.entry = e.name;
      r.cls = cls;
      r.claimed_member = member;
      r.verdict = check_membership(f, e.domain, cls, budget);
      if (member) {
        r.ok = is_clear(r.verdict);
      } else if (const auto* v = std::get_if<Violated>(&r.verdict)) {
        r.ok = is_sound(f, v->witness);
      }
      r.message = claim_message(e, cls, member, r.verdict, r.ok);
      report.results.push_back(std::move(r));
    };
    for (ClassId cls : e.claimed_in) run(cls, true);
    for (ClassId cls : e.claimed_not_in) run(cls, false);
  }
  return report;
}

void require_no_drift(const GalleryReport& report) {
  for (const auto& r : report.results) {
    if (!r.ok) throw GalleryDrift(r.entry, r.cls, r.message);
  }
  if (!report.conflicts.empty()) {
    const ChainConflict& c = report.conflicts.front();
    throw GalleryDrift(c.entry, c.in,
                       c.entry + ": claimed in " + std::string(to_string(c.in)) +
                           " but not in its superclass " + std::string(to_string(c.not_in)));
  }
}

void validate_search(const SearchConfig& cfg) {
  if (cfg.target_in == cfg.target_not_in || !is_subclass(cfg.target_not_in, cfg.target_in)) {
    throw std::invalid_argument(std::string(to_string(cfg.target_not_in)) +
                                " is not a proper subclass of " +
                                std::string(to_string(cfg.target_in)) +
                                ", so nothing can be in the latter and outside the former");
  }
  const int arity = arity_of(cfg.domain);
  if (arity_of(cfg.target_in) != arity || arity_of(cfg.target_not_in) != arity) {
    throw std::invalid_argument("target classes do not fit the domain");
  }
  if (cfg.trials < 0) throw std::invalid_argument("trials must be non-negative");
}

SearchResult search_separation(const SearchConfig& cfg) {
  validate_search(cfg);
  const int arity = arity_of(cfg.domain);
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const std::string text =
        sample_function(cfg.family, cfg.domain, cfg.seed, static_cast<std::uint64_t>(trial));
    const Expr f = parse(text, arity);
    const Verdict outside = check_membership(f, cfg.domain, cfg.target_not_in, cfg.budget);
    const auto* v = std::get_if<Violated>(&outside);
    if (!v) continue;
    const Verdict inside = check_membership(f, cfg.domain, cfg.target_in, cfg.budget);
    if (const auto* n = std::get_if<NoViolationFound>(&inside)) {
      return Found{trial, text, *n, v->witness};
    }
  }
  return Exhausted{cfg.trials};
}

}  // namespace qcoord
