#include "qcoord/report_json.hpp"

#include <stdexcept>

namespace qcoord {

namespace {

json point_json(Point p, int arity) {
  return arity == 1 ? json::array({p.x}) : json::array({p.x, p.y});
}

Point point_from_json(const json& j) {
  Point p;
  p.x = j.at(0).get<double>();
  if (j.size() > 1) p.y = j.at(1).get<double>();
  return p;
}

ClassId class_id(const json& j) {
  const auto id = class_from_string(j.get<std::string>());
  if (!id) throw std::invalid_argument("unknown class " + j.dump());
  return *id;
}

json terms_json(const std::vector<Term>& terms) {
  json out = json::array();
  for (const Term& t : terms) out.push_back({{"name", t.name}, {"value", t.value}});
  return out;
}

}  // namespace

json to_json(const Domain& d) {
  if (const auto* iv = std::get_if<Interval>(&d)) return json::array({iv->lo(), iv->hi()});
  const Box2& b = std::get<Box2>(d);
  return json::array({b.x.lo(), b.x.hi(), b.y.lo(), b.y.hi()});
}

Domain domain_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() == 2) return Interval(v[0], v[1]);
  if (v.size() == 4) return Box2{Interval(v[0], v[1]), Interval(v[2], v[3])};
  throw std::invalid_argument("domain needs 2 or 4 numbers");
}

json to_json(const Witness& w) {
  // A slice witness lives on a 1D partial mapping even inside a 2D class.
  const int arity = (arity_of(w.cls) == 1) ? 1 : 2;
  json params = {{"t", w.params.t}};
  if (w.params.s) params["s"] = *w.params.s;
  if (w.params.delta) params["delta"] = *w.params.delta;
  json j = {{"class", std::string(to_string(w.cls))},
            {"p1", point_json(w.p1, arity)},
            {"p2", point_json(w.p2, arity)},
            {"params", params},
            {"lhs", w.lhs},
            {"rhs", w.rhs},
            {"margin", w.margin},
            {"terms", w.terms},
            {"f1", w.f1},
            {"f2", w.f2}};
  if (w.slice) {
    j["slice"] = {{"axis", to_string(w.slice->axis)}, {"frozen", w.slice->frozen}};
  }
  return j;
}

Witness witness_from_json(const json& j) {
  Witness w;
  w.cls = class_id(j.at("class"));
  w.p1 = point_from_json(j.at("p1"));
  w.p2 = point_from_json(j.at("p2"));
  const json& p = j.at("params");
  w.params.t = p.at("t").get<double>();
  if (p.contains("s")) w.params.s = p.at("s").get<double>();
  if (p.contains("delta")) w.params.delta = p.at("delta").get<double>();
  w.lhs = j.at("lhs").get<double>();
  w.rhs = j.at("rhs").get<double>();
  w.margin = j.at("margin").get<double>();
  w.terms = j.at("terms").get<std::vector<double>>();
  w.f1 = j.at("f1").get<double>();
  w.f2 = j.at("f2").get<double>();
  if (j.contains("slice")) {
    const json& s = j.at("slice");
    const std::string axis = s.at("axis").get<std::string>();
    if (axis != "x" && axis != "y") throw std::invalid_argument("slice axis must be x or y");
    w.slice = SliceRef{axis == "x" ? Axis::X : Axis::Y, s.at("frozen").get<double>()};
  }
  return w;
}

json to_json(const Verdict& v) {
  if (const auto* n = std::get_if<NoViolationFound>(&v)) {
    return {{"kind", "no_violation_found"},
            {"resolution", n->resolution},
            {"samples", n->samples},
            {"seed", n->seed},
            {"summary", describe(v)}};
  }
  if (const auto* x = std::get_if<Violated>(&v)) {
    return {{"kind", "violated"},
            {"samples", x->samples},
            {"witness", to_json(x->witness)},
            {"summary", describe(v)}};
  }
  const auto& u = std::get<Undefined>(v);
  return {{"kind", "undefined"},
          {"point", point_json(u.point, u.arity)},
          {"message", u.message},
          {"summary", describe(v)}};
}

Verdict verdict_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "no_violation_found") {
    return NoViolationFound{j.at("resolution").get<int>(), j.at("samples").get<long>(),
                            j.at("seed").get<std::uint64_t>()};
  }
  if (kind == "violated") {
    return Violated{witness_from_json(j.at("witness")), j.at("samples").get<long>()};
  }
  if (kind == "undefined") {
    const json& p = j.at("point");
    return Undefined{point_from_json(p), static_cast<int>(p.size()),
                     j.at("message").get<std::string>()};
  }
  throw std::invalid_argument("unknown verdict kind " + kind);
}

json to_json(const InequalityReport& r) {
  json links = json::array();
  for (std::size_t i = 0; i < r.slacks.size(); ++i) {
    links.push_back({{"slack", r.slacks[i]}, {"holds", static_cast<bool>(r.holds[i])}});
  }
  json parts = json::array();
  for (const auto& p : r.parts) parts.push_back(to_json(p));
  return {{"inequality", r.id},
          {"terms", terms_json(r.terms)},
          {"links", links},
          {"holds", r.all_hold()},
          {"details", terms_json(r.details)},
          {"parts", parts},
          {"quad_errors", r.quad_errors},
          {"converged", r.converged}};
}

json to_json(const SearchResult& r) {
  if (const auto* f = std::get_if<Found>(&r)) {
    return {{"kind", "found"},
            {"trial", f->trial},
            {"expr", f->expr_text},
            {"verdict_in", to_json(Verdict{f->verdict_in})},
            {"witness_not_in", to_json(f->witness_not_in)}};
  }
  return {{"kind", "exhausted"}, {"trials", std::get<Exhausted>(r).trials}};
}

json to_json(const GalleryReport& r) {
  json claims = json::array();
  for (const auto& c : r.results) {
    claims.push_back({{"entry", c.entry},
                      {"class", std::string(to_string(c.cls))},
                      {"claim", c.claimed_member ? "in" : "not_in"},
                      {"ok", c.ok},
                      {"verdict", to_json(c.verdict)}});
  }
  json conflicts = json::array();
  for (const auto& c : r.conflicts) {
    conflicts.push_back({{"entry", c.entry},
                         {"in", std::string(to_string(c.in))},
                         {"not_in", std::string(to_string(c.not_in))}});
  }
  return {{"ok", r.ok()}, {"claims", claims}, {"conflicts", conflicts}};
}

json to_json(const SearchBudget& b) {
  return {{"resolution", b.grid_side},
          {"param_side", b.param_side},
          {"lds_samples", b.lds_samples},
          {"refine_iterations", b.refine_iterations},
          {"seed", b.seed}};
}

SearchBudget budget_from_json(const json& j) {
  // Missing keys keep their defaults.
  SearchBudget b;
  b.grid_side = j.value("resolution", b.grid_side);
  b.param_side = j.value("param_side", b.param_side);
  b.lds_samples = j.value("lds_samples", b.lds_samples);
  b.refine_iterations = j.value("refine_iterations", b.refine_iterations);
  b.seed = j.value("seed", b.seed);
  return b;
}

json to_json(const QuadConfig& c) {
  return {{"rel_tol", c.rel_tol},
          {"abs_tol", c.abs_tol},
          {"max_subdivisions", c.max_subdivisions},
          {"kink_split", c.kink_split},
          {"verification_tolerance", kVerificationTolerance}};
}

QuadConfig quad_config_from_json(const json& j) {
  QuadConfig c;
  c.rel_tol = j.value("rel_tol", c.rel_tol);
  c.abs_tol = j.value("abs_tol", c.abs_tol);
  c.max_subdivisions = j.value("max_subdivisions", c.max_subdivisions);
  c.kink_split = j.value("kink_split", c.kink_split);
  return c;
}

}  // namespace qcoord
