#include "qcoord/classes.hpp"

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qcoord {

namespace {

struct ClassInfo {
  ClassId id;
  std::string_view name;
  Family family;
  Scope scope;
};

constexpr std::array<ClassInfo, 19> kClasses{{
    {ClassId::C1, "C1", Family::Convex, Scope::Line},
    {ClassId::J1, "J1", Family::Jensen, Scope::Line},
    {ClassId::W1, "W1", Family::Wright, Scope::Line},
    {ClassId::QC1, "QC1", Family::Quasi, Scope::Line},
    {ClassId::JQC1, "JQC1", Family::JensenQuasi, Scope::Line},
    {ClassId::WQC1, "WQC1", Family::WrightQuasi, Scope::Line},
    {ClassId::C2, "C2", Family::Convex, Scope::Plane},
    {ClassId::J2, "J2", Family::Jensen, Scope::Plane},
    {ClassId::W2, "W2", Family::Wright, Scope::Plane},
    {ClassId::W2Ordered, "W2-ordered", Family::Wright, Scope::Plane},
    {ClassId::QC2, "QC2", Family::Quasi, Scope::Plane},
    {ClassId::JQC2, "JQC2", Family::JensenQuasi, Scope::Plane},
    {ClassId::WQC2, "WQC2", Family::WrightQuasi, Scope::Plane},
    {ClassId::CoordC2, "CoordC2", Family::Convex, Scope::Coordinates},
    {ClassId::CoordJ2, "CoordJ2", Family::Jensen, Scope::Coordinates},
    {ClassId::CoordW2, "CoordW2", Family::Wright, Scope::Coordinates},
    {ClassId::CoordQC2, "CoordQC2", Family::Quasi, Scope::Coordinates},
    {ClassId::CoordJQC2, "CoordJQC2", Family::JensenQuasi, Scope::Coordinates},
    {ClassId::CoordWQC2, "CoordWQC2", Family::WrightQuasi, Scope::Coordinates},
}};

constexpr std::array<ClassId, 19> kIds = [] {
  std::array<ClassId, 19> ids{};
  for (std::size_t i = 0; i < kClasses.size(); ++i) ids[i] = kClasses[i].id;
  return ids;
}();

const ClassInfo& info(ClassId id) {
  const auto& c = kClasses[static_cast<std::size_t>(id)];
  if (c.id != id) throw std::logic_error("class table out of order");
  return c;
}

ClassId find(Family f, Scope s) {
  for (const auto& c : kClasses) {
    if (c.family == f && c.scope == s && c.id != ClassId::W2Ordered) return c.id;
  }
  throw std::logic_error("no such class");
}

// Direct inclusions sub -> super. Within each scope: convex functions are
// Jensen, Wright and quasi-convex; quasi-convex is Wright-quasi-convex is
// Jensen-quasi-convex; Jensen is Jensen-quasi; Wright is Wright-quasi.
// Rectangle convexity does not imply the rectangle Wright condition, so that
// edge exists only on the interval (and hence slice-wise).
std::vector<std::pair<ClassId, ClassId>> direct_edges() {
  std::vector<std::pair<ClassId, ClassId>> edges;
  const auto per_scope = [&](Scope s, bool convex_is_wright) {
    auto id = [&](Family f) { return find(f, s); };
    edges.emplace_back(id(Family::Convex), id(Family::Jensen));
    edges.emplace_back(id(Family::Convex), id(Family::Quasi));
    if (convex_is_wright) edges.emplace_back(id(Family::Convex), id(Family::Wright));
    edges.emplace_back(id(Family::Jensen), id(Family::JensenQuasi));
    edges.emplace_back(id(Family::Wright), id(Family::WrightQuasi));
    edges.emplace_back(id(Family::Quasi), id(Family::WrightQuasi));
    edges.emplace_back(id(Family::WrightQuasi), id(Family::JensenQuasi));
  };
  per_scope(Scope::Line, true);
  per_scope(Scope::Plane, false);
  per_scope(Scope::Coordinates, true);
  // A global property restricted to a slice gives the slice property.
  for (Family f : {Family::Convex, Family::Jensen, Family::Wright, Family::Quasi,
                   Family::JensenQuasi, Family::WrightQuasi}) {
    edges.emplace_back(find(f, Scope::Plane), find(f, Scope::Coordinates));
  }
  edges.emplace_back(ClassId::W2, ClassId::W2Ordered);
  edges.emplace_back(ClassId::W2Ordered, ClassId::CoordW2);
  return edges;
}

}  // namespace

std::span<const ClassId> all_classes() { return kIds; }

std::string_view to_string(ClassId id) { return info(id).name; }

std::optional<ClassId> class_from_string(std::string_view name) {
  for (const auto& c : kClasses) {
    if (c.name == name) return c.id;
  }
  return std::nullopt;
}

Family family_of(ClassId id) { return info(id).family; }
Scope scope_of(ClassId id) { return info(id).scope; }

ClassId slice_class(ClassId id) {
  if (scope_of(id) != Scope::Coordinates) {
    throw std::invalid_argument(std::string(to_string(id)) + " is not a co-ordinate class");
  }
  return find(family_of(id), Scope::Line);
}

ClassId global_class(ClassId id) {
  if (scope_of(id) != Scope::Line) {
    throw std::invalid_argument(std::string(to_string(id)) + " is not an interval class");
  }
  return find(family_of(id), Scope::Plane);
}

ClassId coordinate_class(ClassId id) {
  if (scope_of(id) != Scope::Line) {
    throw std::invalid_argument(std::string(to_string(id)) + " is not an interval class");
  }
  return find(family_of(id), Scope::Coordinates);
}

bool is_subclass(ClassId sub, ClassId super) {
  static const auto edges = direct_edges();
  std::array<bool, kClasses.size()> seen{};
  std::vector<ClassId> stack{sub};
  while (!stack.empty()) {
    const ClassId c = stack.back();
    stack.pop_back();
    if (c == super) return true;
    auto& s = seen[static_cast<std::size_t>(c)];
    if (s) continue;
    s = true;
    for (const auto& [from, to] : edges) {
      if (from == c) stack.push_back(to);
    }
  }
  return false;
}

}  // namespace qcoord
