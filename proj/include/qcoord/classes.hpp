#ifndef QCOORD_CLASSES_HPP
#define QCOORD_CLASSES_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace qcoord {

/// Every function class the toolkit can test.
///
/// Suffix 1 classes live on an interval, suffix 2 classes on a rectangle
/// (global definitions), and Coord* classes ask that every partial mapping
/// belong to the corresponding suffix-1 class. W2Ordered is the rectangle
/// Wright class restricted to componentwise ordered point pairs.
enum class ClassId {
  C1, J1, W1, QC1, JQC1, WQC1,
  C2, J2, W2, W2Ordered, QC2, JQC2, WQC2,
  CoordC2, CoordJ2, CoordW2, CoordQC2, CoordJQC2, CoordWQC2,
};

enum class Family { Convex, Jensen, Wright, Quasi, JensenQuasi, WrightQuasi };
enum class Scope { Line, Plane, Coordinates };

std::span<const ClassId> all_classes();

std::string_view to_string(ClassId id);
std::optional<ClassId> class_from_string(std::string_view name);

Family family_of(ClassId id);
Scope scope_of(ClassId id);

/// Arity of the functions the class is defined for.
inline int arity_of(ClassId id) { return scope_of(id) == Scope::Line ? 1 : 2; }

/// The interval class checked on each slice of a Coord* class.
ClassId slice_class(ClassId coordinate_class);
/// The rectangle class whose partial mappings fall in `line_class`.
ClassId global_class(ClassId line_class);
/// The Coord* class built from `line_class`.
ClassId coordinate_class(ClassId line_class);

/// Whether membership in `sub` implies membership in `super` by the
/// inclusion relations between the classes (reflexive, transitive).
bool is_subclass(ClassId sub, ClassId super);

}  // namespace qcoord

#endif  // QCOORD_CLASSES_HPP
