#ifndef QCOORD_INCLUSIONS_HPP
#define QCOORD_INCLUSIONS_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qcoord/classes.hpp"
#include "qcoord/classifiers.hpp"
#include "qcoord/domain.hpp"
#include "qcoord/expr.hpp"
#include "qcoord/families.hpp"

namespace qcoord {

inline constexpr int kCatalogVersion = 1;

struct GalleryEntry {
  std::string name;
  std::string expr_text;
  Domain domain = Box2{Interval(0, 1), Interval(0, 1)};
  std::vector<ClassId> claimed_in;
  std::vector<ClassId> claimed_not_in;
  std::uint64_t seed = 0;
  /// Grid side (and slice count for Coord* classes) the claims are pinned to.
  int resolution = 17;
  std::string notes;

  Expr expr() const;
  SearchBudget budget() const;
};

struct Gallery {
  int version = kCatalogVersion;
  std::vector<GalleryEntry> entries;

  const GalleryEntry* find(std::string_view name) const;
};

/// Malformed catalog text; `line` is 1-based.
class CatalogError : public std::runtime_error {
 public:
  CatalogError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Reads the plain-text catalog. Each entry is one line of `key=value`
/// fields separated by `|`; see README for the format.
Gallery parse_gallery(std::istream& in);
Gallery load_gallery(const std::string& path);
std::string format_gallery(const Gallery& g);
std::string format_domain(const Domain& d);
/// "a,b" or "a,b,c,d"; throws std::invalid_argument.
Domain parse_domain(std::string_view text);

/// Empty when consistent; otherwise the offending (in, not_in) pair, e.g.
/// claimed in C2 but not in its superclass J2.
std::vector<std::pair<ClassId, ClassId>> chain_conflicts(const GalleryEntry& e);

struct ClaimResult {
  std::string entry;
  ClassId cls = ClassId::C2;
  bool claimed_member = true;
  Verdict verdict;
  bool ok = false;
  std::string message;
};

/// An entry claimed in `in` but not in its superclass `not_in`.
struct ChainConflict {
  std::string entry;
  ClassId in;
  ClassId not_in;
};

struct GalleryReport {
  std::vector<ClaimResult> results;
  std::vector<ChainConflict> conflicts;

  bool ok() const;
};

/// Re-runs every claim of every entry at its pinned seed and resolution. A
/// membership claim needs NoViolationFound; a non-membership claim needs a
/// sound witness.
GalleryReport validate_gallery(const Gallery& g);

class GalleryDrift : public std::runtime_error {
 public:
  GalleryDrift(std::string entry, ClassId cls, const std::string& what)
      : std::runtime_error(what), entry_(std::move(entry)), cls_(cls) {}
  const std::string& entry() const { return entry_; }
  ClassId cls() const { return cls_; }

 private:
  std::string entry_;
  ClassId cls_;
};

/// Throws GalleryDrift for the first failed claim.
void require_no_drift(const GalleryReport& report);

struct SearchConfig {
  ClassId target_in = ClassId::QC2;
  ClassId target_not_in = ClassId::C2;
  FunctionFamily family = PiecewiseLinear{};
  int trials = 100;
  std::uint64_t seed = 0;
  Domain domain = Box2{Interval(-1, 1), Interval(-1, 1)};
  SearchBudget budget;
};

struct Found {
  int trial = 0;
  std::string expr_text;
  NoViolationFound verdict_in;
  Witness witness_not_in;
};

struct Exhausted {
  int trials = 0;
};

using SearchResult = std::variant<Found, Exhausted>;

/// Throws std::invalid_argument unless target_not_in is a proper subclass of
/// target_in (a function in QC2 but not in C2, say) and both fit the domain.
void validate_search(const SearchConfig& cfg);

/// Samples members of the family in trial order and returns the first that
/// shows no violation of target_in and violates target_not_in. Each trial
/// runs the target_not_in check first since a witness there is the rarer
/// event for most pairs.
SearchResult search_separation(const SearchConfig& cfg);

}  // namespace qcoord

#endif  // QCOORD_INCLUSIONS_HPP
