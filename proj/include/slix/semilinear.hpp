#ifndef SLIX_SEMILINEAR_HPP
#define SLIX_SEMILINEAR_HPP

#include <optional>
#include <string>
#include <vector>

#include "slix/formula.hpp"
#include "slix/qe.hpp"

namespace slix {

// b + <P>: all b + sum lambda_j p_j with lambda in N.
struct LinearSet {
  Vec base;
  std::vector<Vec> periods;

  bool operator==(const LinearSet& o) const {
    return base == o.base && periods == o.periods;
  }
};

// Finite union of linear sets of equal dimension. An empty component list
// denotes the empty set.
struct SemilinearRep {
  Coords coords;
  std::vector<LinearSet> components;

  std::size_t dim() const { return coords.dim(); }

  static SemilinearRep empty(Coords c) { return SemilinearRep{std::move(c), {}}; }
  static SemilinearRep from_points(Coords c, const std::vector<Vec>& pts);
  static SemilinearRep single(Coords c, LinearSet ls) {
    return SemilinearRep{std::move(c), {std::move(ls)}};
  }

  bool operator==(const SemilinearRep& o) const {
    return coords == o.coords && components == o.components;
  }
};

// Formula over coordinate variables 0..k-1 that holds exactly on <R>.
// Helper variables for the period multiplicities are drawn from gen.
Formula semilinear_to_formula(const SemilinearRep& r, VarGen& gen);
Formula semilinear_to_formula(const SemilinearRep& r);

// Exact membership test by bounded search over period multiplicities.
bool member(const SemilinearRep& r, const Vec& v);

// All points v <= box (componentwise) satisfying f; f's free variables must
// be coordinates 0..k-1. Exhaustive evaluation, so the grid size is guarded.
std::vector<Vec> sample_solutions(const Formula& f, std::size_t k, const Vec& box,
                                  long long max_cells = 2000000,
                                  const QeBudget& budget = {});

// Deterministic normal form: sorted deduplicated periods and components,
// zero periods removed, subsumed components dropped.
SemilinearRep canonicalized(const SemilinearRep& r);

// Total order on canonicalized reps: encoding size, then lexicographic.
bool rep_less(const SemilinearRep& a, const SemilinearRep& b);
Int rep_encoding_size(const SemilinearRep& r);

std::string rep_to_string(const SemilinearRep& r);
SemilinearRep parse_rep(const std::string& text);

bool vec_less(const Vec& a, const Vec& b);

}  // namespace slix

#endif
