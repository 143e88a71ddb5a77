#ifndef SLIX_AFFINE_HPP
#define SLIX_AFFINE_HPP

#include "slix/semilinear.hpp"

namespace slix {

// Solved system B x = c over the rationals with B in reduced row echelon
// form; its solution set is the affine hull of whatever it was computed from.
struct AffineSystem {
  Coords coords;
  std::vector<std::vector<Rat>> rows;  // B, row-reduced, rows independent
  std::vector<Rat> rhs;                // c

  std::size_t dim() const { return coords.dim(); }
  bool operator==(const AffineSystem& o) const {
    return coords == o.coords && rows == o.rows && rhs == o.rhs;
  }
};

// aff(<R>) as a solved system; R must be nonempty.
AffineSystem affine_hull(const SemilinearRep& r);

bool satisfies(const AffineSystem& sys, const Vec& v);

std::string affine_to_string(const AffineSystem& sys);

// Reduced row echelon form, in place; returns the rank. Rows beyond the rank
// are zeroed. Deterministic pivot choice (leftmost column, first row).
std::size_t rref(std::vector<std::vector<Rat>>& m);

}  // namespace slix

#endif
