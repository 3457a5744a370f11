#pragma once

#include <vector>

#include "toric/rational.hpp"

namespace toric::intlinalg {

using MatZ = std::vector<std::vector<Int>>;

/// Row-style Hermite normal form of the row span. Returns the nonzero rows
/// (rank many), upper echelon with positive pivots and entries above each
/// pivot reduced into [0, pivot).
MatZ hnf_rows(MatZ rows);

int rank(const MatZ& rows);

/// Exact inverse of a square nonsingular integer matrix.
std::vector<std::vector<Rat>> inverse(const MatZ& m);

Int det(MatZ m);

/// gcd-normalize, first nonzero entry positive. Zero vector stays zero.
std::vector<Int> primitive(std::vector<Int> v);

/// Integer basis of the lattice {v in Z^n : M v = 0} for an r x n matrix M
/// of rank r; columns of the result span the kernel lattice (dimension n-r).
MatZ kernel_lattice(const MatZ& m);

/// Solve B c = v exactly where B is n x k with linearly independent columns;
/// returns empty if inconsistent.
std::vector<Rat> solve_columns(const MatZ& b, const std::vector<Int>& v);

}  // namespace toric::intlinalg
