#pragma once

#include <Eigen/Dense>

#include <vector>

#include "toric/intlinalg.hpp"
#include "toric/rational.hpp"
#include "toric/supports.hpp"

namespace toric::lattice {

/// Basis of the lattice spanned by the support differences, in row HNF.
struct LatticeBasis {
    int rank = 0;
    intlinalg::MatZ rows;  // n x n, upper triangular, positive pivots
};

/// Columns form a basis of the dual lattice (exact rationals).
struct DualBasis {
    std::vector<std::vector<Rat>> cols;  // cols[i][j] = entry (i,j), columns are basis vectors
};

/// A point of M = C^n mod 2 pi sqrt(-1) Lambda^*, stored as its canonical
/// representative (imaginary part in the lower-closed fundamental domain).
struct TorusPoint {
    Eigen::VectorXcd z;
};

LatticeBasis lattice_from_supports(const SupportTuple& supports);
LatticeBasis lattice_from_rows(intlinalg::MatZ rows, int n);

Int lattice_det(const LatticeBasis& basis);

DualBasis dual_basis(const LatticeBasis& basis);

TorusPoint canonicalize_point(const Eigen::VectorXcd& z, const LatticeBasis& basis);

/// Difference x - y with the imaginary part wrapped to the nearest dual-lattice
/// translate, for distance computations in M.
Eigen::VectorXcd wrapped_difference(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y,
                                    const LatticeBasis& basis);

}  // namespace toric::lattice
