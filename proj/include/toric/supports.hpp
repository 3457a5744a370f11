#pragma once

#include <Eigen/Dense>

#include <memory>
#include <vector>

#include "toric/errors.hpp"
#include "toric/rational.hpp"

namespace toric {

/// Weighted integer supports A_1..A_n with the momentum-centering shift
/// c_i = sum(rho^2 a)/sum(rho^2) applied, so that m_i(0) = 0.
///
/// Raw integer exponents are kept for all exact lattice/polytope work;
/// the shifted (centered) points back every analytic computation.
struct SupportTuple {
    int n = 0;
    std::vector<std::vector<VecZ>> points;        // raw exponents, per equation
    std::vector<std::vector<double>> rho;         // positive weights
    std::vector<std::vector<Rat>> center;         // exact centering shift c_i
    std::vector<Eigen::MatrixXd> shifted;         // rows: a - c_i
    std::vector<int> Si;
    int S = 0;

    static SupportTuple create(int n, std::vector<std::vector<VecZ>> pts,
                               std::vector<std::vector<double>> weights = {});

    int size(int i) const { return Si[i]; }

    /// Shifted point a - c_i as a dense row.
    Eigen::RowVectorXd shifted_point(int i, int a) const { return shifted[i].row(a); }

    /// delta_i(0): radius of the centered support.
    double delta0(int i) const;
    Eigen::VectorXd deltas0() const;

    /// max_a ||a - a'|| over the raw support (diameter of conv A_i).
    double diameter(int i) const;
};

using SupportsPtr = std::shared_ptr<const SupportTuple>;

SupportsPtr make_supports(int n, std::vector<std::vector<VecZ>> pts,
                          std::vector<std::vector<double>> weights = {});

}  // namespace toric
