#pragma once

#include <optional>
#include <vector>

#include "toric/intlinalg.hpp"
#include "toric/rational.hpp"
#include "toric/supports.hpp"

namespace toric::polytope {

/// A 1-cone of the fan, stored by its primitive integer representative.
struct Ray {
    VecZ xi;
    Int norm_sq;
};

/// Indices of the extreme points of conv(pts).
std::vector<int> hull_vertices(const std::vector<VecZ>& pts);

struct SupportValue {
    Int lambda;
    std::vector<int> face;  // indices of the argmax set A^xi
};
SupportValue support_value(const std::vector<VecZ>& pts, const VecZ& xi);

/// Rays of the fan of the tuple: facet normals of conv(A_1)+...+conv(A_n).
std::vector<Ray> fan_rays(const SupportTuple& supports);
std::vector<Ray> fan_rays_of_sets(const std::vector<std::vector<VecZ>>& sets, int dim);

struct FacetGapRow {
    Ray ray;
    std::vector<double> eta_i;  // per support; +inf when A_i = A_i^xi (lenient mode)
};
struct FacetGap {
    std::vector<FacetGapRow> per_ray;
    std::vector<double> eta_i;  // min over rays, per support
    double eta = 0.0;
};
FacetGap facet_gap(const SupportTuple& supports);
/// Same, but empty-complement (i, xi) pairs contribute +inf instead of erroring.
FacetGap facet_gap_lenient(const SupportTuple& supports);

bool strongly_mixed(const SupportTuple& supports);

/// n! V(conv A_1, ..., conv A_n), exact.
Int mixed_volume(const SupportTuple& supports);
/// d! V of d point sets in Z^d (general entry used by property tests).
Int mixed_volume_sets(const std::vector<std::vector<VecZ>>& sets, int dim);

/// V' = sum_i V(A_1, ..., B^n at slot i, ..., A_n).
double mixed_area(const SupportTuple& supports);

/// Coefficients v_0..v_n of v(t) = sum v_k t^k / k!, normalized so v_0 = V'.
std::vector<double> v_coefficients(const SupportTuple& supports);

double dr_bound(const SupportTuple& supports);

Int bkk_count(const SupportTuple& supports);

double q_invariant(const SupportTuple& supports, const Eigen::VectorXd& deltas);

struct InvariantReport {
    Int nV;
    Int detLambda;
    Int bkk;
    double mixed_area = 0.0;
    std::vector<FacetGapRow> eta_per_ray;
    std::optional<std::vector<double>> eta_i;
    std::optional<double> eta;
    bool strongly_mixed = false;
    double dr = 0.0;
    std::optional<double> Q;
    Eigen::VectorXd deltas;
    std::vector<double> v;
    int ray_count = 0;
};
InvariantReport compute_invariants(const SupportTuple& supports);

}  // namespace toric::polytope
