#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "toric/lattice.hpp"
#include "toric/supports.hpp"

namespace toric::expsum {

using lattice::TorusPoint;

/// A system of exponential sums f_i(x) = sum_a f_ia rho_ia e^{(a-c_i) x}.
/// Coefficients are kept per equation together with a projective log-scale:
/// the true covector is coeffs[i] * exp(log_scale[i]). Evaluation and all
/// condition quantities are invariant under that factorization.
struct ExpSumSystem {
    SupportsPtr supports;
    std::vector<Eigen::VectorXcd> coeffs;
    Eigen::VectorXd log_scale;

    static ExpSumSystem create(SupportsPtr supports, std::vector<Eigen::VectorXcd> coeffs);
    int n() const { return supports->n; }
    double coeff_norm(int i) const { return coeffs[i].norm(); }
};

struct Veronese {
    Eigen::VectorXcd v;    // e^{-ell} V(z), entries bounded by max rho
    Eigen::MatrixXcd dv;   // derivative of the scaled representative, S_i x n
    double ell = 0.0;      // ell_i(z) = max_a (a - c_i) . Re z
};
Veronese veronese(const SupportTuple& supports, int i, const Eigen::VectorXcd& z);

struct EvalResult {
    Eigen::VectorXcd values;     // (f_i . V_i(z)) e^{-ell_i(z)} per equation
    Eigen::VectorXd log_scales;  // ell_i(z) + system log_scale_i
};
EvalResult evaluate(const ExpSumSystem& system, const Eigen::VectorXcd& z);

/// Scale-free residual max_i |f_i . V_i(z)| / (||f_i|| ||V_i(z)||).
double residual(const ExpSumSystem& system, const Eigen::VectorXcd& z);

Eigen::VectorXd momentum(const SupportTuple& supports, int i, const Eigen::VectorXcd& z);

struct ToricNorm {
    Eigen::VectorXd per_equation;
    double total = 0.0;
};
ToricNorm toric_norm(const SupportTuple& supports, const Eigen::VectorXcd& z,
                     const Eigen::VectorXcd& u);

/// Gram matrix of the toric metric: ||u||_z^2 = u* G(z) u.
Eigen::MatrixXcd gram(const SupportTuple& supports, const Eigen::VectorXcd& z);
/// At the origin the Gram matrix is the sum of weighted covariances (real SPD).
Eigen::MatrixXd gram0(const SupportTuple& supports);
double toric_norm0(const SupportTuple& supports, const Eigen::VectorXcd& u);

double radius_delta(const SupportTuple& supports, int i, const Eigen::VectorXcd& z);

struct Distortion {
    Eigen::VectorXd nu_i;
    double nu = 1.0;
};
Distortion distortion_nu0(const SupportTuple& supports);
/// General-x distortion nu_i(x); only nu(0) is consumed by the algorithms.
double nu_at(const SupportTuple& supports, int i, const Eigen::VectorXcd& z);

double kappa_rho(const SupportTuple& supports, int i);

/// Imbalance max_{i,a} ||f_i|| / |f_ia|; +inf marker when a coefficient is zero.
double kappa_f(const ExpSumSystem& system);

/// f . R(u): coefficientwise e^{(a-c_i) u}, with e^{-ell_i(u)} folded into log_scale.
ExpSumSystem renormalize(const ExpSumSystem& system, const Eigen::VectorXcd& u);

double multiproj_distance(const ExpSumSystem& f, const ExpSumSystem& g);

/// Toric distance at 0 between two points of M (imaginary parts wrapped).
double toric_distance(const SupportTuple& supports, const lattice::LatticeBasis& basis,
                      const Eigen::VectorXcd& x, const Eigen::VectorXcd& y);

}  // namespace toric::expsum
