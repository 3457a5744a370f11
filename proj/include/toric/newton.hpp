#pragma once

#include <Eigen/Dense>

#include "toric/expsum.hpp"
#include "toric/lattice.hpp"

namespace toric::newton {

using expsum::ExpSumSystem;
using lattice::TorusPoint;

/// Constants of the alpha-theory step machinery. Values are the published
/// ones; the derived entries are recomputed from their defining equations
/// in the test suite.
struct SmaleConstants {
    double alpha0;          // (13 - 3 sqrt(17)) / 4
    double alpha_star;      // 0.074609958
    double alpha_starstar;  // 0.096917682
    double delta_star;      // 0.085180825
    double u_star;          // 0.129283177
    double u_starstar;      // 0.007556641
    double u_starstarstar;  // 0.059668617
    double theta0;          // 13.977369
    double k1;              // 6.988684
    double k2;              // 2.901827
    double k3;              // 0.903836
};
const SmaleConstants& constants();

struct Certificate {
    double beta = 0.0;
    double mu = 0.0;
    double nu = 0.0;
    double alpha_hat = 0.0;  // beta * mu * nu / 2
    bool passed = false;
    double target_alpha = 0.0;
};

/// M(f, x): rows (1/||V_i||) f_i (DV_i - V_i m_i(x)), on scaled representatives.
Eigen::MatrixXcd jacobian_M(const ExpSumSystem& system, const Eigen::VectorXcd& z);

/// Toric condition number ||M^{-1} diag ||f_i|| ||_z; +inf marker on singular M.
double mu(const ExpSumSystem& system, const Eigen::VectorXcd& z);

/// ||M(f,z)^{-1}||_F (raw, non-renormalized); +inf on singular M.
double inverse_frobenius(const ExpSumSystem& system, const Eigen::VectorXcd& z);

/// One renormalized Newton step x - (f . DV(x))^{-1} (f . V(x)), canonicalized.
TorusPoint newton_step(const ExpSumSystem& system, const TorusPoint& x,
                       const lattice::LatticeBasis& basis);

/// Raw Newton displacement (before canonicalization).
Eigen::VectorXcd newton_displacement(const ExpSumSystem& system, const Eigen::VectorXcd& x);

/// beta(f . R(x), 0): toric-0 norm of the Newton displacement.
double beta(const ExpSumSystem& system, const Eigen::VectorXcd& x);

/// Computable stand-in for gamma: mu(f . R(x), 0) nu / 2.
double gamma_bound(const ExpSumSystem& system, const Eigen::VectorXcd& x);

Certificate certify(const ExpSumSystem& system, const Eigen::VectorXcd& x,
                    double target_alpha);

TorusPoint refine(const ExpSumSystem& system, const TorusPoint& x,
                  const lattice::LatticeBasis& basis, double tol, int max_iter = 60);

struct SmaleRadii {
    double r0, r1;
};
SmaleRadii smale_radii(double alpha);

}  // namespace toric::newton
