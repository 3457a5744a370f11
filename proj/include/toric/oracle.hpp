#pragma once

#include <string>
#include <vector>

#include "toric/expsum.hpp"
#include "toric/newton.hpp"
#include "toric/rng.hpp"

namespace toric::oracle {

using expsum::ExpSumSystem;
using lattice::TorusPoint;

struct OracleRootSet {
    std::vector<TorusPoint> roots;
    std::vector<int> multiplicity;
    std::string method;  // "companion" | "resultant"
    std::vector<double> residuals;
    int dropped_degenerate = 0;  // leading/trailing coefficients removed
};

/// n=1: substitute w = e^{d x}, d = det Lambda, companion-matrix eigenvalues.
OracleRootSet univariate_roots(const ExpSumSystem& system);

/// n=2: Sylvester resultant elimination, companion solve, Newton polish.
OracleRootSet bivariate_roots(const ExpSumSystem& system);

/// Dispatch on dimension; OracleUnavailable for n >= 3.
OracleRootSet solve_by_oracle(const ExpSumSystem& system);

struct McReport {
    double mean = 0.0;
    double stderr_ = 0.0;
    long samples = 0;
    double bound = 0.0;
    bool pass = false;  // mean + 3 stderr <= bound
    std::vector<double> per_sample;  // optional CSV side channel
};

/// E[sum_{Z_H} ||M(q,z)^{-1}||_F^2] against (2 H sqrt(n) / det) (1/min sigma^2) n! V'.
McReport mc_moment_frobenius(const SupportsPtr& supports,
                             const std::vector<Eigen::VectorXd>& sigma,
                             const ExpSumSystem* f_bar, double H, long N, Rng& rng,
                             bool keep_samples = false);

/// E[sum_{Z_H} mu^2(g . R(z))] against the corollary bound (rho = 1, centered).
McReport mc_moment_mu(const SupportsPtr& supports, double H, long N, Rng& rng,
                      bool keep_samples = false);

struct ExclusionReport {
    McReport lambda_eps;  // P[Lambda_eps] against 1/72
    McReport y_k;         // P[Y_K] against 1/10
};
ExclusionReport mc_exclusion(const ExpSumSystem& f, long N, Rng& rng);

}  // namespace toric::oracle
