#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toric/newton.hpp"
#include "toric/rng.hpp"
#include "toric/tracker.hpp"

namespace toric::solver {

using expsum::ExpSumSystem;
using lattice::TorusPoint;

struct CertifiedSolutionSet {
    std::vector<TorusPoint> roots;
    std::vector<newton::Certificate> certificates;
    long expected_count = 0;
    bool success = false;
};

struct SolveConfig {
    std::uint64_t rng_seed = 0;
    long n0 = 256;              // initial Newton budget
    double growth = std::numbers::sqrt2;
    double alpha_star = 0.074609958;
    int max_attempts = 64;
    int threads = 1;
};

struct RunStats {
    long newton_steps = 0;
    int attempts = 0;
    std::vector<double> path_lengths;  // L_hat per successful path
    std::vector<std::string> failures;
};

/// iid standard complex Gaussian coefficients (E|g_ia|^2 = 1).
ExpSumSystem sample_gaussian(const SupportsPtr& supports, Rng& rng);

struct ExclusionFlags {
    bool in_lambda_eps = false;
    bool in_y_k = false;
};
ExclusionFlags exclusion_check(const ExpSumSystem& g, const ExpSumSystem& f);

/// Rescale each equation to ||f_i|| = sqrt(S_i) (log_scale reset to zero).
ExpSumSystem normalize_scaling(const ExpSumSystem& f);

/// Randomized homotopy between systems sharing a support: h -> g -> f with the
/// sqrt(2)-doubling Newton budget; fresh g on every attempt.
CertifiedSolutionSet cheater_solve(const ExpSumSystem& f, const ExpSumSystem& h,
                                   const std::vector<TorusPoint>& start_roots,
                                   const SolveConfig& config, RunStats* stats = nullptr);

/// Oracle-started solve for n <= 2: sample g, solve it exactly, track g -> f.
CertifiedSolutionSet solve_small(const ExpSumSystem& f, const SolveConfig& config,
                                 RunStats* stats = nullptr);

/// Track a single certified start root of g to a root of f.
std::optional<std::pair<TorusPoint, newton::Certificate>> one_root_solve(
    const ExpSumSystem& f, const ExpSumSystem& g, const TorusPoint& x0,
    const SolveConfig& config, RunStats* stats = nullptr);

}  // namespace toric::solver
