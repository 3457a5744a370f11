#pragma once

#include <atomic>
#include <limits>
#include <optional>
#include <vector>

#include "toric/expsum.hpp"
#include "toric/newton.hpp"

namespace toric::tracker {

using expsum::ExpSumSystem;
using lattice::TorusPoint;

/// Segment q_t = g + t f of exponential-sum systems over a shared support.
struct LinearPath {
    ExpSumSystem g;  // offset (systems must carry log_scale 0)
    ExpSumSystem f;  // direction
    double t0 = 0.0;
    double T = 1.0;

    ExpSumSystem at(double t) const;
    const ExpSumSystem& derivative() const { return f; }
};

struct TrackerConfig {
    double alpha_star = 0.074609958;
    double step_growth = 2.0;
    double bisection_tol = 1e-3;  // relative
    int probe_points = 8;
    int max_steps = 100000;
    double H = std::numeric_limits<double>::infinity();
    int quadrature_refine = 4;
    std::atomic<long>* newton_counter = nullptr;  // shared budget, optional
    long newton_budget = -1;                      // <0: unlimited
};

struct InfinityCertificate {
    VecZ xi;                          // dominant fan ray
    std::vector<Eigen::VectorXcd> h;  // perturbation supported on the faces
    Eigen::VectorXd rel_norms;        // ||h_i|| / ||q_i||
    Eigen::VectorXd bounds;           // kappa_rho_i e^{-eta_i H / n}
};

struct MeshPoint {
    double t;
    Eigen::VectorXcd x;
    double beta;
    double mu;
};

enum class Outcome { Success, InfinityDiverged, StepStalled, BudgetExceeded };

struct PathTrace {
    std::vector<MeshPoint> mesh;
    Outcome outcome = Outcome::StepStalled;
    double stall_t = 0.0;
    std::optional<InfinityCertificate> infinity;
    Eigen::VectorXcd final_point;  // after the extra endpoint Newton step
    newton::Certificate final_certificate;
    double L_hat = 0.0, L1_hat = 0.0, L2_hat = 0.0;
    int steps() const { return static_cast<int>(mesh.size()) - 1; }
};

struct StepSearchResult {
    double t_next;
    std::optional<double> rejected_t;  // endpoint with certificate quantity >= alpha*
    bool stalled = false;
};

StepSearchResult step_search(const LinearPath& path, const Eigen::VectorXcd& x_next,
                             double t_j, const TrackerConfig& config);

PathTrace track(const LinearPath& path, const TorusPoint& x0,
                const lattice::LatticeBasis& basis, const TrackerConfig& config);

struct ConditionLength {
    double L, L1, L2;
};
ConditionLength condition_length(const PathTrace& trace, const LinearPath& path,
                                 const lattice::LatticeBasis& basis,
                                 int refine_factor = 4);

/// T = 14 kappa_f K sqrt(n) sqrt(S) mu^2 nu, with K from the start system.
double tail_threshold(const ExpSumSystem& target, const ExpSumSystem& start,
                      double mu_estimate);

std::optional<InfinityCertificate> infinity_monitor(const ExpSumSystem& system_at_t,
                                                    const Eigen::VectorXcd& z, double H);

/// H >= (n/eta) log(16 e delta^-1 d_r^2 S sqrt(max S_i)(1 + T||f|| sqrt(e)/(delta^(1/2S) sqrt(S)))).
double h_threshold(const SupportTuple& supports, double dr, double T, double delta,
                   double norm_f);
double default_exclusion_delta(double dr, int S);

}  // namespace toric::tracker
