#include "toric/solver.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "toric/errors.hpp"
#include "toric/oracle.hpp"
#include "toric/polytope.hpp"

namespace toric::solver {

namespace {

using tracker::LinearPath;
using tracker::Outcome;
using tracker::PathTrace;
using tracker::TrackerConfig;

struct LegResult {
    bool ok = false;
    std::vector<TorusPoint> roots;
    std::vector<newton::Certificate> certs;
    std::vector<PathTrace> traces;
    std::string failure;
};

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Success: return "success";
        case Outcome::InfinityDiverged: return "diverged to toric infinity";
        case Outcome::StepStalled: return "step search stalled";
        case Outcome::BudgetExceeded: return "newton budget exceeded";
    }
    return "unknown";
}

// Track every certified root of `start` along start + t * target to t = infinity
// (tail threshold + endpoint jump). Both systems carry the sqrt(S_i) scaling.
LegResult track_leg(const ExpSumSystem& start, const ExpSumSystem& target,
                    const std::vector<TorusPoint>& roots,
                    const lattice::LatticeBasis& basis, const SolveConfig& cfg,
                    std::atomic<long>* counter, long budget) {
    LegResult leg;
    double mu_est = 1.0;
    for (const auto& r : roots) {
        double m = newton::mu(expsum::renormalize(start, r.z),
                              Eigen::VectorXcd::Zero(start.n()));
        if (std::isfinite(m)) mu_est = std::max(mu_est, m);
    }
    double T = tracker::tail_threshold(target, start, mu_est);

    TrackerConfig tcfg;
    tcfg.alpha_star = cfg.alpha_star;
    tcfg.newton_counter = counter;
    tcfg.newton_budget = budget;
    try {
        double dr = polytope::dr_bound(*start.supports);
        double delta = tracker::default_exclusion_delta(dr, start.supports->S);
        double norm_f = std::sqrt(static_cast<double>(start.supports->S));
        tcfg.H = tracker::h_threshold(*start.supports, dr, T, delta, norm_f);
    } catch (const Error&) {
        tcfg.H = std::numeric_limits<double>::infinity();
    }

    LinearPath path{start, target, 0.0, T};
    leg.roots.resize(roots.size());
    leg.certs.resize(roots.size());
    leg.traces.resize(roots.size());
    std::vector<std::string> fails(roots.size());

    auto run_one = [&](size_t idx) {
        PathTrace trace;
        try {
            trace = tracker::track(path, roots[idx], basis, tcfg);
        } catch (const Error& e) {
            fails[idx] = e.what();
            return;
        }
        if (trace.outcome != Outcome::Success) {
            fails[idx] = outcome_name(trace.outcome);
            leg.traces[idx] = std::move(trace);
            return;
        }
        // Endpoint jump: past the tail threshold the target's Newton basin is
        // reached, so certify directly against the target.
        TorusPoint x{trace.final_point};
        newton::Certificate cert;
        bool certified = false;
        for (int it = 0; it < 4; ++it) {
            try {
                x = newton::newton_step(target, x, basis);
            } catch (const SingularJacobian&) {
                break;
            }
            if (counter) {
                long v = ++(*counter);
                if (budget >= 0 && v > budget) {
                    fails[idx] = "newton budget exceeded";
                    return;
                }
            }
            cert = newton::certify(target, x.z, cfg.alpha_star);
            if (cert.passed) {
                certified = true;
                break;
            }
        }
        if (!certified) {
            fails[idx] = "endpoint certificate failed";
            return;
        }
        leg.roots[idx] = x;
        leg.certs[idx] = cert;
        leg.traces[idx] = std::move(trace);
    };

    if (cfg.threads > 1 && roots.size() > 1) {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        int nthreads = std::min<int>(cfg.threads, static_cast<int>(roots.size()));
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                for (size_t i = next++; i < roots.size(); i = next++) run_one(i);
            });
        for (auto& th : pool) th.join();
    } else {
        for (size_t i = 0; i < roots.size(); ++i) run_one(i);
    }

    for (const auto& f : fails)
        if (!f.empty()) {
            leg.failure = f;
            return leg;
        }
    leg.ok = true;
    return leg;
}

bool distinct_roots(const SupportTuple& sup, const lattice::LatticeBasis& basis,
                    const std::vector<TorusPoint>& roots) {
    for (size_t a = 0; a < roots.size(); ++a)
        for (size_t b = a + 1; b < roots.size(); ++b)
            if (expsum::toric_distance(sup, basis, roots[a].z, roots[b].z) <= 1e-6)
                return false;
    return true;
}

}  // namespace

ExpSumSystem sample_gaussian(const SupportsPtr& supports, Rng& rng) {
    std::vector<Eigen::VectorXcd> coeffs(supports->n);
    for (int i = 0; i < supports->n; ++i) {
        coeffs[i].resize(supports->Si[i]);
        for (int a = 0; a < supports->Si[i]; ++a) coeffs[i](a) = rng.next_complex_gaussian();
    }
    return ExpSumSystem::create(supports, std::move(coeffs));
}

ExclusionFlags exclusion_check(const ExpSumSystem& g, const ExpSumSystem& f) {
    const SupportTuple& sup = *f.supports;
    const double eps = std::numbers::pi / (72.0 * sup.S);
    ExclusionFlags flags;
    for (int i = 0; i < sup.n; ++i) {
        for (int a = 0; a < sup.Si[i]; ++a) {
            if (f.coeffs[i](a) == std::complex<double>(0.0)) throw ZeroCoefficient(i, a);
            double arg = std::abs(std::arg(g.coeffs[i](a) / f.coeffs[i](a)));
            if (arg >= std::numbers::pi - eps) flags.in_lambda_eps = true;
        }
        double K = 1.0 + std::sqrt((std::log(static_cast<double>(sup.n)) + std::log(10.0)) /
                                   *std::min_element(sup.Si.begin(), sup.Si.end()));
        if (g.coeff_norm(i) >= K * std::sqrt(static_cast<double>(sup.Si[i])))
            flags.in_y_k = true;
    }
    return flags;
}

ExpSumSystem normalize_scaling(const ExpSumSystem& f) {
    ExpSumSystem out = f;
    out.log_scale.setZero();
    for (int i = 0; i < f.n(); ++i) {
        double norm = out.coeffs[i].norm();
        if (norm == 0.0) throw ZeroEquation(i);
        out.coeffs[i] *= std::sqrt(static_cast<double>(f.supports->Si[i])) / norm;
    }
    return out;
}

CertifiedSolutionSet cheater_solve(const ExpSumSystem& f, const ExpSumSystem& h,
                                   const std::vector<TorusPoint>& start_roots,
                                   const SolveConfig& cfg, RunStats* stats) {
    ExpSumSystem fs = normalize_scaling(f);
    ExpSumSystem hs = normalize_scaling(h);
    if (!std::isfinite(expsum::kappa_f(fs)) || !std::isfinite(expsum::kappa_f(hs)))
        throw InfiniteKappa();
    auto basis = lattice::lattice_from_supports(*f.supports);
    long expected = polytope::bkk_count(*f.supports).convert_to<long>();
    if (static_cast<long>(start_roots.size()) != expected)
        throw CertificationFailed("start set does not have the full BKK count");
    for (const auto& r : start_roots)
        if (!newton::certify(hs, r.z, cfg.alpha_star).passed)
            throw CertificationFailed("a start root fails its certificate");

    CertifiedSolutionSet result;
    result.expected_count = expected;
    Rng master(cfg.rng_seed);
    long total_steps = 0;
    long budget = cfg.n0;

    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        if (stats) stats->attempts = attempt + 1;
        std::atomic<long> counter{0};  // per-attempt budget, fresh each round
        Rng rng = master.split(static_cast<std::uint64_t>(attempt));
        ExpSumSystem g_raw = sample_gaussian(f.supports, rng);
        for (int resample = 0; resample < 100; ++resample) {
            auto flags = exclusion_check(g_raw, fs);
            if (!flags.in_lambda_eps && !flags.in_y_k) break;
            ++counter;  // a rejected draw still consumes budget
            g_raw = sample_gaussian(f.supports, rng);
        }
        ExpSumSystem gs = normalize_scaling(g_raw);

        auto leg1 = track_leg(hs, gs, start_roots, basis, cfg, &counter, budget);
        if (!leg1.ok || !distinct_roots(*f.supports, basis, leg1.roots)) {
            if (stats && !leg1.failure.empty()) stats->failures.push_back(leg1.failure);
            budget = static_cast<long>(std::ceil(budget * cfg.growth));
            total_steps += counter.load();
            continue;
        }
        auto leg2 = track_leg(gs, fs, leg1.roots, basis, cfg, &counter, budget);
        total_steps += counter.load();
        if (!leg2.ok || !distinct_roots(*f.supports, basis, leg2.roots)) {
            if (stats && !leg2.failure.empty()) stats->failures.push_back(leg2.failure);
            budget = static_cast<long>(std::ceil(budget * cfg.growth));
            continue;
        }

        result.success = true;
        for (size_t i = 0; i < leg2.roots.size(); ++i) {
            result.roots.push_back(leg2.roots[i]);
            // Re-check independently of the tracker.
            result.certificates.push_back(
                newton::certify(fs, leg2.roots[i].z, cfg.alpha_star));
        }
        if (stats) {
            stats->newton_steps = total_steps;
            for (auto& trace : leg1.traces)
                stats->path_lengths.push_back(
                    tracker::condition_length(trace, {hs, gs, 0.0, 0.0}, basis).L);
            for (auto& trace : leg2.traces)
                stats->path_lengths.push_back(
                    tracker::condition_length(trace, {gs, fs, 0.0, 0.0}, basis).L);
        }
        return result;
    }
    if (stats) stats->newton_steps = total_steps;
    return result;  // success = false
}

CertifiedSolutionSet solve_small(const ExpSumSystem& f, const SolveConfig& cfg,
                                 RunStats* stats) {
    if (f.n() > 2) throw OracleUnavailable(f.n());
    ExpSumSystem fs = normalize_scaling(f);
    if (!std::isfinite(expsum::kappa_f(fs))) throw InfiniteKappa();
    auto basis = lattice::lattice_from_supports(*f.supports);
    long expected = polytope::bkk_count(*f.supports).convert_to<long>();

    CertifiedSolutionSet result;
    result.expected_count = expected;
    Rng master(cfg.rng_seed);
    long total_steps = 0;
    long budget = cfg.n0;

    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        if (stats) stats->attempts = attempt + 1;
        std::atomic<long> counter{0};
        Rng rng = master.split(0xabcd + static_cast<std::uint64_t>(attempt));
        ExpSumSystem g_raw = sample_gaussian(f.supports, rng);
        for (int resample = 0; resample < 100; ++resample) {
            auto flags = exclusion_check(g_raw, fs);
            if (!flags.in_lambda_eps && !flags.in_y_k) break;
            g_raw = sample_gaussian(f.supports, rng);
        }
        ExpSumSystem gs = normalize_scaling(g_raw);

        oracle::OracleRootSet oracle_roots;
        try {
            oracle_roots = oracle::solve_by_oracle(gs);
        } catch (const ResultantDegenerate&) {
            continue;
        }
        if (static_cast<long>(oracle_roots.roots.size()) != expected) continue;
        bool all_certified = true;
        for (const auto& r : oracle_roots.roots)
            if (!newton::certify(gs, r.z, cfg.alpha_star).passed) {
                all_certified = false;
                break;
            }
        if (!all_certified) continue;

        auto leg = track_leg(gs, fs, oracle_roots.roots, basis, cfg, &counter, budget);
        total_steps += counter.load();
        if (!leg.ok || !distinct_roots(*f.supports, basis, leg.roots)) {
            if (stats && !leg.failure.empty()) stats->failures.push_back(leg.failure);
            budget = static_cast<long>(std::ceil(budget * cfg.growth));
            continue;
        }
        result.success = true;
        for (size_t i = 0; i < leg.roots.size(); ++i) {
            result.roots.push_back(leg.roots[i]);
            result.certificates.push_back(
                newton::certify(fs, leg.roots[i].z, cfg.alpha_star));
        }
        if (stats) {
            stats->newton_steps = total_steps;
            for (auto& trace : leg.traces)
                stats->path_lengths.push_back(
                    tracker::condition_length(trace, {gs, fs, 0.0, 0.0}, basis).L);
        }
        return result;
    }
    if (stats) stats->newton_steps = total_steps;
    return result;
}

std::optional<std::pair<TorusPoint, newton::Certificate>> one_root_solve(
    const ExpSumSystem& f, const ExpSumSystem& g, const TorusPoint& x0,
    const SolveConfig& cfg, RunStats* stats) {
    ExpSumSystem fs = normalize_scaling(f);
    ExpSumSystem gs = normalize_scaling(g);
    auto basis = lattice::lattice_from_supports(*f.supports);
    if (!newton::certify(gs, x0.z, cfg.alpha_star).passed)
        throw CertificationFailed("start root fails its certificate");
    std::atomic<long> counter{0};
    long budget = cfg.n0;
    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        if (stats) stats->attempts = attempt + 1;
        auto leg = track_leg(gs, fs, {x0}, basis, cfg, &counter, budget);
        if (leg.ok) {
            if (stats) stats->newton_steps = counter.load();
            return std::make_pair(leg.roots[0], leg.certs[0]);
        }
        if (stats && !leg.failure.empty()) stats->failures.push_back(leg.failure);
        budget = static_cast<long>(std::ceil(budget * cfg.growth));
        counter = 0;
    }
    if (stats) stats->newton_steps = counter.load();
    return std::nullopt;
}

}  // namespace toric::solver
