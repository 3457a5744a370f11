#include "toric/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "toric/errors.hpp"
#include "toric/polytope.hpp"

namespace toric::tracker {

namespace {

constexpr double kStallRel = 1e-14;

double cert_quantity(const LinearPath& path, double t, const Eigen::VectorXcd& x,
                     const TrackerConfig& cfg) {
    return newton::certify(path.at(t), x, cfg.alpha_star).alpha_hat;
}

bool count_newton(const TrackerConfig& cfg) {
    if (!cfg.newton_counter) return true;
    long v = ++(*cfg.newton_counter);
    return cfg.newton_budget < 0 || v <= cfg.newton_budget;
}

}  // namespace

ExpSumSystem LinearPath::at(double t) const {
    ExpSumSystem q = g;
    for (int i = 0; i < q.n(); ++i) q.coeffs[i] += t * f.coeffs[i];
    return q;
}

StepSearchResult step_search(const LinearPath& path, const Eigen::VectorXcd& x_next,
                             double t_j, const TrackerConfig& cfg) {
    const double alpha = cfg.alpha_star;
    auto quantity = [&](double t) { return cert_quantity(path, t, x_next, cfg); };

    // pass(t): quantity below alpha* at t and on the probe grid in (t_j, t).
    auto pass = [&](double t, double* fail_at) {
        for (int k = 1; k <= cfg.probe_points; ++k) {
            double tp = t_j + (t - t_j) * k / cfg.probe_points;
            if (!(quantity(tp) < alpha)) {
                if (fail_at) *fail_at = tp;
                return false;
            }
        }
        return true;
    };

    StepSearchResult out{t_j, std::nullopt, false};
    double step = std::max(1e-3 * (1.0 + std::abs(t_j)), 1e-12);
    double lo = t_j, hi = t_j + step;
    double fail_at = 0.0;
    // Geometric growth until a failure or the endpoint.
    while (hi < path.T) {
        if (!(quantity(hi) < alpha)) {
            fail_at = hi;
            break;
        }
        lo = hi;
        step *= cfg.step_growth;
        hi = t_j + step;
    }
    if (hi >= path.T) {
        if (quantity(path.T) < alpha && pass(path.T, nullptr)) {
            out.t_next = path.T;
            return out;
        }
        hi = path.T;
        if (!(quantity(hi) < alpha))
            fail_at = hi;
        else
            pass(hi, &fail_at);
    }
    // Bisection on [lo, fail_at-ish hi], keeping quantity(lo) < alpha.
    hi = fail_at;
    while (hi - lo > cfg.bisection_tol * std::max(1.0, std::abs(lo))) {
        double mid = 0.5 * (lo + hi);
        if (quantity(mid) < alpha)
            lo = mid;
        else
            hi = mid;
    }
    // Final probe-grid verification; shrink onto the first failing probe.
    for (int guard = 0; guard < 8 && lo > t_j; ++guard) {
        double probe_fail = 0.0;
        if (pass(lo, &probe_fail)) break;
        hi = probe_fail;
        double new_lo = t_j;
        double span = hi - t_j;
        for (int k = cfg.probe_points; k >= 1; --k) {
            double tp = t_j + span * k / cfg.probe_points;
            if (tp < hi && quantity(tp) < alpha) {
                new_lo = tp;
                break;
            }
        }
        lo = new_lo;
        while (hi - lo > cfg.bisection_tol * std::max(1.0, std::abs(lo))) {
            double mid = 0.5 * (lo + hi);
            if (quantity(mid) < alpha)
                lo = mid;
            else
                hi = mid;
        }
    }
    out.t_next = lo;
    out.rejected_t = hi;
    if (lo - t_j <= kStallRel * std::max(1.0, std::abs(t_j))) out.stalled = true;
    return out;
}

PathTrace track(const LinearPath& path, const TorusPoint& x0,
                const lattice::LatticeBasis& basis, const TrackerConfig& cfg) {
    PathTrace trace;
    auto start_cert = newton::certify(path.at(path.t0), x0.z, cfg.alpha_star);
    if (!start_cert.passed)
        throw CertificationFailed("start point is not a certified approximate root");
    trace.mesh.push_back({path.t0, x0.z, start_cert.beta, start_cert.mu});

    double t = path.t0;
    TorusPoint x = x0;
    while (true) {
        if (x.z.real().lpNorm<Eigen::Infinity>() >= cfg.H) {
            trace.outcome = Outcome::InfinityDiverged;
            trace.infinity = infinity_monitor(path.at(t), x.z, cfg.H);
            trace.stall_t = t;
            return trace;
        }
        TorusPoint x_next;
        try {
            x_next = newton::newton_step(path.at(t), x, basis);
        } catch (const SingularJacobian&) {
            trace.outcome = Outcome::StepStalled;
            trace.stall_t = t;
            return trace;
        }
        if (!count_newton(cfg)) {
            trace.outcome = Outcome::BudgetExceeded;
            trace.stall_t = t;
            return trace;
        }
        auto sr = step_search(path, x_next.z, t, cfg);
        if (sr.stalled) {
            trace.outcome = Outcome::StepStalled;
            trace.stall_t = t;
            return trace;
        }
        t = sr.t_next;
        x = x_next;
        auto cert = newton::certify(path.at(t), x.z, cfg.alpha_star);
        trace.mesh.push_back({t, x.z, cert.beta, cert.mu});
        if (t >= path.T) break;
        if (static_cast<int>(trace.mesh.size()) > cfg.max_steps) {
            trace.outcome = Outcome::BudgetExceeded;
            trace.stall_t = t;
            return trace;
        }
    }
    // One extra Newton step at the endpoint recovers a certified root of q_T.
    ExpSumSystem target = path.at(path.T);
    TorusPoint x_final = x;
    for (int attempt = 0; attempt < 4; ++attempt) {
        try {
            x_final = newton::newton_step(target, x_final, basis);
        } catch (const SingularJacobian&) {
            trace.outcome = Outcome::StepStalled;
            trace.stall_t = path.T;
            return trace;
        }
        if (!count_newton(cfg)) {
            trace.outcome = Outcome::BudgetExceeded;
            trace.stall_t = path.T;
            return trace;
        }
        trace.final_certificate = newton::certify(target, x_final.z, cfg.alpha_star);
        if (trace.final_certificate.passed) break;
    }
    if (!trace.final_certificate.passed) {
        trace.outcome = Outcome::StepStalled;
        trace.stall_t = path.T;
        return trace;
    }
    trace.final_point = x_final.z;
    trace.outcome = Outcome::Success;
    return trace;
}

namespace {

// Fubini-Study norm of a tangent covector r at p, per equation.
double fs_norm(const Eigen::VectorXcd& p, const Eigen::VectorXcd& r) {
    double pn = p.norm();
    Eigen::VectorXcd proj = r - p * (p.dot(r) / (pn * pn));
    return proj.norm() / pn;
}

struct Integrand {
    double full, l1, l2;
};

Integrand integrand_at(const LinearPath& path, double tau, const Eigen::VectorXcd& z,
                       double nu) {
    const ExpSumSystem q = path.at(tau);
    const SupportTuple& sup = *q.supports;
    const int n = sup.n;

    // z-dot by the implicit function formula: M z-dot = -(q-dot . V / ||V||).
    Eigen::MatrixXcd m(n, n);
    Eigen::VectorXcd rhs(n);
    std::vector<expsum::Veronese> vers(n);
    for (int i = 0; i < n; ++i) {
        vers[i] = expsum::veronese(sup, i, z);
        Eigen::VectorXd mom = expsum::momentum(sup, i, z);
        Eigen::MatrixXcd w = vers[i].dv;
        w.noalias() -= vers[i].v * mom.transpose().cast<std::complex<double>>();
        m.row(i) = q.coeffs[i].transpose() * w / vers[i].v.norm();
        rhs(i) = path.f.coeffs[i].conjugate().dot(vers[i].v) / vers[i].v.norm();
    }
    Eigen::VectorXcd zdot = -m.partialPivLu().solve(rhs);

    ExpSumSystem ren = expsum::renormalize(q, z);
    ExpSumSystem ren_dot = expsum::renormalize(path.f, z);
    double speed_sq = 0.0;   // || d/dtau p ||^2 in multi-projective FS
    double qspeed_sq = 0.0;  // || q-dot . R(z) ||^2 (the L1 integrand part)
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXcd p = ren.coeffs[i];
        Eigen::VectorXcd qd = ren_dot.coeffs[i];
        Eigen::VectorXcd chain(p.size());
        for (int a = 0; a < p.size(); ++a) {
            std::complex<double> bz = 0.0;
            for (int j = 0; j < n; ++j) bz += sup.shifted[i](a, j) * zdot(j);
            chain(a) = p(a) * bz;
        }
        double s = fs_norm(p, qd + chain);
        speed_sq += s * s;
        double s1 = fs_norm(p, qd);
        qspeed_sq += s1 * s1;
    }
    double zdot_norm = expsum::toric_norm0(sup, zdot);
    double mu_tau = newton::mu(ren, Eigen::VectorXcd::Zero(n));

    Integrand out;
    out.full = (std::sqrt(speed_sq) + nu * zdot_norm) * mu_tau;
    out.l1 = std::sqrt(qspeed_sq) * mu_tau;
    out.l2 = 2.0 * nu * zdot_norm * mu_tau;
    return out;
}

Eigen::VectorXcd polish(const ExpSumSystem& q, Eigen::VectorXcd z) {
    for (int it = 0; it < 3; ++it) {
        try {
            z += newton::newton_displacement(q, z);
        } catch (const SingularJacobian&) {
            break;
        }
    }
    return z;
}

}  // namespace

ConditionLength condition_length(const PathTrace& trace, const LinearPath& path,
                                 const lattice::LatticeBasis& basis, int refine_factor) {
    (void)basis;
    double nu = expsum::distortion_nu0(*path.g.supports).nu;
    ConditionLength total{0.0, 0.0, 0.0};
    for (size_t j = 0; j + 1 < trace.mesh.size(); ++j) {
        double a = trace.mesh[j].t, b = trace.mesh[j + 1].t;
        if (!(b > a)) continue;
        const Eigen::VectorXcd& anchor = trace.mesh[j + 1].x;
        // Log-spaced refinement across wide parameter decades.
        std::vector<double> ts;
        bool log_spaced = a > 0.0 && b / a > 10.0;
        for (int k = 0; k <= refine_factor; ++k) {
            double s = static_cast<double>(k) / refine_factor;
            ts.push_back(log_spaced ? a * std::pow(b / a, s) : a + (b - a) * s);
        }
        std::vector<Integrand> vals;
        vals.reserve(ts.size());
        for (double tau : ts) {
            Eigen::VectorXcd z = polish(path.at(tau), anchor);
            vals.push_back(integrand_at(path, tau, z, nu));
        }
        for (size_t k = 0; k + 1 < ts.size(); ++k) {
            double h = 0.5 * (ts[k + 1] - ts[k]);
            total.L += h * (vals[k].full + vals[k + 1].full);
            total.L1 += h * (vals[k].l1 + vals[k + 1].l1);
            total.L2 += h * (vals[k].l2 + vals[k + 1].l2);
        }
    }
    return total;
}

double tail_threshold(const ExpSumSystem& target, const ExpSumSystem& start,
                      double mu_estimate) {
    const SupportTuple& sup = *target.supports;
    double kappa = expsum::kappa_f(target);
    if (!std::isfinite(kappa)) throw InfiniteKappa();
    int min_si = *std::min_element(sup.Si.begin(), sup.Si.end());
    double K = 1.0 + std::sqrt((std::log(static_cast<double>(sup.n)) + std::log(10.0)) /
                               min_si);
    for (int i = 0; i < sup.n; ++i)
        K = std::max(K, start.coeff_norm(i) * std::exp(start.log_scale(i)) /
                            std::sqrt(static_cast<double>(sup.Si[i])));
    double nu = expsum::distortion_nu0(sup).nu;
    return 14.0 * kappa * K * std::sqrt(static_cast<double>(sup.n)) *
           std::sqrt(static_cast<double>(sup.S)) * mu_estimate * mu_estimate * nu;
}

std::optional<InfinityCertificate> infinity_monitor(const ExpSumSystem& system,
                                                    const Eigen::VectorXcd& z, double H) {
    const SupportTuple& sup = *system.supports;
    Eigen::VectorXd x = z.real();
    if (x.norm() < H) return std::nullopt;

    auto rays = polytope::fan_rays(sup);
    // Faces of each support in the direction of x (with a scale-aware tolerance).
    std::vector<std::vector<int>> bx(sup.n);
    for (int i = 0; i < sup.n; ++i) {
        double best = -std::numeric_limits<double>::infinity();
        std::vector<double> vals(sup.Si[i]);
        double scale = 1.0;
        for (int a = 0; a < sup.Si[i]; ++a) {
            double v = 0.0;
            for (int j = 0; j < sup.n; ++j)
                v += static_cast<double>(sup.points[i][a][j]) * x(j);
            vals[a] = v;
            best = std::max(best, v);
            scale = std::max(scale, std::abs(v));
        }
        for (int a = 0; a < sup.Si[i]; ++a)
            if (vals[a] >= best - 1e-9 * scale) bx[i].push_back(a);
    }
    // Rays of the closed cone containing x: those whose faces contain B_i.
    std::vector<int> cands;
    for (size_t r = 0; r < rays.size(); ++r) {
        bool ok = true;
        for (int i = 0; i < sup.n && ok; ++i) {
            auto face = polytope::support_value(sup.points[i], rays[r].xi).face;
            for (int idx : bx[i])
                if (std::find(face.begin(), face.end(), idx) == face.end()) {
                    ok = false;
                    break;
                }
        }
        if (ok) cands.push_back(static_cast<int>(r));
    }
    // Caratheodory decomposition over unit representatives of candidate rays.
    int dominant = -1;
    double best_s = -1.0;
    const int m = static_cast<int>(cands.size());
    for (int mask = 1; mask < (1 << std::min(m, 12)); ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) > sup.n) continue;
        std::vector<int> subset;
        for (int b = 0; b < m; ++b)
            if (mask & (1 << b)) subset.push_back(cands[b]);
        Eigen::MatrixXd basis_mat(sup.n, subset.size());
        for (size_t c = 0; c < subset.size(); ++c) {
            const auto& xi = rays[subset[c]].xi;
            double norm = std::sqrt(to_double(rays[subset[c]].norm_sq));
            for (int j = 0; j < sup.n; ++j)
                basis_mat(j, static_cast<int>(c)) = static_cast<double>(xi[j]) / norm;
        }
        Eigen::VectorXd s =
            basis_mat.completeOrthogonalDecomposition().solve(x);
        if ((basis_mat * s - x).norm() > 1e-7 * x.norm()) continue;
        if ((s.array() < -1e-9 * x.norm()).any()) continue;
        int arg = 0;
        s.maxCoeff(&arg);
        if (s(arg) > best_s) {
            best_s = s(arg);
            dominant = subset[static_cast<size_t>(arg)];
        }
    }
    if (dominant < 0 && !cands.empty()) {
        // Fallback: steepest candidate ray.
        double best = -std::numeric_limits<double>::infinity();
        for (int r : cands) {
            double v = 0.0;
            for (int j = 0; j < sup.n; ++j) v += static_cast<double>(rays[r].xi[j]) * x(j);
            v /= std::sqrt(to_double(rays[r].norm_sq));
            if (v > best) best = v, dominant = r;
        }
    }
    if (dominant < 0) return std::nullopt;

    const auto& xi = rays[dominant].xi;
    InfinityCertificate cert;
    cert.xi = xi;
    cert.h.resize(sup.n);
    cert.rel_norms.resize(sup.n);
    cert.bounds.resize(sup.n);
    auto gaps = polytope::facet_gap_lenient(sup);
    for (int i = 0; i < sup.n; ++i) {
        auto face = polytope::support_value(sup.points[i], xi).face;
        auto ver = expsum::veronese(sup, i, z);
        std::complex<double> face_sum = 0.0;
        double face_sq = 0.0;
        for (int a : face) {
            face_sum += system.coeffs[i](a) * ver.v(a);
            face_sq += std::norm(ver.v(a));
        }
        std::complex<double> gi = -face_sum;
        cert.h[i] = Eigen::VectorXcd::Zero(sup.Si[i]);
        for (int a : face) cert.h[i](a) = gi * std::conj(ver.v(a)) / face_sq;
        double qnorm = system.coeff_norm(i);
        cert.rel_norms(i) = qnorm > 0.0 ? cert.h[i].norm() / qnorm
                                        : std::numeric_limits<double>::infinity();
        double eta_i = gaps.eta_i[i];
        cert.bounds(i) = std::isfinite(eta_i)
                             ? expsum::kappa_rho(sup, i) * std::exp(-eta_i * H / sup.n)
                             : 0.0;
    }
    return cert;
}

double default_exclusion_delta(double dr, int S) {
    return 1.0 / (2.0 * (2.0 * dr * dr + 1.0) * S);
}

double h_threshold(const SupportTuple& supports, double dr, double T, double delta,
                   double norm_f) {
    if (delta > default_exclusion_delta(dr, supports.S)) throw DeltaTooLarge();
    double eta = polytope::facet_gap_lenient(supports).eta;
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ZeroEta();
    double s = static_cast<double>(supports.S);
    double max_si = static_cast<double>(*std::max_element(supports.Si.begin(),
                                                          supports.Si.end()));
    double inner = 1.0 + T * norm_f * std::sqrt(std::numbers::e) /
                             (std::pow(delta, 1.0 / (2.0 * s)) * std::sqrt(s));
    return supports.n / eta *
           std::log(16.0 * std::numbers::e / delta * dr * dr * s * std::sqrt(max_si) *
                    inner);
}

}  // namespace toric::tracker
