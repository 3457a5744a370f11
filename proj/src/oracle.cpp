#include "toric/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "toric/errors.hpp"
#include "toric/polytope.hpp"
#include "toric/solver.hpp"

namespace toric::oracle {

namespace {

std::vector<std::complex<double>> companion_roots(std::vector<std::complex<double>> c) {
    // Roots of sum c_k w^k; assumes c trimmed (c.front(), c.back() nonzero).
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg < 1) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int k = 0; k < deg; ++k) comp(k, deg - 1) = -c[k] / c[deg];
    for (int k = 1; k < deg; ++k) comp(k, k - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
    std::vector<std::complex<double>> roots(deg);
    for (int k = 0; k < deg; ++k) roots[k] = es.eigenvalues()(k);
    return roots;
}

struct Trimmed {
    std::vector<std::complex<double>> c;
    int dropped = 0;
    int trailing = 0;
};

Trimmed trim_poly(std::vector<std::complex<double>> c) {
    double scale = 0.0;
    for (auto& v : c) scale = std::max(scale, std::abs(v));
    if (scale <= 0.0) throw ResultantDegenerate();
    const double tiny = 1e-12 * scale;
    Trimmed out;
    size_t hi = c.size();
    while (hi > 0 && std::abs(c[hi - 1]) <= tiny) {
        --hi;
        ++out.dropped;
    }
    size_t lo = 0;
    while (lo < hi && std::abs(c[lo]) <= tiny) {
        ++lo;
        ++out.trailing;
    }
    out.c.assign(c.begin() + static_cast<long>(lo), c.begin() + static_cast<long>(hi));
    if (out.c.empty()) throw ResultantDegenerate();
    return out;
}

// Polish, canonicalize, deduplicate and residual-filter a batch of candidates.
OracleRootSet finalize_roots(const ExpSumSystem& system,
                             std::vector<Eigen::VectorXcd> candidates,
                             const std::string& method, int dropped) {
    auto basis = lattice::lattice_from_supports(*system.supports);
    OracleRootSet out;
    out.method = method;
    out.dropped_degenerate = dropped;
    for (auto& z : candidates) {
        Eigen::VectorXcd cur = z;
        bool ok = true;
        for (int it = 0; it < 20; ++it) {
            Eigen::VectorXcd disp;
            try {
                disp = newton::newton_displacement(system, cur);
            } catch (const SingularJacobian&) {
                ok = false;
                break;
            }
            cur += disp;
            if (disp.norm() <= 1e-14 * (1.0 + cur.norm())) break;
        }
        if (!ok) continue;
        double res = expsum::residual(system, cur);
        if (res > 1e-10) continue;
        auto canon = lattice::canonicalize_point(cur, basis);
        bool merged = false;
        for (size_t r = 0; r < out.roots.size(); ++r) {
            if (expsum::toric_distance(*system.supports, basis, out.roots[r].z, canon.z) <=
                1e-9) {
                ++out.multiplicity[r];
                merged = true;
                break;
            }
        }
        if (!merged) {
            out.roots.push_back(canon);
            out.multiplicity.push_back(1);
            out.residuals.push_back(res);
        }
    }
    return out;
}

}  // namespace

OracleRootSet univariate_roots(const ExpSumSystem& system) {
    const SupportTuple& sup = *system.supports;
    if (sup.n != 1) throw OracleUnavailable(sup.n);
    auto basis = lattice::lattice_from_supports(sup);
    const std::int64_t d = lattice::lattice_det(basis).convert_to<std::int64_t>();

    std::int64_t amin = sup.points[0][0][0];
    std::int64_t amax = amin;
    for (const auto& a : sup.points[0]) {
        amin = std::min(amin, a[0]);
        amax = std::max(amax, a[0]);
    }
    const auto deg = static_cast<size_t>((amax - amin) / d);
    std::vector<std::complex<double>> c(deg + 1, 0.0);
    for (int a = 0; a < sup.Si[0]; ++a)
        c[static_cast<size_t>((sup.points[0][a][0] - amin) / d)] +=
            system.coeffs[0](a) * sup.rho[0][a];

    auto trimmed = trim_poly(std::move(c));
    std::vector<Eigen::VectorXcd> cands;
    for (auto w : companion_roots(trimmed.c)) {
        if (std::abs(w) == 0.0) continue;
        Eigen::VectorXcd z(1);
        double arg = std::arg(w);
        if (arg < 0) arg += 2.0 * std::numbers::pi;
        z(0) = std::complex<double>(std::log(std::abs(w)) / d, arg / d);
        cands.push_back(z);
    }
    return finalize_roots(system, std::move(cands), "companion",
                          trimmed.dropped + trimmed.trailing);
}

namespace {

// Bivariate coefficient table: poly[a1][a2], exponents shifted to min 0.
struct BivarPoly {
    std::vector<std::vector<std::complex<double>>> c;  // (d1+1) x (d2+1)
    int d1 = 0, d2 = 0;

    std::vector<std::complex<double>> coeff_in_x2(const std::complex<double>& x1) const {
        std::vector<std::complex<double>> out(d2 + 1, 0.0);
        for (int k2 = 0; k2 <= d2; ++k2) {
            std::complex<double> acc = 0.0;
            for (int k1 = d1; k1 >= 0; --k1) acc = acc * x1 + c[k1][k2];
            out[k2] = acc;
        }
        return out;
    }
    std::complex<double> eval(const std::complex<double>& x1,
                              const std::complex<double>& x2) const {
        auto u = coeff_in_x2(x1);
        std::complex<double> acc = 0.0;
        for (int k2 = d2; k2 >= 0; --k2) acc = acc * x2 + u[k2];
        return acc;
    }
};

BivarPoly to_bivar(const ExpSumSystem& system, int i) {
    const SupportTuple& sup = *system.supports;
    std::int64_t m1 = sup.points[i][0][0], m2 = sup.points[i][0][1];
    std::int64_t M1 = m1, M2 = m2;
    for (const auto& a : sup.points[i]) {
        m1 = std::min(m1, a[0]);
        M1 = std::max(M1, a[0]);
        m2 = std::min(m2, a[1]);
        M2 = std::max(M2, a[1]);
    }
    BivarPoly p;
    p.d1 = static_cast<int>(M1 - m1);
    p.d2 = static_cast<int>(M2 - m2);
    p.c.assign(p.d1 + 1, std::vector<std::complex<double>>(p.d2 + 1, 0.0));
    for (int a = 0; a < sup.Si[i]; ++a)
        p.c[static_cast<size_t>(sup.points[i][a][0] - m1)]
           [static_cast<size_t>(sup.points[i][a][1] - m2)] +=
            system.coeffs[i](a) * sup.rho[i][a];
    return p;
}

std::complex<double> sylvester_det(const BivarPoly& f, const BivarPoly& g,
                                   const std::complex<double>& x1) {
    auto a = f.coeff_in_x2(x1);
    auto b = g.coeff_in_x2(x1);
    const int m = f.d2, n = g.d2;
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(m + n, m + n);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) s(r, r + (m - k)) = a[static_cast<size_t>(k)];
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) s(n + r, r + (n - k)) = b[static_cast<size_t>(k)];
    return s.partialPivLu().determinant();
}

}  // namespace

OracleRootSet bivariate_roots(const ExpSumSystem& system) {
    const SupportTuple& sup = *system.supports;
    if (sup.n != 2) throw OracleUnavailable(sup.n);
    BivarPoly f = to_bivar(system, 0);
    BivarPoly g = to_bivar(system, 1);

    std::vector<Eigen::VectorXcd> cands;
    int dropped = 0;
    auto add_candidates = [&](const std::complex<double>& w1,
                              const std::vector<std::complex<double>>& poly2) {
        auto t = trim_poly(poly2);
        for (auto w2 : companion_roots(t.c)) {
            if (std::abs(w1) == 0.0 || std::abs(w2) == 0.0) continue;
            Eigen::VectorXcd z(2);
            z(0) = std::complex<double>(std::log(std::abs(w1)), std::arg(w1));
            z(1) = std::complex<double>(std::log(std::abs(w2)), std::arg(w2));
            // Loose joint check before the Newton polish.
            double s1 = std::abs(f.eval(w1, w2));
            double s2 = std::abs(g.eval(w1, w2));
            double scale = 1.0 + std::abs(w1) + std::abs(w2);
            if (s1 > 1e-4 * std::pow(scale, f.d1 + f.d2) ||
                s2 > 1e-4 * std::pow(scale, g.d1 + g.d2))
                continue;
            cands.push_back(z);
        }
    };

    if (f.d2 == 0 || g.d2 == 0) {
        // Separable in X2: one equation is univariate in X1.
        const BivarPoly& uni = f.d2 == 0 ? f : g;
        const BivarPoly& other = f.d2 == 0 ? g : f;
        std::vector<std::complex<double>> cu(uni.d1 + 1);
        for (int k = 0; k <= uni.d1; ++k) cu[static_cast<size_t>(k)] = uni.c[k][0];
        auto t = trim_poly(std::move(cu));
        dropped += t.dropped + t.trailing;
        for (auto w1 : companion_roots(t.c)) {
            if (std::abs(w1) == 0.0) continue;
            auto t2 = trim_poly(other.coeff_in_x2(w1));
            for (auto w2 : companion_roots(t2.c)) {
                if (std::abs(w2) == 0.0) continue;
                Eigen::VectorXcd z(2);
                z(0) = std::complex<double>(std::log(std::abs(w1)), std::arg(w1));
                z(1) = std::complex<double>(std::log(std::abs(w2)), std::arg(w2));
                cands.push_back(z);
            }
        }
        return finalize_roots(system, std::move(cands), "resultant", dropped);
    }

    // Interpolate R(x1) = det Syl(f, g; x1) on a circle.
    const int degree_bound = f.d1 * g.d2 + g.d1 * f.d2;
    const int m = degree_bound + 1;
    const double radius = 1.0;
    const double phase = 0.377;
    std::vector<std::complex<double>> values(m);
    for (int j = 0; j < m; ++j) {
        double theta = 2.0 * std::numbers::pi * j / m + phase;
        values[j] = sylvester_det(f, g, std::polar(radius, theta));
    }
    std::vector<std::complex<double>> coeffs(m, 0.0);
    for (int k = 0; k < m; ++k) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < m; ++j)
            acc += values[j] * std::polar(1.0, -2.0 * std::numbers::pi * j * k / m);
        coeffs[k] = acc / static_cast<double>(m) * std::polar(1.0, -phase * k) /
                    std::pow(radius, k);
    }
    auto t = trim_poly(std::move(coeffs));
    dropped += t.dropped + t.trailing;
    const BivarPoly& richer = f.d2 >= g.d2 ? f : g;
    for (auto w1 : companion_roots(t.c)) {
        if (std::abs(w1) == 0.0) continue;
        add_candidates(w1, richer.coeff_in_x2(w1));
    }
    return finalize_roots(system, std::move(cands), "resultant", dropped);
}

OracleRootSet solve_by_oracle(const ExpSumSystem& system) {
    if (system.n() == 1) return univariate_roots(system);
    if (system.n() == 2) return bivariate_roots(system);
    throw OracleUnavailable(system.n());
}

namespace {

McReport make_report(std::vector<double> sums, double bound, bool keep) {
    McReport rep;
    rep.samples = static_cast<long>(sums.size());
    rep.bound = bound;
    double mean = 0.0;
    for (double v : sums) mean += v;
    mean /= static_cast<double>(sums.size());
    double var = 0.0;
    for (double v : sums) var += (v - mean) * (v - mean);
    var /= std::max<double>(1.0, static_cast<double>(sums.size() - 1));
    rep.mean = mean;
    rep.stderr_ = std::sqrt(var / static_cast<double>(sums.size()));
    rep.pass = rep.mean + 3.0 * rep.stderr_ <= bound;
    if (keep) rep.per_sample = std::move(sums);
    return rep;
}

ExpSumSystem sample_system(const SupportsPtr& supports,
                           const std::vector<Eigen::VectorXd>* sigma,
                           const ExpSumSystem* f_bar, Rng& rng) {
    std::vector<Eigen::VectorXcd> coeffs(supports->n);
    for (int i = 0; i < supports->n; ++i) {
        coeffs[i].resize(supports->Si[i]);
        for (int a = 0; a < supports->Si[i]; ++a) {
            std::complex<double> v = rng.next_complex_gaussian();
            if (sigma) v *= (*sigma)[i](a);
            if (f_bar) v += f_bar->coeffs[i](a);
            coeffs[i](a) = v;
        }
    }
    return ExpSumSystem::create(supports, std::move(coeffs));
}

}  // namespace

McReport mc_moment_frobenius(const SupportsPtr& supports,
                             const std::vector<Eigen::VectorXd>& sigma,
                             const ExpSumSystem* f_bar, double H, long N, Rng& rng,
                             bool keep_samples) {
    double min_sigma_sq = std::numeric_limits<double>::infinity();
    for (const auto& s : sigma)
        for (int a = 0; a < s.size(); ++a) min_sigma_sq = std::min(min_sigma_sq, s(a) * s(a));
    double nfact = 1.0;
    for (int i = 2; i <= supports->n; ++i) nfact *= i;
    double det = to_double(lattice::lattice_det(lattice::lattice_from_supports(*supports)));
    double bound = 2.0 * H * std::sqrt(static_cast<double>(supports->n)) / det /
                   min_sigma_sq * nfact * polytope::mixed_area(*supports);

    std::vector<double> sums;
    sums.reserve(static_cast<size_t>(N));
    while (static_cast<long>(sums.size()) < N) {
        ExpSumSystem q = sample_system(supports, &sigma, f_bar, rng);
        OracleRootSet roots;
        try {
            roots = solve_by_oracle(q);
        } catch (const ResultantDegenerate&) {
            continue;  // measure-zero instance, resample
        }
        double sum = 0.0;
        for (const auto& root : roots.roots) {
            if (root.z.real().lpNorm<Eigen::Infinity>() > H) continue;
            double fro = newton::inverse_frobenius(q, root.z);
            if (std::isfinite(fro)) sum += fro * fro;
        }
        sums.push_back(sum);
    }
    return make_report(std::move(sums), bound, keep_samples);
}

McReport mc_moment_mu(const SupportsPtr& supports, double H, long N, Rng& rng,
                      bool keep_samples) {
    for (const auto& r : supports->rho)
        for (double w : r)
            if (w != 1.0) throw ParseError("mu-moment bound needs rho = 1");
    const int n = supports->n;
    int min_si = *std::min_element(supports->Si.begin(), supports->Si.end());
    int max_si = *std::max_element(supports->Si.begin(), supports->Si.end());
    double nfact = 1.0;
    for (int i = 2; i <= n; ++i) nfact *= i;
    double det = to_double(lattice::lattice_det(lattice::lattice_from_supports(*supports)));
    double paren = 4.0 + std::sqrt(std::log(static_cast<double>(n)) / min_si +
                                   2.0 * std::log(1.5));
    double bound = 2.5 * std::numbers::e * H * std::sqrt(static_cast<double>(n)) / det *
                   paren * paren * static_cast<double>(max_si) * max_si *
                   supports->deltas0().squaredNorm() * nfact *
                   polytope::mixed_area(*supports);

    std::vector<double> sums;
    sums.reserve(static_cast<size_t>(N));
    Eigen::VectorXcd origin = Eigen::VectorXcd::Zero(n);
    while (static_cast<long>(sums.size()) < N) {
        ExpSumSystem g = sample_system(supports, nullptr, nullptr, rng);
        OracleRootSet roots;
        try {
            roots = solve_by_oracle(g);
        } catch (const ResultantDegenerate&) {
            continue;
        }
        double sum = 0.0;
        for (const auto& root : roots.roots) {
            if (root.z.real().lpNorm<Eigen::Infinity>() > H) continue;
            double m = newton::mu(expsum::renormalize(g, root.z), origin);
            if (std::isfinite(m)) sum += m * m;
        }
        sums.push_back(sum);
    }
    return make_report(std::move(sums), bound, keep_samples);
}

ExclusionReport mc_exclusion(const ExpSumSystem& f, long N, Rng& rng) {
    long hit_lambda = 0, hit_yk = 0;
    for (long s = 0; s < N; ++s) {
        ExpSumSystem g = sample_system(f.supports, nullptr, nullptr, rng);
        auto flags = solver::exclusion_check(g, f);
        if (flags.in_lambda_eps) ++hit_lambda;
        if (flags.in_y_k) ++hit_yk;
    }
    // One-sided check: the empirical frequency must not exceed the analytic
    // bound beyond sampling noise.
    auto bernoulli = [N](long hits, double bound) {
        McReport rep;
        rep.samples = N;
        rep.mean = static_cast<double>(hits) / static_cast<double>(N);
        rep.stderr_ = std::sqrt(rep.mean * (1.0 - rep.mean) / static_cast<double>(N));
        rep.bound = bound;
        rep.pass = rep.mean <= bound + 3.0 * rep.stderr_;
        return rep;
    };
    ExclusionReport rep;
    rep.lambda_eps = bernoulli(hit_lambda, 1.0 / 72.0);
    rep.y_k = bernoulli(hit_yk, 0.1);
    return rep;
}

}  // namespace toric::oracle
