#include "toric/newton.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

#include "toric/errors.hpp"

namespace toric::newton {

const SmaleConstants& constants() {
    static const SmaleConstants c = [] {
        SmaleConstants k;
        k.alpha0 = (13.0 - 3.0 * std::sqrt(17.0)) / 4.0;
        k.alpha_star = 0.074609958;
        k.alpha_starstar = 0.096917682;
        k.delta_star = 0.085180825;
        k.u_star = 0.129283177;
        k.u_starstar = 0.007556641;
        k.u_starstarstar = 0.059668617;
        k.theta0 = 13.977369;
        k.k1 = 6.988684;
        k.k2 = 2.901827;
        k.k3 = 0.903836;
        return k;
    }();
    return c;
}

namespace {

constexpr double kSingularCutoff = 1e14;

Eigen::MatrixXcd sqrt_psd(const Eigen::MatrixXcd& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

// Inverse via SVD; empty matrix result signals singularity.
bool invert(const Eigen::MatrixXcd& m, Eigen::MatrixXcd& out) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv(0) > 0.0) || !std::isfinite(sv(0))) return false;
    if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > kSingularCutoff) return false;
    out = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
    return true;
}

}  // namespace

Eigen::MatrixXcd jacobian_M(const ExpSumSystem& system, const Eigen::VectorXcd& z) {
    const SupportTuple& sup = *system.supports;
    Eigen::MatrixXcd m(sup.n, sup.n);
    for (int i = 0; i < sup.n; ++i) {
        auto ver = expsum::veronese(sup, i, z);
        Eigen::VectorXd mom = expsum::momentum(sup, i, z);
        Eigen::MatrixXcd w = ver.dv;
        w.noalias() -= ver.v * mom.transpose().cast<std::complex<double>>();
        m.row(i) = system.coeffs[i].transpose() * w / ver.v.norm();
    }
    return m;
}

double mu(const ExpSumSystem& system, const Eigen::VectorXcd& z) {
    Eigen::MatrixXcd m = jacobian_M(system, z);
    Eigen::MatrixXcd minv;
    if (!invert(m, minv)) return std::numeric_limits<double>::infinity();
    Eigen::VectorXd norms(system.n());
    for (int i = 0; i < system.n(); ++i) norms(i) = system.coeff_norm(i);
    Eigen::MatrixXcd g = expsum::gram(*system.supports, z);
    Eigen::MatrixXcd x = sqrt_psd(g) * minv * norms.asDiagonal();
    return x.jacobiSvd().singularValues()(0);
}

double inverse_frobenius(const ExpSumSystem& system, const Eigen::VectorXcd& z) {
    Eigen::MatrixXcd minv;
    if (!invert(jacobian_M(system, z), minv))
        return std::numeric_limits<double>::infinity();
    return minv.norm();
}

Eigen::VectorXcd newton_displacement(const ExpSumSystem& system, const Eigen::VectorXcd& x) {
    const SupportTuple& sup = *system.supports;
    Eigen::MatrixXcd jac(sup.n, sup.n);
    Eigen::VectorXcd val(sup.n);
    for (int i = 0; i < sup.n; ++i) {
        auto ver = expsum::veronese(sup, i, x);
        jac.row(i) = system.coeffs[i].transpose() * ver.dv;
        val(i) = system.coeffs[i].conjugate().dot(ver.v);
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(jac);
    Eigen::VectorXcd disp = -lu.solve(val);
    if (!disp.allFinite() || (jac * disp + val).norm() > 1e-6 * val.norm() + 1e-300)
        throw SingularJacobian();
    return disp;
}

TorusPoint newton_step(const ExpSumSystem& system, const TorusPoint& x,
                       const lattice::LatticeBasis& basis) {
    Eigen::VectorXcd next = x.z + newton_displacement(system, x.z);
    return lattice::canonicalize_point(next, basis);
}

double beta(const ExpSumSystem& system, const Eigen::VectorXcd& x) {
    return expsum::toric_norm0(*system.supports, newton_displacement(system, x));
}

double gamma_bound(const ExpSumSystem& system, const Eigen::VectorXcd& x) {
    double nu = expsum::distortion_nu0(*system.supports).nu;
    ExpSumSystem ren = expsum::renormalize(system, x);
    return 0.5 * mu(ren, Eigen::VectorXcd::Zero(system.n())) * nu;
}

Certificate certify(const ExpSumSystem& system, const Eigen::VectorXcd& x,
                    double target_alpha) {
    Certificate cert;
    cert.target_alpha = target_alpha;
    cert.nu = expsum::distortion_nu0(*system.supports).nu;
    ExpSumSystem ren = expsum::renormalize(system, x);
    Eigen::VectorXcd origin = Eigen::VectorXcd::Zero(system.n());
    try {
        cert.beta = expsum::toric_norm0(*system.supports, newton_displacement(ren, origin));
    } catch (const SingularJacobian&) {
        cert.beta = std::numeric_limits<double>::infinity();
    }
    cert.mu = mu(ren, origin);
    cert.alpha_hat = 0.5 * cert.beta * cert.mu * cert.nu;
    cert.passed = std::isfinite(cert.alpha_hat) && cert.alpha_hat <= target_alpha;
    return cert;
}

TorusPoint refine(const ExpSumSystem& system, const TorusPoint& x,
                  const lattice::LatticeBasis& basis, double tol, int max_iter) {
    TorusPoint cur = x;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXcd disp = newton_displacement(system, cur.z);
        cur = lattice::canonicalize_point(cur.z + disp, basis);
        if (expsum::toric_norm0(*system.supports, disp) <= tol) return cur;
    }
    throw NoConvergence();
}

SmaleRadii smale_radii(double alpha) {
    if (!(alpha > 0.0) || alpha > constants().alpha0)
        throw OutOfRange("alpha must lie in (0, alpha0]");
    double rad = std::sqrt(1.0 - 6.0 * alpha + alpha * alpha);
    return {(1.0 + alpha - rad) / (4.0 * alpha), (1.0 - 3.0 * alpha - rad) / (4.0 * alpha)};
}

}  // namespace toric::newton
