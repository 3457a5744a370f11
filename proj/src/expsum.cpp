#include "toric/expsum.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

#include "toric/errors.hpp"
#include "toric/polytope.hpp"

namespace toric::expsum {

ExpSumSystem ExpSumSystem::create(SupportsPtr supports, std::vector<Eigen::VectorXcd> coeffs) {
    ExpSumSystem sys;
    if (static_cast<int>(coeffs.size()) != supports->n)
        throw ParseError("coefficient rows do not match dimension");
    for (int i = 0; i < supports->n; ++i)
        if (coeffs[i].size() != supports->Si[i])
            throw ParseError("coefficient length does not match support size");
    sys.supports = std::move(supports);
    sys.coeffs = std::move(coeffs);
    sys.log_scale = Eigen::VectorXd::Zero(sys.supports->n);
    return sys;
}

Veronese veronese(const SupportTuple& supports, int i, const Eigen::VectorXcd& z) {
    const int n = supports.n;
    const int s = supports.Si[i];
    const Eigen::MatrixXd& b = supports.shifted[i];
    Eigen::VectorXd re = z.real();
    Veronese out;
    out.ell = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd exponents(s);
    for (int a = 0; a < s; ++a) {
        exponents(a) = b.row(a).dot(re);
        out.ell = std::max(out.ell, exponents(a));
    }
    out.v.resize(s);
    out.dv.resize(s, n);
    for (int a = 0; a < s; ++a) {
        std::complex<double> phase(exponents(a) - out.ell, b.row(a).dot(z.imag()));
        std::complex<double> val = supports.rho[i][a] * std::exp(phase);
        out.v(a) = val;
        for (int j = 0; j < n; ++j) out.dv(a, j) = val * b(a, j);
    }
    return out;
}

EvalResult evaluate(const ExpSumSystem& system, const Eigen::VectorXcd& z) {
    const int n = system.n();
    EvalResult out;
    out.values.resize(n);
    out.log_scales.resize(n);
    for (int i = 0; i < n; ++i) {
        auto ver = veronese(*system.supports, i, z);
        out.values(i) = system.coeffs[i].conjugate().dot(ver.v);  // plain coupling f . V
        out.log_scales(i) = ver.ell + system.log_scale(i);
    }
    return out;
}

double residual(const ExpSumSystem& system, const Eigen::VectorXcd& z) {
    double worst = 0.0;
    for (int i = 0; i < system.n(); ++i) {
        auto ver = veronese(*system.supports, i, z);
        double denom = system.coeffs[i].norm() * ver.v.norm();
        if (denom == 0.0) throw ZeroEquation(i);
        worst = std::max(worst, std::abs(system.coeffs[i].conjugate().dot(ver.v)) / denom);
    }
    return worst;
}

Eigen::VectorXd momentum(const SupportTuple& supports, int i, const Eigen::VectorXcd& z) {
    auto ver = veronese(supports, i, z);
    Eigen::VectorXd m = Eigen::VectorXd::Zero(supports.n);
    double total = 0.0;
    for (int a = 0; a < supports.Si[i]; ++a) {
        double w = std::norm(ver.v(a));
        total += w;
        m += w * supports.shifted[i].row(a).transpose();
    }
    return m / total;
}

namespace {

// S_i x n matrix W_i(z) with ||u||_{i,z} = ||W_i(z) u||.
Eigen::MatrixXcd projection_matrix(const SupportTuple& supports, int i,
                                   const Eigen::VectorXcd& z) {
    auto ver = veronese(supports, i, z);
    Eigen::VectorXd m = momentum(supports, i, z);
    Eigen::MatrixXcd w = ver.dv;
    w.noalias() -= ver.v * m.transpose().cast<std::complex<double>>();
    return w / ver.v.norm();
}

Eigen::MatrixXd covariance0(const SupportTuple& supports, int i) {
    const Eigen::MatrixXd& b = supports.shifted[i];
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(supports.n, supports.n);
    double total = 0.0;
    for (int a = 0; a < supports.Si[i]; ++a) {
        double w = supports.rho[i][a] * supports.rho[i][a];
        total += w;
        c.noalias() += w * b.row(a).transpose() * b.row(a);
    }
    return c / total;
}

}  // namespace

ToricNorm toric_norm(const SupportTuple& supports, const Eigen::VectorXcd& z,
                     const Eigen::VectorXcd& u) {
    ToricNorm out;
    out.per_equation.resize(supports.n);
    double sq = 0.0;
    for (int i = 0; i < supports.n; ++i) {
        double v = (projection_matrix(supports, i, z) * u).norm();
        out.per_equation(i) = v;
        sq += v * v;
    }
    out.total = std::sqrt(sq);
    return out;
}

Eigen::MatrixXcd gram(const SupportTuple& supports, const Eigen::VectorXcd& z) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(supports.n, supports.n);
    for (int i = 0; i < supports.n; ++i) {
        Eigen::MatrixXcd w = projection_matrix(supports, i, z);
        g.noalias() += w.adjoint() * w;
    }
    return g;
}

Eigen::MatrixXd gram0(const SupportTuple& supports) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(supports.n, supports.n);
    for (int i = 0; i < supports.n; ++i) g += covariance0(supports, i);
    return g;
}

double toric_norm0(const SupportTuple& supports, const Eigen::VectorXcd& u) {
    Eigen::MatrixXd g = gram0(supports);
    return std::sqrt(std::max(0.0, u.dot(g.cast<std::complex<double>>() * u).real()));
}

double radius_delta(const SupportTuple& supports, int i, const Eigen::VectorXcd& z) {
    Eigen::VectorXd m = momentum(supports, i, z);
    double best = 0.0;
    for (int a = 0; a < supports.Si[i]; ++a)
        best = std::max(best, (supports.shifted[i].row(a).transpose() - m).norm());
    return best;
}

namespace {

// Dual-norm radius max_a sqrt(w G^+ w) on the range of the (semi-definite)
// Gram G. Support points always lie in the range, which is spanned by the
// support differences; a genuine out-of-range component means the data is
// inconsistent and surfaces as DegenerateGram.
double dual_radius(const Eigen::MatrixXcd& g, const Eigen::MatrixXd& rows, int support) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    const Eigen::VectorXd& ev = es.eigenvalues();
    double cutoff = 1e-12 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    double best = 0.0;
    for (int a = 0; a < rows.rows(); ++a) {
        Eigen::VectorXcd w = es.eigenvectors().adjoint() *
                             rows.row(a).transpose().cast<std::complex<double>>();
        double sq = 0.0;
        for (int k = 0; k < ev.size(); ++k) {
            if (ev(k) > cutoff) {
                sq += std::norm(w(k)) / ev(k);
            } else if (std::abs(w(k)) > 1e-7 * (1.0 + rows.row(a).norm())) {
                throw DegenerateGram(support);
            }
        }
        best = std::max(best, std::sqrt(sq));
    }
    return best;
}

}  // namespace

Distortion distortion_nu0(const SupportTuple& supports) {
    Distortion out;
    out.nu_i.resize(supports.n);
    out.nu = 0.0;
    for (int i = 0; i < supports.n; ++i) {
        double best = dual_radius(covariance0(supports, i).cast<std::complex<double>>(),
                                  supports.shifted[i], i);
        out.nu_i(i) = best;
        out.nu = std::max(out.nu, best);
    }
    return out;
}

double nu_at(const SupportTuple& supports, int i, const Eigen::VectorXcd& z) {
    Eigen::MatrixXcd w = projection_matrix(supports, i, z);
    Eigen::VectorXd m = momentum(supports, i, z);
    Eigen::MatrixXd rows = supports.shifted[i];
    rows.rowwise() -= m.transpose();
    return dual_radius(w.adjoint() * w, rows, i);
}

double kappa_rho(const SupportTuple& supports, int i) {
    double sum_sq = 0.0;
    for (double r : supports.rho[i]) sum_sq += r * r;
    auto verts = polytope::hull_vertices(supports.points[i]);
    double min_vertex_rho = std::numeric_limits<double>::infinity();
    for (int v : verts) min_vertex_rho = std::min(min_vertex_rho, supports.rho[i][v]);
    return std::sqrt(sum_sq) / min_vertex_rho;
}

double kappa_f(const ExpSumSystem& system) {
    double worst = 0.0;
    for (int i = 0; i < system.n(); ++i) {
        double norm = system.coeffs[i].norm();
        for (int a = 0; a < system.coeffs[i].size(); ++a) {
            double mag = std::abs(system.coeffs[i](a));
            if (mag == 0.0) return std::numeric_limits<double>::infinity();
            worst = std::max(worst, norm / mag);
        }
    }
    return worst;
}

ExpSumSystem renormalize(const ExpSumSystem& system, const Eigen::VectorXcd& u) {
    const SupportTuple& sup = *system.supports;
    ExpSumSystem out;
    out.supports = system.supports;
    out.coeffs.resize(sup.n);
    out.log_scale = system.log_scale;
    Eigen::VectorXd re = u.real();
    for (int i = 0; i < sup.n; ++i) {
        const Eigen::MatrixXd& b = sup.shifted[i];
        double ell = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < sup.Si[i]; ++a) ell = std::max(ell, b.row(a).dot(re));
        out.coeffs[i].resize(sup.Si[i]);
        for (int a = 0; a < sup.Si[i]; ++a) {
            std::complex<double> phase(b.row(a).dot(re) - ell, b.row(a).dot(u.imag()));
            out.coeffs[i](a) = system.coeffs[i](a) * std::exp(phase);
        }
        out.log_scale(i) += ell;
    }
    return out;
}

double multiproj_distance(const ExpSumSystem& f, const ExpSumSystem& g) {
    double sq = 0.0;
    for (int i = 0; i < f.n(); ++i) {
        double nf = f.coeffs[i].norm();
        double ng = g.coeffs[i].norm();
        if (nf == 0.0 || ng == 0.0) throw ZeroEquation(i);
        // Sine of the principal angle via the projection residual, which is
        // stable for nearly parallel equations.
        Eigen::VectorXcd fh = f.coeffs[i] / nf;
        Eigen::VectorXcd residual = fh - g.coeffs[i] * (g.coeffs[i].dot(fh) / (ng * ng));
        sq += residual.squaredNorm();
    }
    return std::sqrt(sq);
}

double toric_distance(const SupportTuple& supports, const lattice::LatticeBasis& basis,
                      const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
    return toric_norm0(supports, lattice::wrapped_difference(x, y, basis));
}

}  // namespace toric::expsum
