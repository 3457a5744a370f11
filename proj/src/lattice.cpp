#include "toric/lattice.hpp"

#include <cmath>
#include <numbers>

#include "toric/errors.hpp"

namespace toric::lattice {

LatticeBasis lattice_from_rows(intlinalg::MatZ rows, int n) {
    intlinalg::MatZ h = intlinalg::hnf_rows(std::move(rows));
    int r = static_cast<int>(h.size());
    if (r < n) throw RankDeficient(r);
    LatticeBasis basis;
    basis.rank = n;
    basis.rows = std::move(h);
    return basis;
}

LatticeBasis lattice_from_supports(const SupportTuple& supports) {
    intlinalg::MatZ diffs;
    for (int i = 0; i < supports.n; ++i) {
        const auto& A = supports.points[i];
        for (size_t a = 1; a < A.size(); ++a) {
            std::vector<Int> d(supports.n);
            for (int j = 0; j < supports.n; ++j) d[j] = Int(A[a][j] - A[0][j]);
            diffs.push_back(std::move(d));
        }
    }
    return lattice_from_rows(std::move(diffs), supports.n);
}

Int lattice_det(const LatticeBasis& basis) {
    Int d = 1;
    for (size_t i = 0; i < basis.rows.size(); ++i) {
        // Pivot of row i is its first nonzero entry; for full rank HNF this is
        // the diagonal, but locate it to stay robust.
        for (const auto& v : basis.rows[i])
            if (v != 0) { d *= v; break; }
    }
    return d;
}

DualBasis dual_basis(const LatticeBasis& basis) {
    auto inv = intlinalg::inverse(basis.rows);
    DualBasis dual;
    dual.cols = std::move(inv);
    return dual;
}

namespace {

Eigen::MatrixXd basis_as_double(const intlinalg::MatZ& rows) {
    const int n = static_cast<int>(rows.size());
    Eigen::MatrixXd u(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) u(i, j) = to_double(rows[i][j]);
    return u;
}

}  // namespace

TorusPoint canonicalize_point(const Eigen::VectorXcd& z, const LatticeBasis& basis) {
    const int n = static_cast<int>(z.size());
    const double two_pi = 2.0 * std::numbers::pi;
    // y = 2 pi D c with D = U^{-1} (columns a dual basis), so c = U y / (2 pi).
    Eigen::MatrixXd u = basis_as_double(basis.rows);
    Eigen::VectorXd c = u * z.imag() / two_pi;
    for (int j = 0; j < n; ++j) {
        double f = std::floor(c(j));
        // Guard against a representative landing epsilon below an integer.
        if (c(j) - f > 1.0 - 1e-12) f += 1.0;
        c(j) -= f;
    }
    Eigen::VectorXd y = two_pi * u.partialPivLu().solve(c);
    TorusPoint p;
    p.z.resize(n);
    for (int j = 0; j < n; ++j) p.z(j) = std::complex<double>(z(j).real(), y(j));
    return p;
}

Eigen::VectorXcd wrapped_difference(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y,
                                    const LatticeBasis& basis) {
    const double two_pi = 2.0 * std::numbers::pi;
    Eigen::MatrixXd u = basis_as_double(basis.rows);
    Eigen::VectorXcd d = x - y;
    Eigen::VectorXd c = u * d.imag() / two_pi;
    for (int j = 0; j < c.size(); ++j) c(j) -= std::round(c(j));
    Eigen::VectorXd im = two_pi * u.partialPivLu().solve(c);
    for (int j = 0; j < d.size(); ++j) d(j) = std::complex<double>(d(j).real(), im(j));
    return d;
}

}  // namespace toric::lattice
