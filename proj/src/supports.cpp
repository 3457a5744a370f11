#include "toric/supports.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace toric {

SupportTuple SupportTuple::create(int n, std::vector<std::vector<VecZ>> pts,
                                  std::vector<std::vector<double>> weights) {
    if (n < 1) throw ParseError("dimension must be >= 1");
    if (static_cast<int>(pts.size()) != n)
        throw ParseError("need exactly n supports");

    SupportTuple t;
    t.n = n;
    t.points = std::move(pts);
    if (weights.empty()) {
        weights.resize(t.points.size());
        for (size_t i = 0; i < t.points.size(); ++i)
            weights[i].assign(t.points[i].size(), 1.0);
    }
    t.rho = std::move(weights);

    t.Si.resize(n);
    for (int i = 0; i < n; ++i) {
        auto& A = t.points[i];
        if (A.size() < 2) throw ParseError("each support needs at least 2 points");
        if (t.rho[i].size() != A.size())
            throw ParseError("weights shape does not match supports");
        for (double w : t.rho[i])
            if (!(w > 0.0)) throw ParseError("weights must be positive");
        std::set<VecZ> seen;
        for (auto& a : A) {
            if (static_cast<int>(a.size()) != n)
                throw ParseError("exponent vector has wrong dimension");
            if (!seen.insert(a).second) throw ParseError("duplicate exponent vector");
        }
        t.Si[i] = static_cast<int>(A.size());
        t.S += t.Si[i];
    }

    // Exact centering: c_i = sum(rho^2 a) / sum(rho^2); rho^2 as a dyadic rational.
    t.center.resize(n);
    t.shifted.resize(n);
    for (int i = 0; i < n; ++i) {
        std::vector<Rat> num(n, Rat(0));
        Rat den(0);
        for (int a = 0; a < t.Si[i]; ++a) {
            Rat w2 = rat_from_double(t.rho[i][a]) * rat_from_double(t.rho[i][a]);
            den += w2;
            for (int j = 0; j < n; ++j) num[j] += w2 * Rat(Int(t.points[i][a][j]));
        }
        t.center[i].resize(n);
        for (int j = 0; j < n; ++j) t.center[i][j] = num[j] / den;

        t.shifted[i].resize(t.Si[i], n);
        for (int a = 0; a < t.Si[i]; ++a)
            for (int j = 0; j < n; ++j)
                t.shifted[i](a, j) =
                    static_cast<double>(t.points[i][a][j]) - to_double(t.center[i][j]);
    }
    return t;
}

double SupportTuple::delta0(int i) const {
    double d = 0.0;
    for (int a = 0; a < Si[i]; ++a) d = std::max(d, shifted[i].row(a).norm());
    return d;
}

Eigen::VectorXd SupportTuple::deltas0() const {
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = delta0(i);
    return d;
}

double SupportTuple::diameter(int i) const {
    double best = 0.0;
    const auto& A = points[i];
    for (size_t a = 0; a < A.size(); ++a)
        for (size_t b = a + 1; b < A.size(); ++b) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) {
                double d = static_cast<double>(A[a][j] - A[b][j]);
                s += d * d;
            }
            best = std::max(best, s);
        }
    return std::sqrt(best);
}

SupportsPtr make_supports(int n, std::vector<std::vector<VecZ>> pts,
                          std::vector<std::vector<double>> weights) {
    return std::make_shared<const SupportTuple>(
        SupportTuple::create(n, std::move(pts), std::move(weights)));
}

}  // namespace toric
