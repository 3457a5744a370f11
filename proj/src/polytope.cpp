#include "toric/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "toric/errors.hpp"
#include "toric/lattice.hpp"

namespace toric::polytope {

namespace {

using intlinalg::MatZ;

// ----------------------------------------------------------------------------
// Exact phase-1 simplex: feasibility of { x >= 0 : A x = b }.
// Rows are few (dimension + 1), so a dense rational tableau is fine.
bool lp_feasible(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
    const size_t m = a.size();
    const size_t nvar = m == 0 ? 0 : a[0].size();
    for (size_t r = 0; r < m; ++r) {
        if (b[r] < Rat(0)) {
            b[r] = -b[r];
            for (auto& v : a[r]) v = -v;
        }
    }
    // Tableau over variables [x | artificials], minimizing the artificial sum.
    const size_t total = nvar + m;
    std::vector<std::vector<Rat>> t(m, std::vector<Rat>(total + 1, Rat(0)));
    std::vector<size_t> basis(m);
    for (size_t r = 0; r < m; ++r) {
        for (size_t c = 0; c < nvar; ++c) t[r][c] = a[r][c];
        t[r][nvar + r] = Rat(1);
        t[r][total] = b[r];
        basis[r] = nvar + r;
    }
    std::vector<Rat> cost(total + 1, Rat(0));
    for (size_t r = 0; r < m; ++r)
        for (size_t c = 0; c <= total; ++c) cost[c] += t[r][c];  // artificial cost rows summed

    while (true) {
        // Bland's rule on the structural variables; artificials never re-enter.
        size_t enter = total;
        for (size_t c = 0; c < nvar; ++c)
            if (cost[c] > Rat(0)) { enter = c; break; }
        if (enter == total) break;
        size_t leave = m;
        Rat best_ratio(0);
        for (size_t r = 0; r < m; ++r) {
            if (t[r][enter] <= Rat(0)) continue;
            Rat ratio = t[r][total] / t[r][enter];
            if (leave == m || ratio < best_ratio ||
                (ratio == best_ratio && basis[r] < basis[leave])) {
                leave = r;
                best_ratio = ratio;
            }
        }
        if (leave == m) break;  // unbounded; cannot happen for phase 1
        Rat p = t[leave][enter];
        for (size_t c = 0; c <= total; ++c) t[leave][c] /= p;
        for (size_t r = 0; r < m; ++r) {
            if (r == leave || t[r][enter] == Rat(0)) continue;
            Rat f = t[r][enter];
            for (size_t c = 0; c <= total; ++c) t[r][c] -= f * t[leave][c];
        }
        Rat f = cost[enter];
        for (size_t c = 0; c <= total; ++c) cost[c] -= f * t[leave][c];
        basis[leave] = enter;
    }
    return cost[total] == Rat(0);
}

Int dot(const VecZ& a, const VecZ& b) {
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += Int(a[i]) * Int(b[i]);
    return s;
}

VecZ to_vecz(const std::vector<Int>& v) {
    VecZ out(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] > std::numeric_limits<std::int64_t>::max() ||
            v[i] < std::numeric_limits<std::int64_t>::min())
            throw InternalInconsistency("lattice coordinate exceeds int64 range");
        out[i] = v[i].convert_to<std::int64_t>();
    }
    return out;
}

// Primitive difference directions of the hull vertices, deduplicated up to sign.
std::vector<VecZ> edge_directions(const std::vector<std::vector<VecZ>>& sets) {
    std::set<VecZ> seen;
    for (const auto& pts : sets) {
        auto hull = hull_vertices(pts);
        for (size_t a = 0; a < hull.size(); ++a)
            for (size_t b = a + 1; b < hull.size(); ++b) {
                std::vector<Int> d(pts[0].size());
                for (size_t j = 0; j < d.size(); ++j)
                    d[j] = Int(pts[hull[a]][j]) - Int(pts[hull[b]][j]);
                seen.insert(to_vecz(intlinalg::primitive(std::move(d))));
            }
    }
    return {seen.begin(), seen.end()};
}

// Dimension of the linear span of all face-difference vectors at direction xi.
int face_span_dim(const std::vector<std::vector<VecZ>>& sets, const VecZ& xi) {
    MatZ diffs;
    for (const auto& pts : sets) {
        auto sv = support_value(pts, xi);
        for (size_t k = 1; k < sv.face.size(); ++k) {
            std::vector<Int> d(xi.size());
            for (size_t j = 0; j < xi.size(); ++j)
                d[j] = Int(pts[sv.face[k]][j]) - Int(pts[sv.face[0]][j]);
            diffs.push_back(std::move(d));
        }
    }
    if (diffs.empty()) return 0;
    return intlinalg::rank(diffs);
}

void combinations(int m, int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> idx(k);
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == k) {
            fn(idx);
            return;
        }
        for (int i = start; i <= m - (k - depth); ++i) {
            idx[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    if (k == 0)
        fn({});
    else if (m >= k)
        rec(0, 0);
}

// Translate the face at xi into coordinates of the kernel lattice basis.
std::vector<VecZ> face_in_kernel_coords(const std::vector<VecZ>& pts, const VecZ& xi,
                                        const MatZ& kernel_cols) {
    auto sv = support_value(pts, xi);
    std::vector<VecZ> out;
    out.reserve(sv.face.size());
    const int dim = static_cast<int>(xi.size());
    const VecZ& base = pts[sv.face[0]];
    for (int idx : sv.face) {
        std::vector<Int> d(dim);
        for (int j = 0; j < dim; ++j) d[j] = Int(pts[idx][j]) - Int(base[j]);
        auto coords = intlinalg::solve_columns(kernel_cols, d);
        if (coords.empty())
            throw InternalInconsistency("face point not in kernel lattice");
        std::vector<Int> c(coords.size());
        for (size_t k = 0; k < coords.size(); ++k) {
            if (coords[k].denominator() != 1)
                throw InternalInconsistency("non-integral kernel coordinate");
            c[k] = coords[k].numerator();
        }
        out.push_back(to_vecz(c));
    }
    return out;
}

MatZ kernel_of_ray(const VecZ& xi) {
    MatZ m(1, std::vector<Int>(xi.size()));
    for (size_t j = 0; j < xi.size(); ++j) m[0][j] = Int(xi[j]);
    return intlinalg::kernel_lattice(m);
}

// d! V(K_1, ..., K_d) of d integer point sets in Z^d, exact.
Int nv_rec(std::vector<std::vector<VecZ>> sets, int dim) {
    if (dim == 0) return 1;
    if (static_cast<int>(sets.size()) != dim)
        throw InternalInconsistency("mixed volume needs dim point sets");
    if (dim == 1) {
        std::int64_t lo = sets[0][0][0], hi = lo;
        for (const auto& p : sets[0]) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        return Int(hi - lo);
    }
    auto rays = fan_rays_of_sets(sets, dim);
    Int total = 0;
    const auto& last = sets.back();
    std::vector<std::vector<VecZ>> rest(sets.begin(), sets.end() - 1);
    for (const auto& ray : rays) {
        Int lambda = support_value(last, ray.xi).lambda;
        MatZ kernel = kernel_of_ray(ray.xi);
        std::vector<std::vector<VecZ>> faces;
        faces.reserve(rest.size());
        for (const auto& pts : rest)
            faces.push_back(face_in_kernel_coords(pts, ray.xi, kernel));
        total += lambda * nv_rec(std::move(faces), dim - 1);
    }
    return total;
}

// Translate each set so its first point is the origin; keeps magnitudes small
// and is exact by translation invariance.
std::vector<std::vector<VecZ>> rebased(std::vector<std::vector<VecZ>> sets) {
    for (auto& pts : sets) {
        VecZ base = pts[0];
        for (auto& p : pts)
            for (size_t j = 0; j < p.size(); ++j) p[j] -= base[j];
    }
    return sets;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// Minkowski sum of the hulls, as a point set (hull vertices only).
std::vector<VecZ> minkowski_sum_points(const std::vector<std::vector<VecZ>>& sets) {
    std::vector<VecZ> acc{VecZ(sets[0][0].size(), 0)};
    for (const auto& pts : sets) {
        auto hull = hull_vertices(pts);
        std::set<VecZ> next;
        for (const auto& p : acc)
            for (int h : hull) {
                VecZ s(p.size());
                for (size_t j = 0; j < p.size(); ++j) s[j] = p[j] + pts[h][j];
                next.insert(std::move(s));
            }
        acc.assign(next.begin(), next.end());
        auto keep = hull_vertices(acc);
        std::vector<VecZ> filtered;
        filtered.reserve(keep.size());
        for (int k : keep) filtered.push_back(acc[k]);
        acc = std::move(filtered);
    }
    return acc;
}

FacetGap facet_gap_impl(const SupportTuple& supports, bool lenient) {
    auto rays = fan_rays(supports);
    FacetGap out;
    out.eta_i.assign(supports.n, std::numeric_limits<double>::infinity());
    for (const auto& ray : rays) {
        FacetGapRow row;
        row.ray = ray;
        double norm = std::sqrt(to_double(ray.norm_sq));
        for (int i = 0; i < supports.n; ++i) {
            const auto& pts = supports.points[i];
            auto sv = support_value(pts, ray.xi);
            if (sv.face.size() == pts.size()) {
                if (!lenient) throw DegenerateSupport(i, ray.xi);
                row.eta_i.push_back(std::numeric_limits<double>::infinity());
                continue;
            }
            // Second largest value of a.xi off the face.
            Int second = 0;
            bool first = true;
            std::set<int> on_face(sv.face.begin(), sv.face.end());
            for (size_t a = 0; a < pts.size(); ++a) {
                if (on_face.count(static_cast<int>(a))) continue;
                Int v = dot(pts[a], ray.xi);
                if (first || v > second) second = v, first = false;
            }
            double gap = to_double(Int(sv.lambda - second)) / norm;
            row.eta_i.push_back(gap);
            out.eta_i[i] = std::min(out.eta_i[i], gap);
        }
        out.per_ray.push_back(std::move(row));
    }
    out.eta = *std::min_element(out.eta_i.begin(), out.eta_i.end());
    return out;
}

}  // namespace

std::vector<int> hull_vertices(const std::vector<VecZ>& pts) {
    const int dim = static_cast<int>(pts[0].size());
    std::vector<int> verts;
    if (pts.size() == 1) return {0};
    for (size_t p = 0; p < pts.size(); ++p) {
        // p is extreme iff p not in conv(others).
        std::vector<std::vector<Rat>> a(dim + 1);
        std::vector<Rat> b(dim + 1);
        for (int r = 0; r < dim; ++r) {
            for (size_t q = 0; q < pts.size(); ++q)
                if (q != p) a[r].push_back(Rat(Int(pts[q][r])));
            b[r] = Rat(Int(pts[p][r]));
        }
        a[dim].assign(pts.size() - 1, Rat(1));
        b[dim] = Rat(1);
        if (!lp_feasible(std::move(a), std::move(b))) verts.push_back(static_cast<int>(p));
    }
    return verts;
}

SupportValue support_value(const std::vector<VecZ>& pts, const VecZ& xi) {
    SupportValue sv;
    sv.lambda = dot(pts[0], xi);
    sv.face = {0};
    for (size_t a = 1; a < pts.size(); ++a) {
        Int v = dot(pts[a], xi);
        if (v > sv.lambda) {
            sv.lambda = v;
            sv.face = {static_cast<int>(a)};
        } else if (v == sv.lambda) {
            sv.face.push_back(static_cast<int>(a));
        }
    }
    return sv;
}

std::vector<Ray> fan_rays_of_sets(const std::vector<std::vector<VecZ>>& sets, int dim) {
    std::vector<Ray> rays;
    if (dim == 1) {
        bool wide = false;
        for (const auto& pts : sets) {
            auto [mn, mx] = std::minmax_element(
                pts.begin(), pts.end(),
                [](const VecZ& a, const VecZ& b) { return a[0] < b[0]; });
            if ((*mn)[0] != (*mx)[0]) wide = true;
        }
        if (wide) {
            rays.push_back({{1}, 1});
            rays.push_back({{-1}, 1});
        }
        return rays;
    }
    auto dirs = edge_directions(sets);
    std::set<VecZ> found;
    combinations(static_cast<int>(dirs.size()), dim - 1, [&](const std::vector<int>& idx) {
        MatZ m;
        m.reserve(idx.size());
        for (int i : idx) {
            std::vector<Int> row(dim);
            for (int j = 0; j < dim; ++j) row[j] = Int(dirs[i][j]);
            m.push_back(std::move(row));
        }
        MatZ kernel = intlinalg::kernel_lattice(m);
        if (kernel.empty() || kernel[0].size() != 1) return;  // not rank d-1
        std::vector<Int> xi_int(dim);
        for (int j = 0; j < dim; ++j) xi_int[j] = kernel[j][0];
        VecZ xi = to_vecz(intlinalg::primitive(std::move(xi_int)));
        for (int sign = 0; sign < 2; ++sign) {
            VecZ cand = xi;
            if (sign) for (auto& v : cand) v = -v;
            if (found.count(cand)) continue;
            if (face_span_dim(sets, cand) == dim - 1) found.insert(cand);
        }
    });
    for (const auto& xi : found) {
        Int nsq = 0;
        for (auto v : xi) nsq += Int(v) * Int(v);
        rays.push_back({xi, nsq});
    }
    return rays;
}

std::vector<Ray> fan_rays(const SupportTuple& supports) {
    lattice::lattice_from_supports(supports);  // RankDeficient check
    return fan_rays_of_sets(supports.points, supports.n);
}

FacetGap facet_gap(const SupportTuple& supports) { return facet_gap_impl(supports, false); }
FacetGap facet_gap_lenient(const SupportTuple& supports) {
    return facet_gap_impl(supports, true);
}

bool strongly_mixed(const SupportTuple& supports) {
    auto rays = fan_rays(supports);
    for (const auto& ray : rays) {
        bool has_singleton = false;
        for (int i = 0; i < supports.n && !has_singleton; ++i)
            has_singleton = support_value(supports.points[i], ray.xi).face.size() == 1;
        if (!has_singleton) return false;
    }
    return true;
}

Int mixed_volume_sets(const std::vector<std::vector<VecZ>>& sets, int dim) {
    return nv_rec(rebased(sets), dim);
}

Int mixed_volume(const SupportTuple& supports) {
    return mixed_volume_sets(supports.points, supports.n);
}

double mixed_area(const SupportTuple& supports) {
    const int n = supports.n;
    auto sets = rebased(supports.points);
    double total = 0.0;
    if (n == 1) return 2.0;  // V'(A) = Vol_1(B^1)
    auto rays = fan_rays_of_sets(sets, n);
    for (const auto& ray : rays) {
        MatZ kernel = kernel_of_ray(ray.xi);
        std::vector<std::vector<VecZ>> faces;
        faces.reserve(n);
        for (const auto& pts : sets) faces.push_back(face_in_kernel_coords(pts, ray.xi, kernel));
        Int coeff = 0;
        for (int skip = 0; skip < n; ++skip) {
            std::vector<std::vector<VecZ>> tuple;
            tuple.reserve(n - 1);
            for (int j = 0; j < n; ++j)
                if (j != skip) tuple.push_back(faces[j]);
            coeff += nv_rec(std::move(tuple), n - 1);
        }
        // Covolume of the kernel lattice equals ||xi|| for primitive xi.
        total += to_double(coeff) * std::sqrt(to_double(ray.norm_sq));
    }
    return total / (n * factorial(n - 1));
}

std::vector<double> v_coefficients(const SupportTuple& supports) {
    const int n = supports.n;
    std::vector<double> v(n + 1, 0.0);
    if (n == 1) {
        v[0] = 2.0;
        return v;
    }
    auto sets = rebased(supports.points);
    auto total_pts = minkowski_sum_points(sets);
    auto rays = fan_rays_of_sets(sets, n);
    std::vector<double> coef(n, 0.0);  // coefficient of t^k before the k! factor
    for (const auto& ray : rays) {
        MatZ kernel = kernel_of_ray(ray.xi);
        std::vector<std::vector<VecZ>> faces;
        for (const auto& pts : sets) faces.push_back(face_in_kernel_coords(pts, ray.xi, kernel));
        auto total_face = face_in_kernel_coords(total_pts, ray.xi, kernel);
        double norm = std::sqrt(to_double(ray.norm_sq));
        for (int skip = 0; skip < n; ++skip) {
            std::vector<int> slots;
            for (int j = 0; j < n; ++j)
                if (j != skip) slots.push_back(j);
            const int m = n - 1;
            for (int mask = 0; mask < (1 << m); ++mask) {
                std::vector<std::vector<VecZ>> tuple;
                tuple.reserve(m);
                int k = 0;
                for (int b = 0; b < m; ++b) {
                    if (mask & (1 << b)) {
                        tuple.push_back(total_face);
                        ++k;
                    } else {
                        tuple.push_back(faces[slots[b]]);
                    }
                }
                coef[k] += to_double(nv_rec(std::move(tuple), m)) * norm;
            }
        }
    }
    for (int k = 0; k < n; ++k) v[k] = factorial(k) * coef[k] / (n * factorial(n - 1));
    return v;
}

double dr_bound(const SupportTuple& supports) {
    auto rays = fan_rays(supports);
    const double nrays = static_cast<double>(rays.size());
    if (strongly_mixed(supports))
        return std::min(nrays, static_cast<double>(supports.S));
    auto v = v_coefficients(supports);
    double diam = 0.0;
    for (int i = 0; i < supports.n; ++i) diam = std::max(diam, supports.diameter(i));
    double vmax = 0.0;
    double nfact = factorial(supports.n);
    for (size_t k = 0; k < v.size(); ++k)
        vmax = std::max(vmax, std::exp(static_cast<double>(k)) * nfact * v[k]);
    Int det = lattice::lattice_det(lattice::lattice_from_supports(supports));
    return diam / (2.0 * to_double(det)) * vmax * nrays;
}

Int bkk_count(const SupportTuple& supports) {
    Int nv = mixed_volume(supports);
    Int det = lattice::lattice_det(lattice::lattice_from_supports(supports));
    if (nv % det != 0)
        throw InternalInconsistency("det Lambda does not divide n!V");
    return nv / det;
}

double q_invariant(const SupportTuple& supports, const Eigen::VectorXd& deltas) {
    auto gap = facet_gap(supports);
    if (!(gap.eta > 0.0)) throw ZeroEta();
    double nv = to_double(mixed_volume(supports));
    double nfact = factorial(supports.n);
    double nvp = nfact * mixed_area(supports);
    Int det = lattice::lattice_det(lattice::lattice_from_supports(supports));
    return deltas.squaredNorm() / (gap.eta * gap.eta) *
           std::max(nv, nvp * gap.eta) / to_double(det);
}

InvariantReport compute_invariants(const SupportTuple& supports) {
    InvariantReport rep;
    rep.nV = mixed_volume(supports);
    auto basis = lattice::lattice_from_supports(supports);
    rep.detLambda = lattice::lattice_det(basis);
    rep.bkk = bkk_count(supports);
    rep.mixed_area = mixed_area(supports);
    rep.strongly_mixed = strongly_mixed(supports);
    rep.deltas = supports.deltas0();
    rep.v = v_coefficients(supports);
    rep.dr = dr_bound(supports);
    rep.ray_count = static_cast<int>(fan_rays(supports).size());
    try {
        auto gap = facet_gap(supports);
        rep.eta_per_ray = gap.per_ray;
        rep.eta_i = gap.eta_i;
        rep.eta = gap.eta;
        rep.Q = q_invariant(supports, rep.deltas);
    } catch (const DegenerateSupport&) {
        rep.eta_per_ray = facet_gap_lenient(supports).per_ray;
    }
    return rep;
}

}  // namespace toric::polytope
