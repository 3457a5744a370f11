#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "testutil.hpp"
#include "toric/polytope.hpp"

using namespace toric;

namespace {

// --- independent 2D oracle ---------------------------------------------------
// monotone-chain hull + shoelace; NV2 = Area(A+B) - Area(A) - Area(B).

std::vector<VecZ> hull2d(std::vector<VecZ> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    auto cross = [](const VecZ& o, const VecZ& a, const VecZ& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<VecZ> h(2 * pts.size());
    size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
        h[k++] = p;
    }
    for (size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

std::int64_t twice_area(const std::vector<VecZ>& pts) {
    auto h = hull2d(pts);
    if (h.size() < 3) return 0;
    std::int64_t s = 0;
    for (size_t i = 0; i < h.size(); ++i) {
        const auto& p = h[i];
        const auto& q = h[(i + 1) % h.size()];
        s += p[0] * q[1] - p[1] * q[0];
    }
    return s < 0 ? -s : s;
}

std::vector<VecZ> mink_sum(const std::vector<VecZ>& a, const std::vector<VecZ>& b) {
    std::vector<VecZ> out;
    for (const auto& p : a)
        for (const auto& q : b) out.push_back({p[0] + q[0], p[1] + q[1]});
    return out;
}

Int nv2_oracle(const std::vector<VecZ>& a, const std::vector<VecZ>& b) {
    std::int64_t v = twice_area(mink_sum(a, b)) - twice_area(a) - twice_area(b);
    REQUIRE(v % 2 == 0);
    return Int(v / 2);
}

// Brute-force extreme test in 2D: p fails iff it lies inside a triangle or on
// a segment of the other points (exact integer orientation tests).
bool extreme_by_bruteforce(const std::vector<VecZ>& pts, size_t p) {
    auto orient = [](const VecZ& a, const VecZ& b, const VecZ& c) {
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    };
    auto on_segment = [&](const VecZ& a, const VecZ& b, const VecZ& c) {
        return orient(a, b, c) == 0 && std::min(a[0], b[0]) <= c[0] &&
               c[0] <= std::max(a[0], b[0]) && std::min(a[1], b[1]) <= c[1] &&
               c[1] <= std::max(a[1], b[1]);
    };
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) {
            if (i == p || j == p) continue;
            if (on_segment(pts[i], pts[j], pts[p])) return false;
            for (size_t k = j + 1; k < pts.size(); ++k) {
                if (k == p || orient(pts[i], pts[j], pts[k]) == 0) continue;
                std::int64_t d1 = orient(pts[i], pts[j], pts[p]);
                std::int64_t d2 = orient(pts[j], pts[k], pts[p]);
                std::int64_t d3 = orient(pts[k], pts[i], pts[p]);
                bool neg = d1 < 0 || d2 < 0 || d3 < 0;
                bool pos = d1 > 0 || d2 > 0 || d3 > 0;
                if (!(neg && pos)) return false;
            }
        }
    return true;
}

std::set<VecZ> ray_set(const std::vector<polytope::Ray>& rays) {
    std::set<VecZ> s;
    for (const auto& r : rays) s.insert(r.xi);
    return s;
}

}  // namespace

TEST_CASE("hull vertices") {
    CHECK(polytope::hull_vertices({{0}, {1}, {2}, {3}}) == std::vector<int>{0, 3});
    CHECK(polytope::hull_vertices({{0, 0}, {1, 0}, {0, 1}, {1, 1}}) ==
          std::vector<int>{0, 1, 2, 3});
    CHECK(polytope::hull_vertices({{0, 0}, {1, 0}, {2, 0}, {1, 1}}) ==
          std::vector<int>{0, 2, 3});

    Rng rng(3);
    for (int rep = 0; rep < 30; ++rep) {
        std::set<VecZ> uniq;
        while (uniq.size() < 7)
            uniq.insert({static_cast<std::int64_t>(rng.next_u64() % 5),
                         static_cast<std::int64_t>(rng.next_u64() % 5)});
        std::vector<VecZ> pts(uniq.begin(), uniq.end());
        auto verts = polytope::hull_vertices(pts);
        std::set<int> vset(verts.begin(), verts.end());
        for (size_t p = 0; p < pts.size(); ++p)
            CHECK(vset.count(static_cast<int>(p)) ==
                  (extreme_by_bruteforce(pts, p) ? 1u : 0u));
    }
}

TEST_CASE("support value") {
    SUBCASE("interval") {
        auto sv = polytope::support_value({{0}, {1}, {2}, {3}}, {1});
        CHECK(sv.lambda == Int(3));
        CHECK(sv.face == std::vector<int>{3});
    }
    SUBCASE("square at e1") {
        auto sv = polytope::support_value({{0, 0}, {2, 0}, {0, 2}, {2, 2}}, {1, 0});
        CHECK(sv.lambda == Int(2));
        CHECK(sv.face == std::vector<int>{1, 3});
    }
    SUBCASE("directional width is nonnegative") {
        Rng rng(9);
        for (int rep = 0; rep < 50; ++rep) {
            auto sup = testutil::random_supports(2, rng);
            VecZ xi{static_cast<std::int64_t>(rng.next_u64() % 9) - 4,
                    static_cast<std::int64_t>(rng.next_u64() % 9) - 4};
            if (xi[0] == 0 && xi[1] == 0) xi[0] = 1;
            VecZ neg{-xi[0], -xi[1]};
            auto a = polytope::support_value(sup->points[0], xi);
            auto b = polytope::support_value(sup->points[0], neg);
            CHECK(a.lambda + b.lambda >= 0);
        }
    }
}

TEST_CASE("fan rays") {
    SUBCASE("dimension one") {
        auto sup = make_supports(1, {{{0}, {2}, {5}}});
        auto rays = ray_set(polytope::fan_rays(*sup));
        CHECK(rays == std::set<VecZ>{{1}, {-1}});
    }
    SUBCASE("quartic pair has the seven expected rays") {
        auto rays = ray_set(polytope::fan_rays(*testutil::quartic_pair_supports()));
        std::set<VecZ> expected{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {-1, -1}, {-1, 2}, {2, -1}};
        CHECK(rays == expected);
    }
    SUBCASE("standard simplex in n dimensions") {
        for (int n : {2, 3, 4}) {
            std::vector<VecZ> simplex{VecZ(n, 0)};
            for (int j = 0; j < n; ++j) {
                VecZ e(n, 0);
                e[j] = 1;
                simplex.push_back(e);
            }
            auto sup = make_supports(n, std::vector<std::vector<VecZ>>(n, simplex));
            auto rays = ray_set(polytope::fan_rays(*sup));
            std::set<VecZ> expected;
            for (int j = 0; j < n; ++j) {
                VecZ e(n, 0);
                e[j] = -1;
                expected.insert(e);
            }
            expected.insert(VecZ(n, 1));
            CHECK(rays == expected);
        }
    }
}

TEST_CASE("facet gap") {
    SUBCASE("quartic pair matches the exact values") {
        auto gap = polytope::facet_gap(*testutil::quartic_pair_supports());
        // eta_1 = 2/sqrt(5), eta_2 = 2, eta = 2/sqrt(5); squared comparison.
        CHECK(gap.eta_i[0] * gap.eta_i[0] == doctest::Approx(4.0 / 5.0).epsilon(1e-14));
        CHECK(gap.eta_i[1] == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(gap.eta == doctest::Approx(2.0 * std::sqrt(5.0) / 5.0).epsilon(1e-14));
    }
    SUBCASE("consecutive integers") {
        auto sup = make_supports(1, {{{0}, {1}, {2}, {3}}});
        CHECK(polytope::facet_gap(*sup).eta == doctest::Approx(1.0));
    }
    SUBCASE("uniform scaling scales eta") {
        Rng rng(21);
        for (int rep = 0; rep < 10; ++rep) {
            auto sup = testutil::random_supports(2, rng);
            std::vector<std::vector<VecZ>> scaled = sup->points;
            for (auto& eq : scaled)
                for (auto& a : eq)
                    for (auto& v : a) v *= 4;
            try {
                auto g1 = polytope::facet_gap(*sup);
                auto g4 = polytope::facet_gap(*make_supports(2, scaled));
                CHECK(g4.eta == doctest::Approx(4.0 * g1.eta).epsilon(1e-12));
            } catch (const DegenerateSupport&) {
                // gap undefined either way
            }
        }
    }
    SUBCASE("cube-face tuple is degenerate") {
        CHECK_THROWS_AS(polytope::facet_gap(*testutil::cube_face_supports()),
                        DegenerateSupport);
        auto lenient = polytope::facet_gap_lenient(*testutil::cube_face_supports());
        CHECK(lenient.eta == doctest::Approx(1.0));
    }
    SUBCASE("eta bounded by twice the radius") {
        Rng rng(22);
        for (int rep = 0; rep < 25; ++rep) {
            auto sup = testutil::random_supports(2, rng);
            try {
                auto gap = polytope::facet_gap(*sup);
                for (int i = 0; i < 2; ++i) CHECK(gap.eta <= 2.0 * sup->delta0(i) + 1e-12);
            } catch (const DegenerateSupport&) {
            }
        }
    }
}

TEST_CASE("strongly mixed") {
    SUBCASE("unmixed tuples are not strongly mixed") {
        Rng rng(31);
        for (int rep = 0; rep < 10; ++rep) {
            auto pts = testutil::random_full_dim_support(2, rng);
            auto sup = make_supports(2, {pts, pts});
            CHECK_FALSE(polytope::strongly_mixed(*sup));
        }
    }
    SUBCASE("independent segments are strongly mixed") {
        auto sup = make_supports(2, {{{0, 0}, {1, 0}}, {{0, 0}, {0, 1}}});
        CHECK(polytope::strongly_mixed(*sup));
        CHECK(polytope::fan_rays(*sup).size() == 4);
    }
    SUBCASE("cube-face tuple is not strongly mixed") {
        CHECK_FALSE(polytope::strongly_mixed(*testutil::cube_face_supports()));
    }
}

TEST_CASE("mixed volume") {
    SUBCASE("cube-face tuple") {
        CHECK(polytope::mixed_volume(*testutil::cube_face_supports()) == Int(2));
    }
    SUBCASE("scaled dense simplex") {
        auto sup = make_supports(2, {{{0, 0}, {3, 0}, {0, 3}}, {{0, 0}, {3, 0}, {0, 3}}});
        CHECK(polytope::mixed_volume(*sup) == Int(9));
    }
    SUBCASE("single-point slot kills the volume") {
        CHECK(polytope::mixed_volume_sets({{{0, 0}, {1, 0}, {0, 1}}, {{2, 1}}}, 2) == Int(0));
        CHECK(polytope::mixed_volume_sets({{{2, 1}}, {{0, 0}, {1, 0}, {0, 1}}}, 2) == Int(0));
    }
    SUBCASE("agrees with the shoelace oracle") {
        Rng rng(41);
        for (int rep = 0; rep < 40; ++rep) {
            auto sup = testutil::random_supports(2, rng);
            CHECK(polytope::mixed_volume(*sup) == nv2_oracle(sup->points[0], sup->points[1]));
        }
    }
    SUBCASE("multilinearity in the first slot") {
        Rng rng(43);
        for (int rep = 0; rep < 20; ++rep) {
            auto s1 = testutil::random_supports(2, rng);
            auto s2 = testutil::random_supports(2, rng);
            auto sum = mink_sum(s1->points[0], s2->points[0]);
            Int lhs = polytope::mixed_volume_sets({sum, s1->points[1]}, 2);
            Int rhs = polytope::mixed_volume_sets({s1->points[0], s1->points[1]}, 2) +
                      polytope::mixed_volume_sets({s2->points[0], s1->points[1]}, 2);
            CHECK(lhs == rhs);
        }
    }
    SUBCASE("symmetry under slot permutation") {
        Rng rng(47);
        for (int rep = 0; rep < 10; ++rep) {
            auto sup = testutil::random_supports(3, rng, 4);
            Int v = polytope::mixed_volume(*sup);
            auto perm = sup->points;
            std::swap(perm[0], perm[2]);
            CHECK(polytope::mixed_volume_sets(perm, 3) == v);
        }
    }
    SUBCASE("translation invariance") {
        Rng rng(53);
        for (int rep = 0; rep < 15; ++rep) {
            auto sup = testutil::random_supports(2, rng);
            auto shifted = sup->points;
            for (auto& a : shifted[0]) {
                a[0] += 7;
                a[1] -= 3;
            }
            CHECK(polytope::mixed_volume_sets(shifted, 2) == polytope::mixed_volume(*sup));
        }
    }
    SUBCASE("monotonicity under point insertion") {
        Rng rng(59);
        for (int rep = 0; rep < 15; ++rep) {
            auto sup = testutil::random_supports(2, rng);
            auto bigger = sup->points;
            bigger[0].push_back({static_cast<std::int64_t>(rng.next_u64() % 5),
                                 static_cast<std::int64_t>(rng.next_u64() % 5)});
            std::set<VecZ> uniq(bigger[0].begin(), bigger[0].end());
            bigger[0].assign(uniq.begin(), uniq.end());
            CHECK(polytope::mixed_volume_sets(bigger, 2) >= polytope::mixed_volume(*sup));
        }
    }
}

TEST_CASE("mixed area") {
    SUBCASE("cube-face tuple") {
        CHECK(polytope::mixed_area(*testutil::cube_face_supports()) ==
              doctest::Approx(3.0).epsilon(1e-15));
    }
    SUBCASE("scaled dense simplex") {
        auto sup = make_supports(2, {{{0, 0}, {3, 0}, {0, 3}}, {{0, 0}, {3, 0}, {0, 3}}});
        CHECK(polytope::mixed_area(*sup) ==
              doctest::Approx(3.0 * (2.0 + std::sqrt(2.0))).epsilon(1e-13));
    }
    SUBCASE("dimension one") {
        auto sup = make_supports(1, {{{0}, {1}, {2}, {3}}});
        CHECK(polytope::mixed_area(*sup) == doctest::Approx(2.0));
    }
    SUBCASE("isoperimetric bound, unmixed") {
        Rng rng(61);
        for (int rep = 0; rep < 15; ++rep) {
            auto pts = testutil::random_full_dim_support(2, rng);
            auto sup = make_supports(2, {pts, pts});
            double vol = to_double(polytope::mixed_volume(*sup)) / 2.0;
            if (vol == 0.0) continue;
            double vp = polytope::mixed_area(*sup);
            CHECK(vp + 1e-9 >= 2.0 * std::sqrt(std::numbers::pi * vol));
        }
    }
    SUBCASE("translation invariance") {
        Rng rng(62);
        for (int rep = 0; rep < 10; ++rep) {
            auto sup = testutil::random_supports(2, rng);
            auto shifted = sup->points;
            for (auto& a : shifted[1]) {
                a[0] -= 2;
                a[1] += 5;
            }
            auto sup2 = make_supports(2, shifted);
            CHECK(polytope::mixed_area(*sup2) ==
                  doctest::Approx(polytope::mixed_area(*sup)).epsilon(1e-12));
        }
    }
}

TEST_CASE("v coefficients") {
    SUBCASE("dimension one is constant") {
        auto sup = make_supports(1, {{{0}, {1}, {2}}});
        auto v = polytope::v_coefficients(*sup);
        CHECK(v.size() == 2);
        CHECK(v[0] == doctest::Approx(2.0));
        CHECK(v[1] == doctest::Approx(0.0));
    }
    SUBCASE("unmixed identity in two dimensions") {
        // v(t) = (1+2t) V', so v_0 = V', v_1 = 2 V'.
        Rng rng(67);
        for (int rep = 0; rep < 10; ++rep) {
            auto pts = testutil::random_full_dim_support(2, rng);
            auto sup = make_supports(2, {pts, pts});
            auto v = polytope::v_coefficients(*sup);
            double vp = polytope::mixed_area(*sup);
            CHECK(v[0] == doctest::Approx(vp).epsilon(1e-10));
            CHECK(v[1] == doctest::Approx(2.0 * vp).epsilon(1e-10));
            CHECK(v[2] == doctest::Approx(0.0));
        }
    }
    SUBCASE("unmixed identity in three dimensions") {
        // v_k = k! C(2,k) 3^k V'.
        std::vector<VecZ> pts{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}};
        auto sup = make_supports(3, {pts, pts, pts});
        auto v = polytope::v_coefficients(*sup);
        double vp = polytope::mixed_area(*sup);
        CHECK(v[0] == doctest::Approx(vp).epsilon(1e-10));
        CHECK(v[1] == doctest::Approx(6.0 * vp).epsilon(1e-10));
        CHECK(v[2] == doctest::Approx(18.0 * vp).epsilon(1e-10));
        CHECK(v[3] == doctest::Approx(0.0));
    }
    SUBCASE("v0 equals the mixed area on the cube-face tuple") {
        auto sup = testutil::cube_face_supports();
        auto v = polytope::v_coefficients(*sup);
        CHECK(v[0] == doctest::Approx(polytope::mixed_area(*sup)).epsilon(1e-12));
    }
}

TEST_CASE("dr bound") {
    SUBCASE("strongly mixed pair") {
        auto sup = make_supports(2, {{{0, 0}, {1, 0}}, {{0, 0}, {0, 1}}});
        CHECK(polytope::dr_bound(*sup) == doctest::Approx(4.0));
    }
    SUBCASE("one-dimensional segment") {
        auto sup = make_supports(1, {{{0}, {1}}});
        CHECK(polytope::dr_bound(*sup) == doctest::Approx(2.0));
    }
    SUBCASE("cube-face tuple, general branch") {
        auto sup = testutil::cube_face_supports();
        auto v = polytope::v_coefficients(*sup);
        double vmax = 0.0;
        for (size_t k = 0; k < v.size(); ++k)
            vmax = std::max(vmax, std::exp(static_cast<double>(k)) * 6.0 * v[k]);
        double expected = std::sqrt(2.0) / 2.0 * vmax * 6.0;  // diam sqrt(2), det 1, 6 rays
        CHECK(polytope::dr_bound(*sup) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("bkk count") {
    CHECK(polytope::bkk_count(*testutil::cube_face_supports()) == Int(2));
    SUBCASE("biquadratic reduction") {
        for (std::int64_t c : {2, 3}) {
            for (std::int64_t d : {2, 3}) {
                std::vector<VecZ> pts;
                for (std::int64_t k = 0; k <= c; ++k) pts.push_back({k * d});
                auto sup = make_supports(1, {pts});
                CHECK(polytope::bkk_count(*sup) == Int(c));
            }
        }
    }
    SUBCASE("dense Bezout") {
        // Full degree-3 supports: the difference lattice is Z^2, so all nine
        // Bezout roots are distinct in M.
        std::vector<VecZ> dense;
        for (std::int64_t a = 0; a <= 3; ++a)
            for (std::int64_t b = 0; a + b <= 3; ++b) dense.push_back({a, b});
        auto sup = make_supports(2, {dense, dense});
        CHECK(polytope::mixed_volume(*sup) == Int(9));
        CHECK(polytope::bkk_count(*sup) == Int(9));
        // The scaled vertex set has the same hull but a coarser lattice.
        auto vertex_sup =
            make_supports(2, {{{0, 0}, {3, 0}, {0, 3}}, {{0, 0}, {3, 0}, {0, 3}}});
        CHECK(lattice::lattice_det(lattice::lattice_from_supports(*vertex_sup)) == Int(9));
        CHECK(polytope::bkk_count(*vertex_sup) == Int(1));
    }
}

TEST_CASE("Q invariant") {
    SUBCASE("segment value 1/2") {
        auto sup = make_supports(1, {{{0}, {1}}});
        CHECK(polytope::q_invariant(*sup, sup->deltas0()) == doctest::Approx(0.5));
    }
    SUBCASE("lower bound n/4 and scaling invariance") {
        Rng rng(71);
        for (int rep = 0; rep < 15; ++rep) {
            auto sup = testutil::random_supports(2, rng);
            try {
                double q = polytope::q_invariant(*sup, sup->deltas0());
                CHECK(q >= 0.5 - 1e-12);
                std::vector<std::vector<VecZ>> scaled = sup->points;
                for (auto& eq : scaled)
                    for (auto& a : eq)
                        for (auto& v : a) v *= 3;
                auto sup3 = make_supports(2, scaled);
                double q3 = polytope::q_invariant(*sup3, sup3->deltas0());
                CHECK(q3 == doctest::Approx(q).epsilon(1e-9));
            } catch (const DegenerateSupport&) {
            } catch (const ZeroEta&) {
            }
        }
    }
}

TEST_CASE("invariant report consistency") {
    auto rep = polytope::compute_invariants(*testutil::cube_face_supports());
    CHECK(rep.nV == Int(2));
    CHECK(rep.detLambda == Int(1));
    CHECK(rep.bkk == Int(2));
    CHECK(rep.mixed_area == doctest::Approx(3.0));
    CHECK_FALSE(rep.strongly_mixed);
    CHECK_FALSE(rep.eta.has_value());  // strict gap undefined for this tuple
    CHECK(rep.ray_count == 6);

    auto rep2 = polytope::compute_invariants(*testutil::quartic_pair_supports());
    CHECK(rep2.eta.has_value());
    CHECK(*rep2.eta == doctest::Approx(2.0 / std::sqrt(5.0)));
    CHECK(rep2.Q.has_value());
    CHECK(*rep2.Q >= 0.5);
    CHECK(rep2.bkk * rep2.detLambda == rep2.nV);
}
