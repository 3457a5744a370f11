#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "testutil.hpp"
#include "toric/lattice.hpp"

using namespace toric;
using Eigen::VectorXcd;

namespace {

lattice::LatticeBasis basis_1d(std::int64_t d) {
    return lattice::lattice_from_rows({{Int(d)}}, 1);
}

}  // namespace

TEST_CASE("lattice from supports") {
    SUBCASE("arithmetic progression gives d Z") {
        // A = {0, d, 2d, ..., cd} in one variable.
        for (std::int64_t d : {1, 2, 3, 5}) {
            auto sup = make_supports(1, {{{0}, {d}, {2 * d}, {3 * d}}});
            auto basis = lattice::lattice_from_supports(*sup);
            CHECK(lattice::lattice_det(basis) == Int(d));
        }
    }
    SUBCASE("simplex supports span Z^n") {
        auto sup = make_supports(
            3, {{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}});
        CHECK(lattice::lattice_det(lattice::lattice_from_supports(*sup)) == Int(1));
    }
    SUBCASE("independent even supports") {
        auto sup = make_supports(2, {{{0, 0}, {2, 0}}, {{0, 0}, {0, 2}}});
        CHECK(lattice::lattice_det(lattice::lattice_from_supports(*sup)) == Int(4));
    }
    SUBCASE("rank deficiency is an error") {
        auto sup = make_supports(2, {{{0, 0}, {1, 0}}, {{0, 0}, {2, 0}}});
        CHECK_THROWS_AS(lattice::lattice_from_supports(*sup), RankDeficient);
    }
}

TEST_CASE("HNF canonicity and determinant") {
    SUBCASE("identity") {
        auto b = lattice::lattice_from_rows({{Int(1), Int(0)}, {Int(0), Int(1)}}, 2);
        CHECK(lattice::lattice_det(b) == Int(1));
    }
    SUBCASE("diagonal") {
        auto b = lattice::lattice_from_rows({{Int(2), Int(0)}, {Int(0), Int(2)}}, 2);
        CHECK(lattice::lattice_det(b) == Int(4));
    }
    SUBCASE("triangular with cofactor check") {
        auto b = lattice::lattice_from_rows({{Int(1), Int(1)}, {Int(0), Int(3)}}, 2);
        CHECK(lattice::lattice_det(b) == Int(3));
    }
    SUBCASE("two bases of one lattice agree") {
        // Rows (1,1),(0,3) and (1,4),(-1,-1) generate the same lattice.
        auto b1 = lattice::lattice_from_rows({{Int(1), Int(1)}, {Int(0), Int(3)}}, 2);
        auto b2 = lattice::lattice_from_rows({{Int(1), Int(4)}, {Int(-1), Int(-1)}}, 2);
        CHECK(b1.rows == b2.rows);
    }
    SUBCASE("uniform scaling multiplies det by d^n") {
        Rng rng(11);
        for (int rep = 0; rep < 20; ++rep) {
            auto sup = testutil::random_supports(2, rng);
            Int det1 = lattice::lattice_det(lattice::lattice_from_supports(*sup));
            std::vector<std::vector<VecZ>> scaled = sup->points;
            for (auto& eq : scaled)
                for (auto& a : eq)
                    for (auto& v : a) v *= 3;
            auto sup3 = make_supports(2, scaled);
            Int det3 = lattice::lattice_det(lattice::lattice_from_supports(*sup3));
            CHECK(det3 == det1 * 9);
        }
    }
}

TEST_CASE("dual basis is an exact inverse") {
    SUBCASE("identity and 1/d") {
        auto b = basis_1d(4);
        auto dual = lattice::dual_basis(b);
        CHECK(dual.cols[0][0] == Rat(Int(1), Int(4)));
    }
    SUBCASE("2x2 inverse entries") {
        auto b = lattice::lattice_from_rows({{Int(1), Int(1)}, {Int(0), Int(3)}}, 2);
        auto dual = lattice::dual_basis(b);
        CHECK(dual.cols[0][0] == Rat(1));
        CHECK(dual.cols[0][1] == Rat(Int(-1), Int(3)));
        CHECK(dual.cols[1][0] == Rat(0));
        CHECK(dual.cols[1][1] == Rat(Int(1), Int(3)));
    }
    SUBCASE("rows times columns is the identity, exactly") {
        Rng rng(5);
        for (int rep = 0; rep < 20; ++rep) {
            auto sup = testutil::random_supports(3, rng, 4);
            auto b = lattice::lattice_from_supports(*sup);
            auto dual = lattice::dual_basis(b);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    Rat s(0);
                    for (int k = 0; k < 3; ++k) s += Rat(b.rows[i][k]) * dual.cols[k][j];
                    CHECK(s == (i == j ? Rat(1) : Rat(0)));
                }
        }
    }
}

TEST_CASE("canonicalize point") {
    const double pi = std::numbers::pi;
    SUBCASE("idempotence and periodicity for Z^n") {
        auto b = lattice::lattice_from_rows({{Int(1), Int(0)}, {Int(0), Int(1)}}, 2);
        VectorXcd z(2);
        z << std::complex<double>(0.3, 0.7), std::complex<double>(-1.0, 5.9);
        auto c1 = lattice::canonicalize_point(z, b);
        auto c2 = lattice::canonicalize_point(c1.z, b);
        CHECK((c1.z - c2.z).norm() < 1e-12);
        VectorXcd shifted = z;
        shifted(0) += std::complex<double>(0.0, 2.0 * pi * 3.0);
        shifted(1) -= std::complex<double>(0.0, 2.0 * pi * 2.0);
        auto c3 = lattice::canonicalize_point(shifted, b);
        CHECK((c1.z - c3.z).norm() < 1e-10);
        CHECK(c1.z.real() == z.real());  // real part untouched
    }
    SUBCASE("dual-lattice period for Lambda = 2Z") {
        // Lambda* = (1/2) Z, so the imaginary period is pi.
        auto b = basis_1d(2);
        VectorXcd zero(1), half_turn(1), full_turn(1);
        zero << std::complex<double>(0.0, 0.0);
        half_turn << std::complex<double>(0.0, pi);
        full_turn << std::complex<double>(0.0, 2.0 * pi);
        CHECK((lattice::canonicalize_point(half_turn, b).z - zero).norm() < 1e-12);
        CHECK((lattice::canonicalize_point(full_turn, b).z - zero).norm() < 1e-12);
    }
    SUBCASE("pi offset survives for Lambda = Z") {
        auto b = basis_1d(1);
        VectorXcd half_turn(1), full_turn(1);
        half_turn << std::complex<double>(0.0, pi);
        full_turn << std::complex<double>(0.0, 2.0 * pi);
        CHECK(std::abs(lattice::canonicalize_point(half_turn, b).z(0).imag() - pi) < 1e-12);
        CHECK(std::abs(lattice::canonicalize_point(full_turn, b).z(0).imag()) < 1e-12);
    }
    SUBCASE("invariance under integer dual combinations") {
        Rng rng(17);
        auto b = lattice::lattice_from_rows({{Int(1), Int(1)}, {Int(0), Int(3)}}, 2);
        auto dual = lattice::dual_basis(b);
        for (int rep = 0; rep < 50; ++rep) {
            VectorXcd z(2);
            for (int j = 0; j < 2; ++j)
                z(j) = std::complex<double>(rng.next_gaussian(), 3.0 * rng.next_gaussian());
            std::int64_t k0 = static_cast<std::int64_t>(rng.next_u64() % 7) - 3;
            std::int64_t k1 = static_cast<std::int64_t>(rng.next_u64() % 7) - 3;
            VectorXcd shifted = z;
            for (int row = 0; row < 2; ++row) {
                double v = to_double(dual.cols[row][0]) * k0 + to_double(dual.cols[row][1]) * k1;
                shifted(row) += std::complex<double>(0.0, 2.0 * std::numbers::pi * v);
            }
            auto c1 = lattice::canonicalize_point(z, b);
            auto c2 = lattice::canonicalize_point(shifted, b);
            CHECK((c1.z - c2.z).norm() < 1e-9);
        }
    }
}
