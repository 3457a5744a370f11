#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace toric {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// The support differences span a lattice of rank < n.
struct RankDeficient : Error {
    int rank;
    explicit RankDeficient(int r)
        : Error("support differences span a rank-" + std::to_string(r) + " lattice"), rank(r) {}
};

/// Every point of A_i lies on the supporting hyperplane of a fan ray.
struct DegenerateSupport : Error {
    int support;
    std::vector<std::int64_t> xi;
    DegenerateSupport(int i, std::vector<std::int64_t> ray)
        : Error("support " + std::to_string(i) + " has no point off a supporting hyperplane"),
          support(i), xi(std::move(ray)) {}
};

/// Weighted covariance of a support is singular (support in a hyperplane).
struct DegenerateGram : Error {
    int support;
    explicit DegenerateGram(int i)
        : Error("weighted covariance of support " + std::to_string(i) + " is singular"), support(i) {}
};

struct ZeroEquation : Error {
    int equation;
    explicit ZeroEquation(int i)
        : Error("equation " + std::to_string(i) + " has zero coefficient vector"), equation(i) {}
};

struct ZeroCoefficient : Error {
    int equation, index;
    ZeroCoefficient(int i, int a)
        : Error("coefficient (" + std::to_string(i) + "," + std::to_string(a) + ") is zero"),
          equation(i), index(a) {}
};

struct SingularJacobian : Error {
    SingularJacobian() : Error("Jacobian is singular at the requested point") {}
};

struct NoConvergence : Error {
    NoConvergence() : Error("Newton refinement did not reach the requested tolerance") {}
};

struct OutOfRange : Error {
    explicit OutOfRange(const std::string& what) : Error(what) {}
};

struct ZeroEta : Error {
    ZeroEta() : Error("facet gap is zero or undefined") {}
};

struct InternalInconsistency : Error {
    explicit InternalInconsistency(const std::string& what) : Error(what) {}
};

struct DeltaTooLarge : Error {
    DeltaTooLarge() : Error("delta exceeds 1/(2(2 d_r^2 + 1) S)") {}
};

struct InfiniteKappa : Error {
    InfiniteKappa() : Error("imbalance invariant is infinite (zero coefficient)") {}
};

struct ResultantDegenerate : Error {
    ResultantDegenerate() : Error("resultant vanishes identically") {}
};

struct OracleUnavailable : Error {
    explicit OracleUnavailable(int n)
        : Error("no brute-force oracle for dimension " + std::to_string(n)) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

struct CertificationFailed : Error {
    explicit CertificationFailed(const std::string& what) : Error(what) {}
};

}  // namespace toric
