#include "toric/intlinalg.hpp"

#include <algorithm>

#include "toric/errors.hpp"

namespace toric::intlinalg {

MatZ hnf_rows(MatZ rows) {
    if (rows.empty()) return {};
    const size_t ncols = rows[0].size();
    size_t pivot_row = 0;
    std::vector<size_t> pivot_cols;
    for (size_t col = 0; col < ncols && pivot_row < rows.size(); ++col) {
        // Reduce column below pivot_row to a single nonzero entry by gcd row ops.
        while (true) {
            size_t best = rows.size();
            for (size_t r = pivot_row; r < rows.size(); ++r) {
                if (rows[r][col] == 0) continue;
                if (best == rows.size() ||
                    abs(rows[r][col]) < abs(rows[best][col]))
                    best = r;
            }
            if (best == rows.size()) break;  // column is zero below
            std::swap(rows[pivot_row], rows[best]);
            bool clean = true;
            for (size_t r = pivot_row + 1; r < rows.size(); ++r) {
                if (rows[r][col] == 0) continue;
                Int q = rows[r][col] / rows[pivot_row][col];
                for (size_t c = 0; c < ncols; ++c) rows[r][c] -= q * rows[pivot_row][c];
                if (rows[r][col] != 0) clean = false;
            }
            if (clean) break;
        }
        if (rows[pivot_row][col] == 0) continue;
        if (rows[pivot_row][col] < 0)
            for (size_t c = 0; c < ncols; ++c) rows[pivot_row][c] = -rows[pivot_row][c];
        // Reduce entries above the pivot into [0, pivot).
        for (size_t r = 0; r < pivot_row; ++r) {
            Int q = rows[r][col] / rows[pivot_row][col];
            if (rows[r][col] % rows[pivot_row][col] < 0) q -= 1;
            if (q != 0)
                for (size_t c = 0; c < ncols; ++c) rows[r][c] -= q * rows[pivot_row][c];
        }
        pivot_cols.push_back(col);
        ++pivot_row;
    }
    rows.resize(pivot_row);
    return rows;
}

int rank(const MatZ& rows) { return static_cast<int>(hnf_rows(rows).size()); }

Int det(MatZ m) {
    const size_t n = m.size();
    // Fraction-free Gaussian elimination (Bareiss).
    Int sign = 1, prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t swap_row = n;
            for (size_t r = k + 1; r < n; ++r)
                if (m[r][k] != 0) { swap_row = r; break; }
            if (swap_row == n) return 0;
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return n == 0 ? Int(1) : sign * m[n - 1][n - 1];
}

std::vector<std::vector<Rat>> inverse(const MatZ& m) {
    const size_t n = m.size();
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(2 * n, Rat(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) a[i][j] = Rat(m[i][j]);
        a[i][n + i] = Rat(1);
    }
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a[piv][col] == Rat(0)) ++piv;
        if (piv == n) throw InternalInconsistency("singular matrix in exact inverse");
        std::swap(a[col], a[piv]);
        Rat p = a[col][col];
        for (size_t j = 0; j < 2 * n; ++j) a[col][j] /= p;
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == Rat(0)) continue;
            Rat f = a[r][col];
            for (size_t j = 0; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
        }
    }
    std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
    return inv;
}

std::vector<Int> primitive(std::vector<Int> v) {
    Int g = 0;
    for (auto& x : v) g = gcd_int(g, x);
    if (g == 0) return v;
    for (auto& x : v) x /= g;
    for (auto& x : v) {
        if (x != 0) {
            if (x < 0)
                for (auto& y : v) y = -y;
            break;
        }
    }
    return v;
}

MatZ kernel_lattice(const MatZ& m) {
    if (m.empty()) return {};
    const size_t ncols = m[0].size();
    // HNF of [M^T | I]: rows whose M^T-part vanishes carry a kernel basis.
    MatZ work(ncols, std::vector<Int>(m.size() + ncols, Int(0)));
    for (size_t i = 0; i < ncols; ++i) {
        for (size_t r = 0; r < m.size(); ++r) work[i][r] = m[r][i];
        work[i][m.size() + i] = 1;
    }
    MatZ h = hnf_rows(std::move(work));
    MatZ kernel_rows;
    for (auto& row : h) {
        bool zero = true;
        for (size_t c = 0; c < m.size(); ++c)
            if (row[c] != 0) { zero = false; break; }
        if (zero)
            kernel_rows.emplace_back(row.begin() + static_cast<long>(m.size()), row.end());
    }
    // Return as columns.
    MatZ cols(ncols, std::vector<Int>(kernel_rows.size(), Int(0)));
    for (size_t k = 0; k < kernel_rows.size(); ++k)
        for (size_t j = 0; j < ncols; ++j) cols[j][k] = kernel_rows[k][j];
    return cols;
}

std::vector<Rat> solve_columns(const MatZ& b, const std::vector<Int>& v) {
    const size_t nrows = b.size();
    const size_t k = nrows == 0 ? 0 : b[0].size();
    std::vector<std::vector<Rat>> a(nrows, std::vector<Rat>(k + 1, Rat(0)));
    for (size_t i = 0; i < nrows; ++i) {
        for (size_t j = 0; j < k; ++j) a[i][j] = Rat(b[i][j]);
        a[i][k] = Rat(v[i]);
    }
    size_t row = 0;
    std::vector<size_t> pivot_of_col(k, nrows);
    for (size_t col = 0; col < k && row < nrows; ++col) {
        size_t piv = row;
        while (piv < nrows && a[piv][col] == Rat(0)) ++piv;
        if (piv == nrows) continue;
        std::swap(a[row], a[piv]);
        Rat p = a[row][col];
        for (size_t j = col; j <= k; ++j) a[row][j] /= p;
        for (size_t r = 0; r < nrows; ++r) {
            if (r == row || a[r][col] == Rat(0)) continue;
            Rat f = a[r][col];
            for (size_t j = col; j <= k; ++j) a[r][j] -= f * a[row][j];
        }
        pivot_of_col[col] = row;
        ++row;
    }
    for (size_t r = row; r < nrows; ++r)
        if (a[r][k] != Rat(0)) return {};  // inconsistent
    std::vector<Rat> x(k, Rat(0));
    for (size_t col = 0; col < k; ++col)
        if (pivot_of_col[col] < nrows) x[col] = a[pivot_of_col[col]][k];
    return x;
}

}  // namespace toric::intlinalg
