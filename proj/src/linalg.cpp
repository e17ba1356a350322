#include "defmut/linalg.hpp"

#include <algorithm>

namespace defmut {

RowEchelon rref(QMatrix m, int columns) {
    int cols = columns >= 0 ? columns : (m.empty() ? 0 : static_cast<int>(m[0].size()));
    RowEchelon out;
    std::size_t row = 0;
    for (int c = 0; c < cols && row < m.size(); ++c) {
        std::size_t p = row;
        while (p < m.size() && m[p][static_cast<std::size_t>(c)] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[row]);
        Rational inv = 1 / m[row][static_cast<std::size_t>(c)];
        for (auto& x : m[row]) x *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row) continue;
            Rational f = m[r][static_cast<std::size_t>(c)];
            if (f == 0) continue;
            for (std::size_t k = 0; k < m[r].size(); ++k) m[r][k] -= f * m[row][k];
        }
        out.pivots.push_back(c);
        ++row;
    }
    m.resize(row);
    out.reduced = std::move(m);
    return out;
}

int rank(const QMatrix& m) { return static_cast<int>(rref(m).pivots.size()); }

QMatrix nullspace(const QMatrix& m, int columns) {
    RowEchelon e = rref(m, columns);
    std::vector<bool> is_pivot(static_cast<std::size_t>(columns), false);
    for (int p : e.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
    QMatrix basis;
    for (int f = 0; f < columns; ++f) {
        if (is_pivot[static_cast<std::size_t>(f)]) continue;
        QVector v(static_cast<std::size_t>(columns), Rational(0));
        v[static_cast<std::size_t>(f)] = 1;
        for (std::size_t r = 0; r < e.pivots.size(); ++r)
            v[static_cast<std::size_t>(e.pivots[r])] = -e.reduced[r][static_cast<std::size_t>(f)];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<QMatrix> inverse(const QMatrix& m) {
    std::size_t n = m.size();
    QMatrix aug(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw Error("inverse: matrix is not square");
        aug[i] = m[i];
        aug[i].resize(2 * n, Rational(0));
        aug[i][n + i] = 1;
    }
    RowEchelon e = rref(aug, static_cast<int>(n));
    if (e.pivots.size() != n) return std::nullopt;
    QMatrix inv(n);
    for (std::size_t i = 0; i < n; ++i) inv[i].assign(e.reduced[i].begin() + static_cast<long>(n), e.reduced[i].end());
    return inv;
}

std::optional<QVector> solve(const QMatrix& a, const QVector& b, int columns) {
    QMatrix aug = a;
    for (std::size_t i = 0; i < aug.size(); ++i) {
        aug[i].resize(static_cast<std::size_t>(columns), Rational(0));
        aug[i].push_back(b[i]);
    }
    RowEchelon e = rref(aug, columns + 1);
    QVector x(static_cast<std::size_t>(columns), Rational(0));
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] == columns) return std::nullopt;
        x[static_cast<std::size_t>(e.pivots[r])] = e.reduced[r][static_cast<std::size_t>(columns)];
    }
    return x;
}

QMatrix multiply(const QMatrix& a, const QMatrix& b) {
    std::size_t inner = b.size();
    std::size_t cols = b.empty() ? 0 : b[0].size();
    QMatrix out(a.size(), QVector(cols, Rational(0)));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < inner; ++k)
            if (a[i][k] != 0)
                for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

QMatrix transpose(const QMatrix& a) {
    if (a.empty()) return {};
    QMatrix t(a[0].size(), QVector(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

QMatrix to_rational(const ZMatrix& m) {
    QMatrix out;
    for (const auto& row : m) {
        QVector r;
        for (const auto& x : row) r.emplace_back(x);
        out.push_back(std::move(r));
    }
    return out;
}

ZVector primitive_integer(const QVector& v) {
    Integer l = 1;
    for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    ZVector out;
    Integer g = 0;
    for (const auto& x : v) {
        Integer z = x.get_num() * (l / x.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
        out.push_back(z);
    }
    if (g == 0) return out;
    auto first = std::find_if(out.begin(), out.end(), [](const Integer& z) { return z != 0; });
    if (*first < 0) g = -g;
    for (auto& z : out) z /= g;
    return out;
}

ZMatrix integer_kernel(const ZMatrix& m, int columns) {
    ZMatrix out;
    for (const auto& v : nullspace(to_rational(m), columns)) out.push_back(primitive_integer(v));
    return out;
}

ZMatrix hermite_basis(ZMatrix rows) {
    if (rows.empty()) return rows;
    std::size_t cols = rows[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        // Euclid on column c among rows r.. until a single nonzero remains.
        while (true) {
            std::size_t best = rows.size();
            for (std::size_t i = r; i < rows.size(); ++i)
                if (rows[i][c] != 0 && (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c]))) best = i;
            if (best == rows.size()) break;
            std::swap(rows[r], rows[best]);
            bool reduced = false;
            for (std::size_t i = r + 1; i < rows.size(); ++i) {
                if (rows[i][c] == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
                for (std::size_t k = 0; k < cols; ++k) rows[i][k] -= q * rows[r][k];
                if (rows[i][c] != 0) reduced = true;
            }
            if (!reduced) break;
        }
        if (r < rows.size() && rows[r][c] != 0) {
            if (rows[r][c] < 0)
                for (auto& x : rows[r]) x = -x;
            for (std::size_t i = 0; i < r; ++i) {
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
                for (std::size_t k = 0; k < cols; ++k) rows[i][k] -= q * rows[r][k];
            }
            ++r;
        }
    }
    rows.resize(r);
    return rows;
}

bool in_rational_span(const ZMatrix& rows, const ZVector& v) {
    ZMatrix ext = rows;
    ext.push_back(v);
    return rank(to_rational(ext)) == rank(to_rational(rows));
}

bool same_lattice(const ZMatrix& a, const ZMatrix& b) { return hermite_basis(a) == hermite_basis(b); }

}  // namespace defmut
