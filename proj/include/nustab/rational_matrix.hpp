#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nustab/errors.hpp"
#include "nustab/rational.hpp"

namespace nustab {

/// Dense matrix over exact rationals. All linear algebra in this project is
/// exact; there are no tolerances anywhere.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(int rows, int cols, Rational fill = 0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0) throw input_error("negative matrix dimension");
    }

    static RationalMatrix identity(int n) {
        RationalMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static RationalMatrix square(const std::vector<std::vector<int>>& entries) {
        const int n = static_cast<int>(entries.size());
        RationalMatrix m(n, n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(entries[i].size()) != n)
                throw input_error("square matrix rows must have length n");
            for (int j = 0; j < n; ++j) m(i, j) = entries[i][j];
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Rational& operator()(int i, int j) { return data_[index(i, j)]; }
    const Rational& operator()(int i, int j) const { return data_[index(i, j)]; }

    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t index(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw input_error("matrix index out of range");
        return static_cast<std::size_t>(i) * cols_ + j;
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<Rational> data_;
};

inline RationalMatrix transpose(const RationalMatrix& m) {
    RationalMatrix t(m.cols(), m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

/// Submatrix with the given row and column index lists (kept in order).
inline RationalMatrix submatrix(const RationalMatrix& m, const std::vector<int>& row_idx,
                                const std::vector<int>& col_idx) {
    RationalMatrix s(static_cast<int>(row_idx.size()), static_cast<int>(col_idx.size()));
    for (int i = 0; i < s.rows(); ++i)
        for (int j = 0; j < s.cols(); ++j) s(i, j) = m(row_idx[i], col_idx[j]);
    return s;
}

inline RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols() != b.rows()) throw input_error("matrix product dimension mismatch");
    RationalMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

namespace detail {

/// In-place reduced row echelon form; returns the pivot columns.
inline std::vector<int> rref(RationalMatrix& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int pivot = -1;
        for (int i = row; i < m.rows(); ++i)
            if (m(i, col) != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != row)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(row, j));
        const Rational inv = Rational(1) / m(row, col);
        for (int j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col) == 0) continue;
            const Rational factor = m(i, col);
            for (int j = col; j < m.cols(); ++j) m(i, j) -= factor * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace detail

inline int rank(const RationalMatrix& m) {
    RationalMatrix work = m;
    return static_cast<int>(detail::rref(work).size());
}

/// Nullity of the column space map: cols - rank. For square matrices this
/// equals the nullity of the transpose.
inline int nullity(const RationalMatrix& m) { return m.cols() - rank(m); }

/// Canonical basis of {y : My = 0}, one vector per free column of the RREF
/// (free variable set to 1).
inline std::vector<std::vector<Rational>> right_nullspace(const RationalMatrix& m) {
    RationalMatrix work = m;
    const std::vector<int> pivots = detail::rref(work);
    std::vector<char> is_pivot(m.cols(), 0);
    for (int c : pivots) is_pivot[c] = 1;
    std::vector<std::vector<Rational>> basis;
    for (int free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> y(m.cols(), 0);
        y[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) y[pivots[r]] = -work(static_cast<int>(r), free);
        basis.push_back(std::move(y));
    }
    return basis;
}

/// Basis of {x : x^T M = 0}.
inline std::vector<std::vector<Rational>> left_nullspace(const RationalMatrix& m) {
    return right_nullspace(transpose(m));
}

inline std::vector<Rational> apply(const RationalMatrix& m, const std::vector<Rational>& y) {
    if (static_cast<int>(y.size()) != m.cols()) throw input_error("vector length mismatch");
    std::vector<Rational> r(m.rows(), 0);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0 && y[j] != 0) r[i] += m(i, j) * y[j];
    return r;
}

inline std::vector<Rational> apply_left(const std::vector<Rational>& x, const RationalMatrix& m) {
    if (static_cast<int>(x.size()) != m.rows()) throw input_error("vector length mismatch");
    std::vector<Rational> r(m.cols(), 0);
    for (int i = 0; i < m.rows(); ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0) r[j] += x[i] * m(i, j);
    }
    return r;
}

inline bool is_zero_vector(const std::vector<Rational>& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

inline bool is_zero_matrix(const RationalMatrix& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0) return false;
    return true;
}

/// Inverse by Gauss-Jordan; throws singular_pivot_error when singular.
inline RationalMatrix inverse(const RationalMatrix& m) {
    if (!m.is_square()) throw input_error("inverse needs a square matrix");
    const int n = m.rows();
    RationalMatrix work(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) work(i, j) = m(i, j);
        work(i, n + i) = 1;
    }
    detail::rref(work);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (work(i, j) != (i == j ? 1 : 0)) throw singular_pivot_error("matrix is singular");
    RationalMatrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = work(i, n + j);
    return inv;
}

/// Schur complement B/B[S] = B(S) - B[~S,S] B[S]^{-1} B[S,~S], indexed by the
/// complement of S in increasing order. Nullity-preserving whenever B[S] is
/// nonsingular; throws singular_pivot_error otherwise.
inline RationalMatrix schur_complement(const RationalMatrix& b, const std::vector<int>& s) {
    if (!b.is_square()) throw input_error("Schur complement needs a square matrix");
    std::vector<char> in_s(b.rows(), 0);
    for (int i : s) {
        if (i < 0 || i >= b.rows()) throw input_error("pivot index out of range");
        if (in_s[i]) throw input_error("duplicate pivot index");
        in_s[i] = 1;
    }
    std::vector<int> sv(s.begin(), s.end()), rest;
    std::sort(sv.begin(), sv.end());
    for (int i = 0; i < b.rows(); ++i)
        if (!in_s[i]) rest.push_back(i);
    const RationalMatrix block = submatrix(b, sv, sv);
    RationalMatrix block_inv;
    try {
        block_inv = inverse(block);
    } catch (const singular_pivot_error&) {
        throw singular_pivot_error("B[S] is singular; Schur complement undefined");
    }
    const RationalMatrix cross = multiply(multiply(submatrix(b, rest, sv), block_inv),
                                          submatrix(b, sv, rest));
    RationalMatrix result = submatrix(b, rest, rest);
    for (int i = 0; i < result.rows(); ++i)
        for (int j = 0; j < result.cols(); ++j) result(i, j) -= cross(i, j);
    return result;
}

// ---------------------------------------------------------------------------
// I/O
// ---------------------------------------------------------------------------

// Text format:
//   matrix <n>
//   n rows of n entries, integers or p/q

inline RationalMatrix read_matrix_text(std::istream& is) {
    std::string line;
    int n = -1;
    std::vector<Rational> entries;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        if (n < 0) {
            std::string kw;
            if (!(ls >> kw)) continue;
            if (kw != "matrix" || !(ls >> n) || n < 0)
                throw input_error("expected header 'matrix <n>'");
            continue;
        }
        std::string token;
        while (ls >> token) entries.push_back(parse_rational(token));
    }
    if (n < 0) throw input_error("missing 'matrix <n>' header");
    if (static_cast<int>(entries.size()) != n * n)
        throw input_error("matrix needs exactly n*n entries");
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = entries[i * n + j];
    return m;
}

inline void write_matrix_text(std::ostream& os, const RationalMatrix& m) {
    os << "matrix " << m.rows() << "\n";
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) os << (j ? " " : "") << to_string(m(i, j));
        os << "\n";
    }
}

inline nlohmann::json matrix_to_json(const RationalMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
        rows.push_back(row);
    }
    return {{"n", m.rows()}, {"entries", rows}};
}

inline RationalMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
        throw input_error("matrix JSON needs fields 'n' and 'entries'");
    const int n = j.at("n").get<int>();
    RationalMatrix m(n, n);
    const auto& rows = j.at("entries");
    if (static_cast<int>(rows.size()) != n) throw input_error("matrix needs n rows");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n) throw input_error("matrix row needs n entries");
        for (int k = 0; k < n; ++k) m(i, k) = parse_rational(rows[i][k].get<std::string>());
    }
    return m;
}

} // namespace nustab
