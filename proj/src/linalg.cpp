#include "mwi/linalg.hpp"

#include <stdexcept>

namespace mwi {

std::vector<size_t> rref(Matrix& m) {
    std::vector<size_t> pivots;
    if (m.empty()) return pivots;
    size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && m[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        QI inv = m[r][c].inverse();
        for (auto& x : m[r]) x *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            QI f = m[i][c];
            for (size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

size_t rank(Matrix m) { return rref(m).size(); }

Matrix nullspace(Matrix m) {
    if (m.empty()) return {};
    size_t cols = m[0].size();
    auto piv = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : piv) is_pivot[c] = true;
    Matrix basis;
    for (size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<QI> v(cols, QI(0));
        v[f] = QI(1);
        for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][f];
        basis.push_back(v);
    }
    return basis;
}

QI determinant(Matrix m) {
    size_t n = m.size();
    QI det(1);
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && m[p][c].is_zero()) ++p;
        if (p == n) return QI(0);
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        QI inv = m[c][c].inverse();
        for (size_t i = c + 1; i < n; ++i) {
            QI f = m[i][c] * inv;
            for (size_t k = c; k < n; ++k) m[i][k] -= f * m[c][k];
        }
    }
    return det;
}

LinearSolution solve_linear(const std::vector<Scalar>& eqs, const std::vector<std::string>& unknowns) {
    size_t n = unknowns.size();
    Matrix m;
    for (const auto& eq : eqs) {
        std::vector<QI> row(n + 1, QI(0));
        for (const auto& [mono, v] : eq.terms()) {
            if (mono.empty()) {
                row[n] += -v;
                continue;
            }
            bool found = false;
            if (mono.size() == 1 && mono[0].second == 1)
                for (size_t k = 0; k < n; ++k)
                    if (unknowns[k] == mono[0].first) {
                        row[k] += v;
                        found = true;
                    }
            if (!found) throw std::invalid_argument("equation not linear in unknowns: " + eq.str());
        }
        m.push_back(row);
    }
    LinearSolution sol;
    auto piv = rref(m);
    std::vector<bool> is_pivot(n, false);
    for (size_t r = 0; r < piv.size(); ++r) {
        if (piv[r] == n) {
            sol.consistent = false;
            return sol;
        }
        is_pivot[piv[r]] = true;
    }
    for (size_t k = 0; k < n; ++k)
        if (!is_pivot[k]) sol.free.push_back(unknowns[k]);
    for (size_t r = 0; r < piv.size(); ++r) {
        Scalar expr(m[r][n]);
        for (size_t k = 0; k < n; ++k)
            if (!is_pivot[k] && !m[r][k].is_zero()) expr -= Scalar(m[r][k]) * Scalar::sym(unknowns[k]);
        sol.pivots[unknowns[piv[r]]] = expr;
    }
    return sol;
}

}  // namespace mwi
