#include "vplab/rat.hpp"

#include <cstddef>

#include "vplab/errors.hpp"

namespace vplab {

RatVec to_rat(const Vec& v) {
    RatVec r(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        r[static_cast<std::size_t>(i)] = Rat(v[i]);
    return r;
}

Vec to_double(const RatVec& v) {
    Vec r(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        r[static_cast<Eigen::Index>(i)] = static_cast<double>(v[i]);
    return r;
}

Rat rat_dot(const RatVec& a, const RatVec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

RatVec rat_sub(const RatVec& a, const RatVec& b) {
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] - b[i];
    return r;
}

Rat rat_det(RatMat m) {
    const std::size_t n = m.size();
    Rat det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0)
            ++pivot;
        if (pivot == n)
            return Rat(0);
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t row = col + 1; row < n; ++row) {
            if (m[row][col] == 0)
                continue;
            Rat f = m[row][col] / m[col][col];
            for (std::size_t k = col; k < n; ++k)
                m[row][k] -= f * m[col][k];
        }
    }
    return det;
}

int rat_rank(RatMat m) {
    if (m.empty())
        return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    int rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t pivot = row;
        while (pivot < rows && m[pivot][col] == 0)
            ++pivot;
        if (pivot == rows)
            continue;
        std::swap(m[pivot], m[row]);
        for (std::size_t r = row + 1; r < rows; ++r) {
            if (m[r][col] == 0)
                continue;
            Rat f = m[r][col] / m[row][col];
            for (std::size_t k = col; k < cols; ++k)
                m[r][k] -= f * m[row][k];
        }
        ++row;
        ++rank;
    }
    return rank;
}

RatMat rat_inverse(RatMat m) {
    const std::size_t n = m.size();
    RatMat inv(n, RatVec(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i)
        inv[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0)
            ++pivot;
        if (pivot == n)
            throw GeometryError("rat_inverse: singular matrix");
        std::swap(m[pivot], m[col]);
        std::swap(inv[pivot], inv[col]);
        Rat d = m[col][col];
        for (std::size_t k = 0; k < n; ++k) {
            m[col][k] /= d;
            inv[col][k] /= d;
        }
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || m[row][col] == 0)
                continue;
            Rat f = m[row][col];
            for (std::size_t k = 0; k < n; ++k) {
                m[row][k] -= f * m[col][k];
                inv[row][k] -= f * inv[col][k];
            }
        }
    }
    return inv;
}

RatVec rat_mat_vec(const RatMat& m, const RatVec& v) {
    RatVec r(m.size(), Rat(0));
    for (std::size_t i = 0; i < m.size(); ++i)
        r[i] = rat_dot(m[i], v);
    return r;
}

} // namespace vplab
