#pragma once

#include <Eigen/Dense>

namespace vplab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// i-th standard basis vector of R^n.
inline Vec unit_vector(int n, int i) {
    Vec e = Vec::Zero(n);
    e[i] = 1.0;
    return e;
}

/// Orthonormal basis of the hyperplane orthogonal to a nonzero vector.
/// Returns an n x (n-1) matrix whose columns complete normal/|normal| to an
/// orthonormal basis of R^n.
Mat tangent_basis(const Vec& normal);

/// Orthogonal n x n matrix whose last column is normal/|normal|.
Mat frame_with_last_axis(const Vec& normal);

} // namespace vplab
