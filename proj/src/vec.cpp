#include "vplab/vec.hpp"

#include "vplab/errors.hpp"

namespace vplab {

Mat frame_with_last_axis(const Vec& normal) {
    const int n = static_cast<int>(normal.size());
    const double len = normal.norm();
    if (!(len > 0.0))
        throw GeometryError("frame_with_last_axis: zero direction");
    // Householder QR of the single column produces an orthogonal Q whose
    // first column is +-normal/|normal|; reorder so the axis comes last.
    Eigen::HouseholderQR<Mat> qr(normal);
    Mat Q = qr.householderQ();
    Vec u = normal / len;
    if (Q.col(0).dot(u) < 0.0)
        Q.col(0) *= -1.0;
    Mat F(n, n);
    F.leftCols(n - 1) = Q.rightCols(n - 1);
    F.col(n - 1) = Q.col(0);
    return F;
}

Mat tangent_basis(const Vec& normal) {
    Mat F = frame_with_last_axis(normal);
    return F.leftCols(normal.size() - 1);
}

} // namespace vplab
