#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <vector>

#include "vplab/vec.hpp"

namespace vplab {

/// Exact rational scalar. Doubles convert losslessly, so predicates computed
/// from double input coordinates are exact.
using Rat = boost::multiprecision::mpq_rational;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

RatVec to_rat(const Vec& v);
Vec to_double(const RatVec& v);

Rat rat_dot(const RatVec& a, const RatVec& b);
RatVec rat_sub(const RatVec& a, const RatVec& b);

/// Determinant by fraction-preserving Gaussian elimination.
Rat rat_det(RatMat m);

/// Rank of a rectangular rational matrix.
int rat_rank(RatMat m);

/// Inverse of a square rational matrix; throws GeometryError if singular.
RatMat rat_inverse(RatMat m);

RatVec rat_mat_vec(const RatMat& m, const RatVec& v);

} // namespace vplab
