#pragma once

#include <cstdint>
#include <functional>

#include "vplab/vec.hpp"

namespace vplab {

/// SplitMix64 step; used to derive per-shard digital shifts from a seed.
std::uint64_t splitmix64(std::uint64_t& state);

/// Inverse standard normal CDF (Acklam's approximation plus one Halley
/// refinement step), accurate to about 1e-15 over (0,1).
double inverse_normal_cdf(double p);

/// Gray-code Sobol sequence in up to 8 dimensions with a per-instance
/// digital shift. Instances with different (seed, shard) pairs are
/// independent randomizations of the same low-discrepancy sequence, so
/// shard averages are independent and identically distributed.
class Sobol {
public:
    Sobol(int dim, std::uint64_t seed, std::uint64_t shard);

    /// Next point of the shifted sequence, each coordinate in (0,1).
    void next(double* out);

    int dim() const { return dim_; }

private:
    int dim_;
    std::uint64_t index_ = 0;
    std::uint32_t state_[8] = {};
    std::uint32_t shift_[8] = {};
    std::uint32_t dirs_[8][32] = {};
};

/// Map a point of (0,1)^n to the unit sphere via the Gaussian transform.
Vec cube_to_sphere(const double* pt, int n);

/// Process-wide default worker count (0 picks the hardware concurrency).
void set_default_jobs(int jobs);
int default_jobs();

/// Run `work(shard)` for every shard index in [0, num_shards) across a small
/// thread pool. Work items must write only to their own shard's slot so the
/// result is independent of the scheduling order.
void run_shards(std::uint64_t num_shards, int jobs,
                const std::function<void(std::uint64_t)>& work);

constexpr std::uint64_t kShardSize = std::uint64_t(1) << 16;

/// First and second moments of a vector-valued sample mean.
struct VectorMoments {
    Vec sum;
    Mat sum_outer;
    std::uint64_t count = 0;

    Vec mean() const { return sum / static_cast<double>(count); }
    /// Covariance matrix of the sample mean (sample covariance over count).
    Mat cov_of_mean() const;
};

/// Deterministic map-reduce over quasi-random unit sphere directions:
/// fn(u, out) writes k values per direction; the moments of the k-vector
/// come back with exact reproducibility for a fixed (seed, n_samples).
VectorMoments sphere_map_moments(int dim, int k, std::uint64_t n_samples,
                                 std::uint64_t seed,
                                 const std::function<void(const Vec&, double*)>& fn,
                                 int jobs = 0);

} // namespace vplab
