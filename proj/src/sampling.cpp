#include "vplab/sampling.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "vplab/errors.hpp"

namespace vplab {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("inverse_normal_cdf: p outside (0,1)");
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p > 1.0 - plow) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    // One Halley step against the exact CDF.
    double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

namespace {

// Primitive polynomial data (degree, encoded coefficients, initial direction
// numbers) for dimensions 2..8; dimension 1 is the van der Corput sequence.
struct SobolPoly {
    int s;
    std::uint32_t a;
    std::uint32_t m[5];
};

const SobolPoly kPolys[7] = {
    {1, 0, {1, 0, 0, 0, 0}},  {2, 1, {1, 3, 0, 0, 0}},   {3, 1, {1, 3, 1, 0, 0}},
    {3, 2, {1, 1, 1, 0, 0}},  {4, 1, {1, 1, 3, 3, 0}},   {4, 4, {1, 3, 5, 13, 0}},
    {5, 2, {1, 1, 5, 5, 17}},
};

} // namespace

Sobol::Sobol(int dim, std::uint64_t seed, std::uint64_t shard) : dim_(dim) {
    if (dim < 1 || dim > 8)
        throw GeometryError("sobol: dimension must be between 1 and 8");
    for (int j = 0; j < dim; ++j) {
        std::uint32_t* v = dirs_[j];
        if (j == 0) {
            for (int k = 0; k < 32; ++k)
                v[k] = 1u << (31 - k);
        } else {
            const SobolPoly& P = kPolys[j - 1];
            for (int k = 0; k < P.s; ++k)
                v[k] = P.m[k] << (31 - k);
            for (int k = P.s; k < 32; ++k) {
                v[k] = v[k - P.s] ^ (v[k - P.s] >> P.s);
                for (int i = 1; i < P.s; ++i)
                    if (P.a >> (P.s - 1 - i) & 1u)
                        v[k] ^= v[k - i];
            }
        }
    }
    std::uint64_t st = seed * 0x9e3779b97f4a7c15ULL + shard + 1;
    for (int j = 0; j < dim; ++j)
        shift_[j] = static_cast<std::uint32_t>(splitmix64(st) >> 32);
}

void Sobol::next(double* out) {
    for (int j = 0; j < dim_; ++j)
        out[j] = (static_cast<double>(state_[j] ^ shift_[j]) + 0.5) * 0x1p-32;
    int bit = std::countr_zero(index_ + 1);
    for (int j = 0; j < dim_; ++j)
        state_[j] ^= dirs_[j][bit];
    ++index_;
}

Vec cube_to_sphere(const double* pt, int n) {
    Vec g(n);
    for (int i = 0; i < n; ++i)
        g[i] = inverse_normal_cdf(pt[i]);
    double len = g.norm();
    if (!(len > 1e-12))
        return unit_vector(n, 0);
    return g / len;
}

namespace {
std::atomic<int> g_jobs{0};
}

void set_default_jobs(int jobs) { g_jobs.store(jobs); }

int default_jobs() {
    int j = g_jobs.load();
    if (j > 0)
        return j;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void run_shards(std::uint64_t num_shards, int jobs,
                const std::function<void(std::uint64_t)>& work) {
    if (jobs <= 0)
        jobs = default_jobs();
    if (jobs == 1 || num_shards <= 1) {
        for (std::uint64_t s = 0; s < num_shards; ++s)
            work(s);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::uint64_t s = next.fetch_add(1);
            if (s >= num_shards)
                return;
            work(s);
        }
    };
    std::vector<std::thread> pool;
    int nthreads = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(jobs), num_shards));
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
}

Mat VectorMoments::cov_of_mean() const {
    const double n = static_cast<double>(count);
    Vec m = mean();
    Mat s = (sum_outer - n * (m * m.transpose())) / (n - 1.0);
    return s / n;
}

VectorMoments sphere_map_moments(int dim, int k, std::uint64_t n_samples,
                                 std::uint64_t seed,
                                 const std::function<void(const Vec&, double*)>& fn,
                                 int jobs) {
    if (n_samples == 0)
        throw GeometryError("sampling: zero sample count");
    const std::uint64_t shards = (n_samples + kShardSize - 1) / kShardSize;
    std::vector<VectorMoments> parts(shards);
    run_shards(shards, jobs, [&](std::uint64_t s) {
        VectorMoments acc;
        acc.sum = Vec::Zero(k);
        acc.sum_outer = Mat::Zero(k, k);
        const std::uint64_t lo = s * kShardSize;
        const std::uint64_t hi = std::min(n_samples, lo + kShardSize);
        Sobol sob(dim, seed, s);
        double pt[8];
        Vec vals(k);
        for (std::uint64_t i = lo; i < hi; ++i) {
            sob.next(pt);
            Vec u = cube_to_sphere(pt, dim);
            fn(u, vals.data());
            acc.sum += vals;
            acc.sum_outer.selfadjointView<Eigen::Lower>().rankUpdate(vals);
            ++acc.count;
        }
        parts[s] = std::move(acc);
    });
    VectorMoments total;
    total.sum = Vec::Zero(k);
    total.sum_outer = Mat::Zero(k, k);
    for (const auto& p : parts) {
        total.sum += p.sum;
        total.sum_outer += p.sum_outer;
        total.count += p.count;
    }
    Mat full = total.sum_outer.selfadjointView<Eigen::Lower>();
    total.sum_outer = std::move(full);
    return total;
}

} // namespace vplab
