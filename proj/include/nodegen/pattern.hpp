#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "nodegen/rng.hpp"
#include "nodegen/vec.hpp"

namespace nodegen {

namespace detail {

// k >= 1 points on S^{d-1}; k == 1 degenerates to a single point on the
// first axis (used for near-pole latitude rings).
template <std::size_t dim>
std::vector<Vec<dim>> sphere_pattern_impl(int k) {
    std::vector<Vec<dim>> pts;
    if constexpr (dim == 1) {
        pts.push_back(Vec<1>{1.0});
        if (k >= 2) pts.push_back(Vec<1>{-1.0});
    } else if constexpr (dim == 2) {
        double phi0 = 2.0 * M_PI / k;
        for (int j = 0; j < k; ++j)
            pts.push_back(Vec<2>{std::cos(j * phi0), std::sin(j * phi0)});
    } else {
        // Latitude rings at polar angles theta_m = m*pi/M, M = ceil(k/2);
        // each ring carries ceil(k sin theta) points (at least one), poles a
        // single point. With k points on the great circle this reproduces
        // 14 points for k=6 and 48 for k=12 in 3-D.
        int M = (k + 1) / 2;
        for (int m = 0; m <= M; ++m) {
            double theta = m * M_PI / M;
            double s = std::sin(theta), c = std::cos(theta);
            if (m == 0 || m == M) {
                Vec<dim> pole = zero_vec<dim>();
                pole[dim - 1] = m == 0 ? 1.0 : -1.0;
                pts.push_back(pole);
                continue;
            }
            int ring_k = std::max(1, static_cast<int>(std::ceil(k * s)));
            for (const Vec<dim - 1>& q : sphere_pattern_impl<dim - 1>(ring_k)) {
                Vec<dim> p;
                for (std::size_t i = 0; i + 1 < dim; ++i) p[i] = s * q[i];
                p[dim - 1] = c;
                pts.push_back(p);
            }
        }
    }
    return pts;
}

}  // namespace detail

// Fixed discretization of the unit sphere S^{d-1} used by the pattern
// candidate strategies. In 2-D: k equally spaced angles starting at phi = 0.
// Exact duplicates are removed.
template <std::size_t dim>
std::vector<Vec<dim>> unit_sphere_pattern(int k) {
    static_assert(dim >= 1);
    if (k < 2) throw std::invalid_argument("unit_sphere_pattern: k must be >= 2");
    std::vector<Vec<dim>> pts = detail::sphere_pattern_impl<dim>(k);
    std::vector<Vec<dim>> unique;
    for (const Vec<dim>& p : pts) {
        bool dup = false;
        for (const Vec<dim>& q : unique)
            if (dist2(p, q) < 1e-24) {
                dup = true;
                break;
            }
        if (!dup) unique.push_back(p);
    }
    return unique;
}

// Random rotation matrix, Haar-uniform on SO(d): QR of a Gaussian matrix with
// the R-diagonal sign fix, then a determinant fix into SO(d).
template <std::size_t dim>
Eigen::Matrix<double, dim, dim> random_rotation(Rng& rng) {
    using Mat = Eigen::Matrix<double, dim, dim>;
    if constexpr (dim == 1) {
        (void)rng;
        return Mat::Identity();
    } else if constexpr (dim == 2) {
        double a = rng.uniform(0.0, 2.0 * M_PI);
        Mat r;
        r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
        return r;
    } else {
        Mat a;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) a(i, j) = rng.gaussian();
        Eigen::HouseholderQR<Mat> qr(a);
        Mat q = qr.householderQ();
        Mat r = qr.matrixQR().template triangularView<Eigen::Upper>();
        for (std::size_t j = 0; j < dim; ++j)
            if (r(j, j) < 0) q.col(j) *= -1.0;
        if (q.determinant() < 0) q.col(dim - 1) *= -1.0;
        return q;
    }
}

enum class CandidateVariant { random, fixed_pattern, randomized_pattern };

// Candidate generation parameters. `n` is the number of random candidates for
// the random variant; `k` parametrizes the sphere pattern for the pattern
// variants. Defaults follow the recommended candidate counts: about 15 in
// 2-D and about 30 in 3-D.
struct CandidateStrategy {
    CandidateVariant variant = CandidateVariant::randomized_pattern;
    int n = 15;
    int k = 15;

    static int default_pattern_k(int dim) {
        if (dim <= 2) return 15;
        if (dim == 3) return 9;  // smallest k whose 3-D pattern has >= 30 points
        return 9 + 3 * (dim - 3);
    }

    static CandidateStrategy defaults_for(int dim, CandidateVariant v = CandidateVariant::randomized_pattern) {
        CandidateStrategy s;
        s.variant = v;
        s.k = default_pattern_k(dim);
        s.n = dim <= 2 ? 15 : 30;
        return s;
    }
};

// Stateful generator: holds the precomputed pattern and emits the candidate
// set for one expansion around p with radius r. All candidates lie at
// distance exactly r from p.
template <std::size_t dim>
class CandidateSource {
  public:
    CandidateSource(const CandidateStrategy& strategy, Rng& rng)
        : strategy_(strategy), rng_(rng) {
        if (strategy.variant == CandidateVariant::random) {
            if (strategy.n < 1) throw std::invalid_argument("candidate strategy: n must be >= 1");
        } else {
            pattern_ = unit_sphere_pattern<dim>(strategy.k);
        }
    }

    std::size_t count() const {
        return strategy_.variant == CandidateVariant::random ? strategy_.n : pattern_.size();
    }

    // Fills `out` with the candidates for one expansion.
    void generate(const Vec<dim>& p, double r, std::vector<Vec<dim>>& out) {
        out.clear();
        switch (strategy_.variant) {
            case CandidateVariant::random:
                for (int i = 0; i < strategy_.n; ++i)
                    out.push_back(p + r * rng_.sphere_dir<dim>());
                break;
            case CandidateVariant::fixed_pattern:
                for (const Vec<dim>& u : pattern_) out.push_back(p + r * u);
                break;
            case CandidateVariant::randomized_pattern: {
                auto rot = random_rotation<dim>(rng_);  // fresh rotation per expansion
                for (const Vec<dim>& u : pattern_) {
                    Vec<dim> v;
                    for (std::size_t i = 0; i < dim; ++i) {
                        double s = 0;
                        for (std::size_t j = 0; j < dim; ++j) s += rot(i, j) * u[j];
                        v[i] = s;
                    }
                    out.push_back(p + r * v);
                }
                break;
            }
        }
    }

  private:
    CandidateStrategy strategy_;
    Rng& rng_;
    std::vector<Vec<dim>> pattern_;
};

// One-shot form of the above.
template <std::size_t dim>
std::vector<Vec<dim>> generate_candidates(const Vec<dim>& p, double r,
                                          const CandidateStrategy& strategy, Rng& rng) {
    if (!(r > 0)) throw std::invalid_argument("generate_candidates: r must be > 0");
    CandidateSource<dim> source(strategy, rng);
    std::vector<Vec<dim>> out;
    source.generate(p, r, out);
    return out;
}

}  // namespace nodegen
