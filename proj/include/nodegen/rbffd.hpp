#pragma once

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nodegen/spatial.hpp"
#include "nodegen/vec.hpp"

namespace nodegen {

// Polyharmonic spline RBF-FD configuration: phi(r) = r^k for odd k,
// r^k log r for even k, augmented with monomials up to order m, on stencils
// of the nn nearest nodes (center included).
struct PhsConfig {
    int k = 3;
    int m = 2;
    int nn = 15;
};

namespace detail {

inline double phs(double r, int k) {
    if (r <= 0) return 0;
    double rk = std::pow(r, k);
    return k % 2 == 1 ? rk : rk * std::log(r);
}

// Laplacian of phi(|x - c|) in d dimensions, evaluated at distance r from c.
inline double phs_laplacian(double r, int k, int d) {
    if (r <= 0) return 0;
    double rk2 = std::pow(r, k - 2);
    double a = static_cast<double>(k) * (k + d - 2);
    if (k % 2 == 1) return a * rk2;
    return rk2 * (a * std::log(r) + 2 * k + d - 2);
}

// All monomial exponent multi-indices with |alpha| <= m, graded order.
template <std::size_t dim>
std::vector<std::array<int, dim>> monomial_exponents(int m) {
    std::vector<std::array<int, dim>> out;
    std::array<int, dim> alpha{};
    std::function<void(int, int)> rec = [&](int axis, int remaining) {
        if (axis == dim - 1) {
            alpha[axis] = remaining;
            out.push_back(alpha);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            alpha[axis] = e;
            rec(axis + 1, remaining - e);
        }
    };
    for (int total = 0; total <= m; ++total) rec(0, total);
    return out;
}

template <std::size_t dim>
double monomial_eval(const Vec<dim>& p, const std::array<int, dim>& alpha) {
    double v = 1;
    for (std::size_t i = 0; i < dim; ++i)
        for (int e = 0; e < alpha[i]; ++e) v *= p[i];
    return v;
}

}  // namespace detail

inline std::size_t augmentation_size(int dim, int m) {
    // C(m + dim, dim)
    std::size_t v = 1;
    for (int i = 1; i <= dim; ++i) v = v * (m + i) / i;
    return v;
}

// Laplacian stencil weights at `center` over `neighbors` (which include the
// center itself): solves the saddle-point system [Phi P; P^T 0] in local
// coordinates shifted to the center and scaled by the stencil radius.
template <std::size_t dim>
Eigen::VectorXd phs_laplacian_weights(const Vec<dim>& center, const std::vector<Vec<dim>>& neighbors,
                                      const PhsConfig& cfg) {
    const int nn = static_cast<int>(neighbors.size());
    const auto exps = detail::monomial_exponents<dim>(cfg.m);
    const int np = static_cast<int>(exps.size());
    if (nn < np)
        throw std::invalid_argument("phs_laplacian_weights: stencil smaller than augmentation basis");

    double rho = 0;
    for (const Vec<dim>& q : neighbors) rho = std::max(rho, dist(q, center));
    if (!(rho > 0)) throw std::invalid_argument("phs_laplacian_weights: all stencil nodes coincide");
    double inv_rho = 1.0 / rho;

    std::vector<Vec<dim>> local(neighbors.size());
    for (int j = 0; j < nn; ++j) local[j] = inv_rho * (neighbors[j] - center);

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nn + np, nn + np);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nn + np);
    for (int i = 0; i < nn; ++i) {
        for (int j = i + 1; j < nn; ++j) {
            double v = detail::phs(dist(local[i], local[j]), cfg.k);
            A(i, j) = v;
            A(j, i) = v;
        }
        for (int p = 0; p < np; ++p) {
            double v = detail::monomial_eval(local[i], exps[p]);
            A(i, nn + p) = v;
            A(nn + p, i) = v;
        }
        rhs(i) = detail::phs_laplacian(norm(local[i]), cfg.k, dim);
    }
    // Laplacian of a monomial at the origin: 2 for pure quadratics, else 0.
    for (int p = 0; p < np; ++p) {
        int total = 0, max_e = 0;
        for (std::size_t i = 0; i < dim; ++i) {
            total += exps[p][i];
            max_e = std::max(max_e, exps[p][i]);
        }
        if (total == 2 && max_e == 2) rhs(nn + p) = 2.0;
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible())
        throw std::runtime_error("phs_laplacian_weights: singular local system (degenerate stencil)");
    Eigen::VectorXd sol = lu.solve(rhs);
    return sol.head(nn) * (inv_rho * inv_rho);
}

// Sparse discretization of the Poisson problem: interior rows carry Laplacian
// stencil weights with b = f, Dirichlet rows are identity with b = g.
struct OperatorDiscretization {
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
    std::vector<char> is_boundary;
    std::size_t interior_count = 0;
};

template <std::size_t dim>
OperatorDiscretization assemble_poisson(const std::vector<Vec<dim>>& nodes,
                                        const std::vector<char>& boundary_mask, const PhsConfig& cfg,
                                        const std::function<double(const Vec<dim>&)>& f,
                                        const std::function<double(const Vec<dim>&)>& g) {
    const std::size_t n = nodes.size();
    if (boundary_mask.size() != n)
        throw std::invalid_argument("assemble_poisson: mask size mismatch");
    if (static_cast<std::size_t>(cfg.nn) > n)
        throw std::invalid_argument("assemble_poisson: stencil larger than node set");
    std::size_t nb = 0;
    for (char b : boundary_mask) nb += b ? 1 : 0;
    if (nb == 0) throw std::invalid_argument("assemble_poisson: no boundary nodes marked");

    KdTree<dim> tree(nodes);
    OperatorDiscretization op;
    op.is_boundary = boundary_mask;
    op.interior_count = n - nb;
    op.rhs.resize(n);

    struct Row {
        std::vector<std::int64_t> cols;
        Eigen::VectorXd w;
    };
    std::vector<Row> rows(n);
    std::string failure;

#pragma omp parallel
    {
        std::vector<Vec<dim>> stencil;
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
            if (boundary_mask[i]) continue;
            auto hits = tree.knn(nodes[i], static_cast<std::size_t>(cfg.nn));
            stencil.clear();
            rows[i].cols.clear();
            for (const NearestHit& h : hits) {
                stencil.push_back(nodes[static_cast<std::size_t>(h.index)]);
                rows[i].cols.push_back(h.index);
            }
            try {
                rows[i].w = phs_laplacian_weights<dim>(nodes[i], stencil, cfg);
            } catch (const std::exception& e) {
#pragma omp critical
                failure = "node " + std::to_string(i) + ": " + e.what();
            }
        }
    }
    if (!failure.empty()) throw std::runtime_error("assemble_poisson: " + failure);

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(n * cfg.nn);
    for (std::size_t i = 0; i < n; ++i) {
        if (boundary_mask[i]) {
            triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
            op.rhs(i) = g(nodes[i]);
        } else {
            for (std::size_t j = 0; j < rows[i].cols.size(); ++j)
                triplets.emplace_back(static_cast<int>(i), static_cast<int>(rows[i].cols[j]),
                                      rows[i].w(j));
            op.rhs(i) = f(nodes[i]);
        }
    }
    op.matrix.resize(static_cast<int>(n), static_cast<int>(n));
    op.matrix.setFromTriplets(triplets.begin(), triplets.end());
    op.matrix.makeCompressed();
    return op;
}

// Serial reference of the assembly, kept for testing the OpenMP kernel.
namespace serial {

template <std::size_t dim>
OperatorDiscretization assemble_poisson(const std::vector<Vec<dim>>& nodes,
                                        const std::vector<char>& boundary_mask, const PhsConfig& cfg,
                                        const std::function<double(const Vec<dim>&)>& f,
                                        const std::function<double(const Vec<dim>&)>& g) {
    const std::size_t n = nodes.size();
    if (boundary_mask.size() != n)
        throw std::invalid_argument("assemble_poisson: mask size mismatch");
    if (static_cast<std::size_t>(cfg.nn) > n)
        throw std::invalid_argument("assemble_poisson: stencil larger than node set");
    std::size_t nb = 0;
    for (char b : boundary_mask) nb += b ? 1 : 0;
    if (nb == 0) throw std::invalid_argument("assemble_poisson: no boundary nodes marked");

    KdTree<dim> tree(nodes);
    OperatorDiscretization op;
    op.is_boundary = boundary_mask;
    op.interior_count = n - nb;
    op.rhs.resize(n);
    std::vector<Eigen::Triplet<double>> triplets;
    std::vector<Vec<dim>> stencil;
    for (std::size_t i = 0; i < n; ++i) {
        if (boundary_mask[i]) {
            triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
            op.rhs(i) = g(nodes[i]);
            continue;
        }
        auto hits = tree.knn(nodes[i], static_cast<std::size_t>(cfg.nn));
        stencil.clear();
        for (const NearestHit& h : hits) stencil.push_back(nodes[static_cast<std::size_t>(h.index)]);
        Eigen::VectorXd w;
        try {
            w = phs_laplacian_weights<dim>(nodes[i], stencil, cfg);
        } catch (const std::exception& e) {
            throw std::runtime_error("assemble_poisson: node " + std::to_string(i) + ": " + e.what());
        }
        for (std::size_t j = 0; j < hits.size(); ++j)
            triplets.emplace_back(static_cast<int>(i), static_cast<int>(hits[j].index), w(j));
        op.rhs(i) = f(nodes[i]);
    }
    op.matrix.resize(static_cast<int>(n), static_cast<int>(n));
    op.matrix.setFromTriplets(triplets.begin(), triplets.end());
    op.matrix.makeCompressed();
    return op;
}

}  // namespace serial

// Solves the assembled system to a relative residual <= tol: BiCGSTAB with
// an incomplete-LU preconditioner first, sparse LU as the fallback. Throws
// if neither reaches the tolerance, reporting the achieved residual.
inline Eigen::VectorXd solve(const OperatorDiscretization& op, double tol = 1e-10) {
    double bnorm = op.rhs.norm();
    if (bnorm == 0) bnorm = 1;
    auto residual = [&](const Eigen::VectorXd& u) { return (op.matrix * u - op.rhs).norm() / bnorm; };

    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> bicg;
    bicg.preconditioner().setFillfactor(20);
    bicg.preconditioner().setDroptol(1e-5);
    bicg.setTolerance(std::min(tol, 1e-12));
    bicg.setMaxIterations(200);
    bicg.compute(op.matrix);
    if (bicg.info() == Eigen::Success) {
        Eigen::VectorXd u = bicg.solve(op.rhs);
        if (residual(u) <= tol) return u;
    }

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(op.matrix);
    if (lu.info() == Eigen::Success) {
        Eigen::VectorXd u = lu.solve(op.rhs);
        double r = residual(u);
        if (r <= tol) return u;
        throw std::runtime_error("solve: residual " + std::to_string(r) + " above tolerance " +
                                 std::to_string(tol));
    }
    throw std::runtime_error("solve: factorization failed (singular system?)");
}

// Local RBF interpolant of nodal values on the stencil of each node, used to
// evaluate the discrete solution off the nodes. Coefficients are produced
// lazily per stencil with the same PHS + monomial basis as the weights.
template <std::size_t dim>
class StencilInterpolant {
  public:
    StencilInterpolant(const std::vector<Vec<dim>>& nodes, const Eigen::VectorXd& values,
                       const PhsConfig& cfg)
        : nodes_(nodes), values_(values), cfg_(cfg), tree_(nodes), coeff_(nodes.size()) {
        exps_ = detail::monomial_exponents<dim>(cfg.m);
    }

    // Builds every stencil's coefficients up front; required before
    // concurrent evaluation.
    void prepare_all() {
#pragma omp parallel for schedule(dynamic, 64)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(nodes_.size()); ++i)
            local(static_cast<std::size_t>(i));
    }

    double operator()(const Vec<dim>& p) const {
        std::size_t home = static_cast<std::size_t>(tree_.nearest(p).index);
        const Local& loc = local(home);
        Vec<dim> pl = loc.inv_rho * (p - loc.center);
        double s = 0;
        for (std::size_t j = 0; j < loc.stencil.size(); ++j) {
            Vec<dim> yj = loc.inv_rho * (nodes_[loc.stencil[j]] - loc.center);
            s += loc.a(j) * detail::phs(dist(pl, yj), cfg_.k);
        }
        for (std::size_t m = 0; m < exps_.size(); ++m)
            s += loc.a(loc.stencil.size() + m) * detail::monomial_eval(pl, exps_[m]);
        return s;
    }

  private:
    struct Local {
        bool ready = false;
        Vec<dim> center{};
        double inv_rho = 1;
        std::vector<std::size_t> stencil;
        Eigen::VectorXd a;  // rbf + monomial coefficients
    };

    const std::vector<Vec<dim>>& nodes_;
    Eigen::VectorXd values_;
    PhsConfig cfg_;
    KdTree<dim> tree_;
    mutable std::vector<Local> coeff_;
    std::vector<std::array<int, dim>> exps_;

    const Local& local(std::size_t i) const {
        Local& loc = coeff_[i];
        if (loc.ready) return loc;
        auto hits = tree_.knn(nodes_[i], static_cast<std::size_t>(cfg_.nn));
        loc.center = nodes_[i];
        loc.stencil.clear();
        double rho = 0;
        for (const NearestHit& h : hits) {
            loc.stencil.push_back(static_cast<std::size_t>(h.index));
            rho = std::max(rho, std::sqrt(h.dist2));
        }
        loc.inv_rho = 1.0 / rho;
        const int nn = static_cast<int>(loc.stencil.size());
        const int np = static_cast<int>(exps_.size());
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nn + np, nn + np);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nn + np);
        std::vector<Vec<dim>> local_pts(nn);
        for (int j = 0; j < nn; ++j) local_pts[j] = loc.inv_rho * (nodes_[loc.stencil[j]] - loc.center);
        for (int r = 0; r < nn; ++r) {
            for (int c = r + 1; c < nn; ++c) {
                double v = detail::phs(dist(local_pts[r], local_pts[c]), cfg_.k);
                A(r, c) = v;
                A(c, r) = v;
            }
            for (int p = 0; p < np; ++p) {
                double v = detail::monomial_eval(local_pts[r], exps_[p]);
                A(r, nn + p) = v;
                A(nn + p, r) = v;
            }
            rhs(r) = values_(static_cast<int>(loc.stencil[r]));
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        if (!lu.isInvertible())
            throw std::runtime_error("StencilInterpolant: singular local system at node " +
                                     std::to_string(i));
        loc.a = lu.solve(rhs);
        loc.ready = true;
        return loc;
    }
};

// Mean absolute difference between the discrete solution (interpolated off
// the nodes) and `exact` over a uniform grid of points_per_axis^dim points
// covering [lo, hi].
template <std::size_t dim>
double l1_error(const std::vector<Vec<dim>>& nodes, const Eigen::VectorXd& u_h,
                const std::function<double(const Vec<dim>&)>& exact, const Vec<dim>& lo,
                const Vec<dim>& hi, int points_per_axis, const PhsConfig& cfg) {
    if (points_per_axis < 2) throw std::invalid_argument("l1_error: empty evaluation grid");
    StencilInterpolant<dim> interp(nodes, u_h, cfg);
    interp.prepare_all();

    std::size_t total = 1;
    for (std::size_t i = 0; i < dim; ++i) total *= static_cast<std::size_t>(points_per_axis);
    double sum = 0;
#pragma omp parallel for schedule(dynamic, 256) reduction(+ : sum)
    for (std::int64_t flat = 0; flat < static_cast<std::int64_t>(total); ++flat) {
        std::int64_t rem = flat;
        Vec<dim> p;
        for (std::size_t i = 0; i < dim; ++i) {
            std::int64_t ix = rem % points_per_axis;
            rem /= points_per_axis;
            p[i] = lo[i] + (hi[i] - lo[i]) * static_cast<double>(ix) / (points_per_axis - 1);
        }
        sum += std::abs(exact(p) - interp(p));
    }
    return sum / static_cast<double>(total);
}

// All eigenvalues of the interior-interior block of the operator (dense
// eigensolve; refuses above 5000 interior nodes).
inline std::vector<std::complex<double>> laplacian_spectrum(const OperatorDiscretization& op) {
    if (op.interior_count > 5000)
        throw std::invalid_argument("laplacian_spectrum: interior block larger than 5000 nodes");
    std::vector<int> interior_of(op.is_boundary.size(), -1);
    int m = 0;
    for (std::size_t i = 0; i < op.is_boundary.size(); ++i)
        if (!op.is_boundary[i]) interior_of[i] = m++;

    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(m, m);
    for (int col = 0; col < op.matrix.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(op.matrix, col); it; ++it) {
            int ri = interior_of[static_cast<std::size_t>(it.row())];
            int ci = interior_of[static_cast<std::size_t>(it.col())];
            if (ri >= 0 && ci >= 0) block(ri, ci) = it.value();
        }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(block, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw std::runtime_error("laplacian_spectrum: eigensolver failed");
    std::vector<std::complex<double>> out(m);
    for (int i = 0; i < m; ++i) out[i] = es.eigenvalues()(i);
    return out;
}

}  // namespace nodegen
