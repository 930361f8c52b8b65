#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "nodegen/expr.hpp"
#include "nodegen/pgm.hpp"
#include "nodegen/rng.hpp"
#include "nodegen/vec.hpp"

namespace nodegen {

enum class SpacingKind { constant, analytic, image };

// Nodal spacing function h: Omega -> (0, inf). Immutable; concurrent
// evaluation is safe.
template <std::size_t dim>
struct SpacingField {
    SpacingKind kind = SpacingKind::constant;
    double const_value = 0;  // valid when kind == constant
    std::function<double(const Vec<dim>&)> fn;

    double operator()(const Vec<dim>& p) const {
        return kind == SpacingKind::constant ? const_value : fn(p);
    }
    bool is_constant() const { return kind == SpacingKind::constant; }
};

template <std::size_t dim>
SpacingField<dim> constant_spacing(double c) {
    if (!(c > 0)) throw std::invalid_argument("constant_spacing: c must be > 0");
    SpacingField<dim> h;
    h.kind = SpacingKind::constant;
    h.const_value = c;
    return h;
}

template <std::size_t dim>
SpacingField<dim> analytic_spacing(std::function<double(const Vec<dim>&)> f) {
    SpacingField<dim> h;
    h.kind = SpacingKind::analytic;
    h.fn = std::move(f);
    return h;
}

template <std::size_t dim>
SpacingField<dim> analytic_spacing(const Expression& expr) {
    auto e = std::make_shared<Expression>(expr);
    return analytic_spacing<dim>([e](const Vec<dim>& p) { return e->eval(p.data(), dim); });
}

template <std::size_t dim>
SpacingField<dim> analytic_spacing(const std::string& expr_src) {
    return analytic_spacing<dim>(Expression::parse(expr_src));
}

// Gray-level to spacing map used for image-derived fields:
//   s(g) = 0.002 + 0.006 g + 0.012 g^8,  g in [0, 1].
inline double gray_to_spacing(double g) {
    double g2 = g * g;
    double g4 = g2 * g2;
    return 0.002 + 0.006 * g + 0.012 * g4 * g4;
}

// h(x, y) = h0 * s(I[floor(w*x)][floor(w*y)] / 255). Both indices scale by
// the image width w; row 0 is the top of the image, so x runs top-down over
// [0, height/width) and y left-right over [0, 1). Indices are clamped into
// the raster.
inline SpacingField<2> image_spacing(const GrayImage& img, double h0) {
    if (img.empty()) throw std::invalid_argument("image_spacing: empty image");
    if (!(h0 > 0)) throw std::invalid_argument("image_spacing: h0 must be > 0");
    auto im = std::make_shared<GrayImage>(img);
    SpacingField<2> h;
    h.kind = SpacingKind::image;
    h.fn = [im, h0](const Vec<2>& p) {
        double w = static_cast<double>(im->width);
        int row = static_cast<int>(std::floor(w * p[0]));
        int col = static_cast<int>(std::floor(w * p[1]));
        row = std::min(std::max(row, 0), im->height - 1);
        col = std::min(std::max(col, 0), im->width - 1);
        return h0 * gray_to_spacing(im->at(row, col) / 255.0);
    };
    return h;
}

// Monte Carlo estimate of N(h) = integral over Omega of dV / h(p)^d, the
// approximate number of nodes required to fill `domain` with spacing h.
// Uniform samples are drawn in the bounding box; h is only evaluated at
// samples inside the domain. For constant h with a known domain volume the
// exact value is returned instead.
template <std::size_t dim, class DomainT>
double estimate_count(const DomainT& domain, const SpacingField<dim>& h, long samples,
                      std::uint64_t seed = 0) {
    if (samples < 1) throw std::invalid_argument("estimate_count: samples must be >= 1");
    if (h.is_constant() && domain.volume_hint >= 0)
        return domain.volume_hint / std::pow(h.const_value, dim);

    Rng rng(seed);
    double bbox_volume = 1;
    for (std::size_t i = 0; i < dim; ++i) bbox_volume *= domain.hi[i] - domain.lo[i];
    double sum = 0;
    for (long s = 0; s < samples; ++s) {
        Vec<dim> p;
        for (std::size_t i = 0; i < dim; ++i) p[i] = rng.uniform(domain.lo[i], domain.hi[i]);
        if (!domain.contains(p)) continue;
        double hp = h(p);
        if (!(hp > 0)) {
            std::ostringstream os;
            os << "estimate_count: h(p) = " << hp << " <= 0 at p = " << p;
            throw std::domain_error(os.str());
        }
        sum += std::pow(hp, -static_cast<double>(dim));
    }
    return bbox_volume * sum / static_cast<double>(samples);
}

}  // namespace nodegen
