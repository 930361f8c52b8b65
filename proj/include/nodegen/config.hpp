#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "nodegen/domain.hpp"
#include "nodegen/pgm.hpp"
#include "nodegen/spacing.hpp"

namespace nodegen {

// Textual domain description used by the CLI and node-file headers:
//   box <lo...> <hi...> | ball <center...> <radius> | diff <a> <b>
// The dimension is inferred when it is unambiguous, or forced via dim_hint.
struct DomainSpec {
    enum class Kind { box, ball, diff };
    Kind kind = Kind::box;
    int dim = 0;
    std::vector<double> params;  // box: lo,hi; ball: center,radius
    std::shared_ptr<DomainSpec> a, b;

    static DomainSpec parse(const std::string& text, int dim_hint = 0);
    std::string to_string() const;

    template <std::size_t d>
    Domain<d> build() const {
        if (d != dim) throw std::invalid_argument("DomainSpec: dimension mismatch");
        switch (kind) {
            case Kind::box: {
                Vec<d> lo, hi;
                for (std::size_t i = 0; i < d; ++i) {
                    lo[i] = params[i];
                    hi[i] = params[d + i];
                }
                return make_box<d>(lo, hi);
            }
            case Kind::ball: {
                Vec<d> c;
                for (std::size_t i = 0; i < d; ++i) c[i] = params[i];
                return make_ball<d>(c, params[d]);
            }
            case Kind::diff:
                return difference<d>(a->build<d>(), b->build<d>());
        }
        throw std::logic_error("DomainSpec: bad kind");
    }
};

// Textual spacing description: a plain number (constant), an arithmetic
// expression in x,y,z (analytic), or "img:<path.pgm>:<h0>" (image-derived).
struct SpacingSpec {
    enum class Kind { constant, analytic, image };
    Kind kind = Kind::constant;
    double value = 0;        // constant
    std::string expr;        // analytic
    std::string image_path;  // image
    double h0 = 1.0;         // image

    static SpacingSpec parse(const std::string& text);
    std::string to_string() const;
    bool is_constant() const { return kind == Kind::constant; }

    template <std::size_t d>
    SpacingField<d> build() const {
        switch (kind) {
            case Kind::constant:
                return constant_spacing<d>(value);
            case Kind::analytic:
                return analytic_spacing<d>(expr);
            case Kind::image:
                if constexpr (d == 2) {
                    return image_spacing(load_pgm_file(image_path), h0);
                } else {
                    throw std::invalid_argument("image spacing is two-dimensional");
                }
        }
        throw std::logic_error("SpacingSpec: bad kind");
    }
};

}  // namespace nodegen
