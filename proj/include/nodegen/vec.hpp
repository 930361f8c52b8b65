#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>

namespace nodegen {

// Fixed-dimension point/vector type. Dimension is a template parameter in the
// core; the CLI dispatches on the runtime value.
template <std::size_t dim>
using Vec = std::array<double, dim>;

template <std::size_t dim>
inline Vec<dim> operator+(const Vec<dim>& a, const Vec<dim>& b) {
    Vec<dim> r;
    for (std::size_t i = 0; i < dim; ++i) r[i] = a[i] + b[i];
    return r;
}

template <std::size_t dim>
inline Vec<dim> operator-(const Vec<dim>& a, const Vec<dim>& b) {
    Vec<dim> r;
    for (std::size_t i = 0; i < dim; ++i) r[i] = a[i] - b[i];
    return r;
}

template <std::size_t dim>
inline Vec<dim> operator*(double s, const Vec<dim>& a) {
    Vec<dim> r;
    for (std::size_t i = 0; i < dim; ++i) r[i] = s * a[i];
    return r;
}

template <std::size_t dim>
inline double dot(const Vec<dim>& a, const Vec<dim>& b) {
    double s = 0;
    for (std::size_t i = 0; i < dim; ++i) s += a[i] * b[i];
    return s;
}

template <std::size_t dim>
inline double dist2(const Vec<dim>& a, const Vec<dim>& b) {
    double s = 0;
    for (std::size_t i = 0; i < dim; ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

template <std::size_t dim>
inline double dist(const Vec<dim>& a, const Vec<dim>& b) {
    return std::sqrt(dist2(a, b));
}

template <std::size_t dim>
inline double norm(const Vec<dim>& a) {
    return std::sqrt(dot(a, a));
}

template <std::size_t dim>
inline Vec<dim> zero_vec() {
    Vec<dim> r;
    r.fill(0.0);
    return r;
}

template <std::size_t dim>
inline std::ostream& operator<<(std::ostream& os, const Vec<dim>& v) {
    os << '(';
    for (std::size_t i = 0; i < dim; ++i) os << (i ? ", " : "") << v[i];
    return os << ')';
}

}  // namespace nodegen
