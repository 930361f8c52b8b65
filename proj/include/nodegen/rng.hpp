#pragma once

#include <cstdint>
#include <random>

#include "nodegen/vec.hpp"

namespace nodegen {

// All randomized operations take an explicit Rng so that runs are reproducible
// from a single seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // uniform in [0, 1)
    double uniform() { return uni_(gen_); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

    double gaussian() { return normal_(gen_); }

    // uniform direction on the unit sphere S^{dim-1}
    template <std::size_t dim>
    Vec<dim> sphere_dir() {
        while (true) {
            Vec<dim> v;
            for (std::size_t i = 0; i < dim; ++i) v[i] = gaussian();
            double n = norm(v);
            if (n > 1e-30) return (1.0 / n) * v;
        }
    }

    std::mt19937_64& engine() { return gen_; }

  private:
    std::mt19937_64 gen_;
    std::uniform_real_distribution<double> uni_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace nodegen
