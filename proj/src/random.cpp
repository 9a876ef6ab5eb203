#include "decorr/random.hpp"

#include <cmath>

namespace decorr {

double uniform_open(Rng& rng) noexcept {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

std::size_t categorical(Rng& rng, std::span<const double> probs) {
    const double r = uniform_open(rng);
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        last = i;
        acc += probs[i];
        if (r < acc) return i;
    }
    return last;
}

std::vector<double> dirichlet_uniform(Rng& rng, std::size_t n) {
    std::vector<double> x(n);
    double total = 0.0;
    for (auto& v : x) {
        v = -std::log(uniform_open(rng));
        total += v;
    }
    for (auto& v : x) v /= total;
    return x;
}

}  // namespace decorr
