#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace decorr {

// All sampling uses std::mt19937_64, whose output sequence is fixed by the C++
// standard. The std:: distributions are implementation-defined, so the
// transforms below are spelled out to keep seeded outputs portable:
//   uniform      ((x >> 11) + 0.5) * 2^-53, strictly inside (0, 1)
//   categorical  inverse CDF by linear scan over the probability row
//   Dirichlet(1) normalized -ln(uniform) draws
using Rng = std::mt19937_64;

double uniform_open(Rng& rng) noexcept;

// Index drawn from a probability row; the last index with
// positive mass absorbs rounding slack.
std::size_t categorical(Rng& rng, std::span<const double> probs);

// Uniform draw from the (n-1)-simplex.
std::vector<double> dirichlet_uniform(Rng& rng, std::size_t n);

}  // namespace decorr
