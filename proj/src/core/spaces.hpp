#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fields.hpp"
#include "grid.hpp"
#include "kernel.hpp"

namespace varfrac {

/**
 * Composite Gauss rule on a grid together with the exponent sampled at its
 * points, for modulars \int |v|^{p(x)} and Luxemburg norms of functions given
 * by their values at the quadrature points.
 *
 * For grid functions, cells where u vanishes (a sign change or a zero end
 * value) are split at the zero and integrated with rules graded toward it,
 * since |u|^p is only C^1 there.
 */
class LebesgueQuadrature {
public:
    struct Samples {
        std::vector<double> values, weights, exponents;
    };

    LebesgueQuadrature(const Grid& grid, const ExponentField& p, int order = 4);

    const Grid& grid() const { return grid_; }
    std::span<const double> points() const { return x_; }
    std::span<const double> weights() const { return w_; }
    std::span<const double> exponents() const { return p_; }
    double p_lower() const { return p_lower_; }
    double p_upper() const { return p_upper_; }

    // Interpolant values at the quadrature points.
    std::vector<double> sample(const GridFunction& u) const;

    double modular_values(std::span<const double> values, double scale = 1.0) const;
    double norm_values(std::span<const double> values) const;

    // Zero-aware samples of u: the fixed rule away from zeros of u, graded
    // rules on either side of them.
    Samples resolve(const GridFunction& u) const;
    double modular_samples(const Samples& s, double scale = 1.0) const;
    double norm_samples(const Samples& s) const;

    double modular(const GridFunction& u) const { return modular_samples(resolve(u)); }
    double norm(const GridFunction& u) const { return norm_samples(resolve(u)); }

private:
    Grid grid_;
    ExponentField p_field_;
    GaussRule graded_;  // on [0, 1], graded toward 0
    std::size_t per_cell_ = 0;
    std::vector<double> x_, w_, p_;
    std::vector<std::uint32_t> cell_;
    std::vector<double> xi_;
    double p_lower_ = 0.0;
    double p_upper_ = 0.0;
};

double modular(const GridFunction& u, const ExponentField& p, int order = 4);
double luxemburg_norm(const GridFunction& u, const ExponentField& p, int order = 4);

struct SandwichCheck {
    double lhs = 0.0;
    double mid = 0.0;
    double rhs = 0.0;
    double norm = 0.0;
    bool holds = false;
};

// min(|u|^p-, |u|^p+) <= modular(u) <= max(...) with 1e-9 relative slack.
SandwichCheck check_sandwich(const GridFunction& u, const ExponentField& p, int order = 4);

struct HoelderCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double constant = 0.0;
    bool holds = false;
};

// The conjugate exponent p / (p - 1) as a field on the same domain.
ExponentField conjugate_exponent(const ExponentField& p);

// \int |u v| <= (1/p- + 1/(p')-) |u|_p |v|_p' with (p')- = inf p' = p+/(p+ - 1).
HoelderCheck check_hoelder(const GridFunction& u, const GridFunction& v, const ExponentField& p,
                           int order = 4);

// Same inequality with the constant written as 1/p- + (p- - 1)/p-, i.e. 1.
// Not a theorem for non-constant p; reported, not asserted.
HoelderCheck check_hoelder_unit_constant(const GridFunction& u, const GridFunction& v,
                                         const ExponentField& p, int order = 4);

// |u v|_p <= C |u|_r |v|_q with 1/p = 1/r + 1/q.
HoelderCheck check_hoelder3(const GridFunction& u, const GridFunction& v, const ExponentField& r,
                            const ExponentField& q, double constant = 2.0, int order = 4);

/**
 * Seeded test functions for the embedding estimate, in a fixed order so that
 * a larger dictionary always extends a smaller one: 15 hats (5 centres x 3
 * widths), 5 smooth bumps, then random Dirichlet piecewise-linear functions.
 */
std::vector<GridFunction> embedding_dictionary(const Grid& grid, int size, std::uint64_t seed);

struct EmbeddingEstimate {
    double constant = 0.0;  // safety_factor * max ratio
    double max_ratio = 0.0;
    int argmax = -1;
    std::vector<double> ratios;
};

/**
 * Ratios |u|_{L^r} / [u]_{q,s,Omega} over the dictionary. Seminorms depend
 * only on the kernel, so they are computed once and reused for every r.
 */
class EmbeddingEstimator {
public:
    // Throws Error(DegenerateDictionary) when a member has seminorm < 1e-14.
    EmbeddingEstimator(const KernelQuadrature& kernel, int dictionary_size, std::uint64_t seed);
    EmbeddingEstimator(const KernelQuadrature& kernel, std::vector<GridFunction> dictionary);

    const std::vector<GridFunction>& dictionary() const { return dictionary_; }
    std::span<const double> seminorms() const { return seminorms_; }

    EmbeddingEstimate estimate(const ExponentField& r, double safety_factor = 1.5) const;

private:
    std::vector<GridFunction> dictionary_;
    std::vector<double> seminorms_;
};

EmbeddingEstimate estimate_embedding_constant(const ExponentField& r, int dictionary_size,
                                              const KernelQuadrature& kernel,
                                              std::uint64_t seed, double safety_factor = 1.5);

} // namespace varfrac
