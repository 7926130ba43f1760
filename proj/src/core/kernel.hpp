#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fields.hpp"
#include "grid.hpp"

namespace varfrac {

struct QuadratureOptions {
    int gauss_order = 4;
    int grading_depth = 6;
    double tail_radius = 0.0;  // absolute radius about the domain centre; <= 0 means 10 |Omega|
    std::size_t node_budget = 25'000'000;
};

enum class Region { Omega, FullPlane };

struct TailBound {
    double modular = 0.0;  // bound on the truncated part of the full-plane modular
    double energy = 0.0;   // same, with the 1/q weight of the kinetic energy
};

/**
 * Cached quadrature of the variable-order kernel |x - y|^-(1 + q(x,y) s(x,y))
 * against a piecewise-linear function on a fixed grid.
 *
 * Cell pairs at distance >= 2 cells use tensor Gauss rules. A diagonal cell is
 * integrated in (x, d = x - y) with geometric grading toward d = 0; cells that
 * share a vertex use tensor rules graded toward the shared corner. The
 * full-plane region adds the interaction with the zero exterior, truncated to
 * the ball of radius tail_radius about the domain centre. q is extended to the
 * exterior by projecting (x, y) onto the closed domain square; s is evaluated
 * directly.
 *
 * Everything that depends only on geometry and exponents is computed once at
 * construction; evaluations only touch the nodal values.
 */
class KernelQuadrature {
public:
    KernelQuadrature(const Grid& grid, const ExponentField& q, const ExponentField& s,
                     const QuadratureOptions& options = {}, bool swap_arguments = false);

    const Grid& grid() const { return grid_; }
    const QuadratureOptions& options() const { return options_; }
    double tail_radius() const { return tail_radius_; }
    std::size_t node_count() const { return pairs_.size() + exterior_.size(); }

    // Nodes the construction would need for this grid and options.
    static std::size_t estimate_node_count(std::size_t cells, const QuadratureOptions& options);

    // \iint |u(x) - u(y)|^q / |x - y|^(1 + q s) over the region, for u / scale.
    double modular(std::span<const double> nodal, Region region, double scale = 1.0) const;

    // Kinetic energy \iint (1/q) |u(x) - u(y)|^q / |x - y|^(1 + q s) over the full plane.
    double energy(std::span<const double> nodal) const;

    // Kinetic energy and its derivative with respect to every nodal value
    // (grad.size() == nodes). The derivative is the weak form tested with hats.
    double energy_and_gradient(std::span<const double> nodal, std::span<double> grad) const;

    // Luxemburg-type seminorm: the scale making the region modular equal to 1.
    double seminorm(std::span<const double> nodal, Region region) const;

    TailBound tail_bound(std::span<const double> nodal) const;

    // Dense (nodes x nodes) matrix of the quadratic form \iint (du)^2 K with the
    // cached weights; row-major.
    std::vector<double> quadratic_form() const;

private:
    struct Point {
        std::uint32_t cell;
        double xi;
    };
    struct PairEntry {
        std::uint32_t px;
        std::uint32_t py;
        double weight;  // quadrature weight times kernel, symmetric copies folded in
        double q;
    };
    struct ExteriorEntry {
        std::uint32_t px;
        double weight;     // 2 * w(x) * \int_{exterior, |y - c| <= R} kernel dy
        double q;
        double remainder;  // 2 * w(x) * dist(x, dB_R)^(-q s) / (q s)
    };

    std::uint32_t add_point(std::uint32_t cell, double xi);
    std::vector<double> point_values(std::span<const double> nodal, double scale) const;

    template <bool WithGradient, bool InverseQ>
    double accumulate(std::span<const double> nodal, Region region, double scale,
                      std::span<double> grad) const;

    Grid grid_;
    QuadratureOptions options_;
    double tail_radius_ = 0.0;
    std::vector<Point> points_;
    std::vector<PairEntry> pairs_;
    std::vector<ExteriorEntry> exterior_;
};

} // namespace varfrac
