#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace varfrac {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

// Gauss-Legendre rule on [0, 1]; weights sum to 1.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    static GaussRule on_unit_interval(int order);
};

// Composite rule on [0, len] with `depth` levels of geometric grading (ratio 1/2)
// toward 0: panels [len/2^(j+1), len/2^j] for j < depth, plus [0, len/2^depth].
GaussRule graded_rule(double len, int order, int depth);

/// Uniform partition a = x_0 < ... < x_N = b.
class Grid {
public:
    Grid() = default;
    Grid(Interval domain, std::size_t cells);

    const Interval& domain() const { return domain_; }
    std::size_t cells() const { return cells_; }
    std::size_t nodes() const { return cells_ + 1; }
    double h() const { return h_; }
    double node(std::size_t i) const;

    bool operator==(const Grid& other) const {
        return domain_.lo == other.domain_.lo && domain_.hi == other.domain_.hi &&
               cells_ == other.cells_;
    }

private:
    Interval domain_;
    std::size_t cells_ = 0;
    double h_ = 0.0;
};

/**
 * Piecewise-linear function on a uniform grid, implicitly zero outside the
 * grid's domain. With the Dirichlet flag set the end values are pinned to 0.
 */
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(Grid grid, std::vector<double> values, bool dirichlet = true);

    static GridFunction zero(const Grid& grid, bool dirichlet = true);
    static GridFunction interpolate(const Grid& grid, const std::function<double(double)>& f,
                                    bool dirichlet = true);
    // Embeds interior unknowns (size N-1) into a Dirichlet function.
    static GridFunction from_interior(const Grid& grid, std::span<const double> interior);

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }
    bool dirichlet() const { return dirichlet_; }

    std::vector<double> interior() const;

    // Value of the interpolant; 0 outside the domain.
    double operator()(double x) const;

    GridFunction scaled(double c) const;

    bool is_zero() const;

private:
    Grid grid_;
    std::vector<double> values_;
    bool dirichlet_ = true;
};

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);

// L2 distance of the interpolants over `region`, by composite Gauss on a
// partition that contains the nodes of both grids.
double l2_distance(const GridFunction& a, const GridFunction& b, Interval region);
double l2_norm(const GridFunction& u);

// Fixed-order pairwise summation.
double pairwise_sum(std::span<const double> terms);

} // namespace varfrac
