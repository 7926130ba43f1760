#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "error.hpp"

namespace varfrac {

GaussRule GaussRule::on_unit_interval(int order) {
    if (order < 1) {
        throw Error(ErrorCode::Argument, "Gauss order must be >= 1");
    }
    const int n = order;
    GaussRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            dp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        // [-1, 1] -> [0, 1], ascending
        rule.nodes[i] = 0.5 * (1.0 - z);
        rule.nodes[n - 1 - i] = 0.5 * (1.0 + z);
        rule.weights[i] = 0.5 * w;
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

GaussRule graded_rule(double len, int order, int depth) {
    const GaussRule base = GaussRule::on_unit_interval(order);
    GaussRule out;
    auto add_panel = [&](double lo, double hi) {
        for (std::size_t q = 0; q < base.nodes.size(); ++q) {
            out.nodes.push_back(lo + (hi - lo) * base.nodes[q]);
            out.weights.push_back((hi - lo) * base.weights[q]);
        }
    };
    const double innermost = len * std::ldexp(1.0, -depth);
    add_panel(0.0, innermost);
    for (int j = depth - 1; j >= 0; --j) {
        add_panel(len * std::ldexp(1.0, -(j + 1)), len * std::ldexp(1.0, -j));
    }
    return out;
}

Grid::Grid(Interval domain, std::size_t cells) : domain_(domain), cells_(cells) {
    if (!(domain.lo < domain.hi)) {
        throw Error(ErrorCode::Validation, "grid domain must satisfy a < b");
    }
    if (cells < 4) {
        throw Error(ErrorCode::Validation, "grid needs at least 4 cells");
    }
    h_ = domain.length() / static_cast<double>(cells);
}

double Grid::node(std::size_t i) const {
    if (i == cells_) return domain_.hi;
    return domain_.lo + static_cast<double>(i) * h_;
}

GridFunction::GridFunction(Grid grid, std::vector<double> values, bool dirichlet)
    : grid_(grid), values_(std::move(values)), dirichlet_(dirichlet) {
    if (values_.size() != grid_.nodes()) {
        throw Error(ErrorCode::Argument, "grid function needs one value per node");
    }
    if (dirichlet_) {
        values_.front() = 0.0;
        values_.back() = 0.0;
    }
}

GridFunction GridFunction::zero(const Grid& grid, bool dirichlet) {
    return GridFunction(grid, std::vector<double>(grid.nodes(), 0.0), dirichlet);
}

GridFunction GridFunction::interpolate(const Grid& grid, const std::function<double(double)>& f,
                                       bool dirichlet) {
    std::vector<double> v(grid.nodes());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.node(i));
    return GridFunction(grid, std::move(v), dirichlet);
}

GridFunction GridFunction::from_interior(const Grid& grid, std::span<const double> interior) {
    if (interior.size() + 2 != grid.nodes()) {
        throw Error(ErrorCode::Argument, "interior vector has the wrong length");
    }
    std::vector<double> v(grid.nodes(), 0.0);
    std::copy(interior.begin(), interior.end(), v.begin() + 1);
    return GridFunction(grid, std::move(v), true);
}

std::vector<double> GridFunction::interior() const {
    return std::vector<double>(values_.begin() + 1, values_.end() - 1);
}

double GridFunction::operator()(double x) const {
    const Interval& d = grid_.domain();
    if (x < d.lo || x > d.hi) return 0.0;
    const double t = (x - d.lo) / grid_.h();
    auto cell = static_cast<std::size_t>(std::floor(t));
    if (cell >= grid_.cells()) cell = grid_.cells() - 1;
    const double xi = t - static_cast<double>(cell);
    return values_[cell] + xi * (values_[cell + 1] - values_[cell]);
}

GridFunction GridFunction::scaled(double c) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= c;
    return GridFunction(grid_, std::move(v), dirichlet_);
}

bool GridFunction::is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

namespace {
GridFunction combine(const GridFunction& a, const GridFunction& b, double sign) {
    if (!(a.grid() == b.grid())) {
        throw Error(ErrorCode::Argument, "grid functions live on different grids");
    }
    std::vector<double> v(a.values().begin(), a.values().end());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += sign * b.values()[i];
    return GridFunction(a.grid(), std::move(v), a.dirichlet() && b.dirichlet());
}
} // namespace

GridFunction operator+(const GridFunction& a, const GridFunction& b) { return combine(a, b, 1.0); }
GridFunction operator-(const GridFunction& a, const GridFunction& b) { return combine(a, b, -1.0); }

double l2_distance(const GridFunction& a, const GridFunction& b, Interval region) {
    std::vector<double> breaks{region.lo, region.hi};
    for (const GridFunction* f : {&a, &b}) {
        for (std::size_t i = 0; i < f->grid().nodes(); ++i) {
            const double x = f->grid().node(i);
            if (x > region.lo && x < region.hi) breaks.push_back(x);
        }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    static const GaussRule rule = GaussRule::on_unit_interval(3);
    std::vector<double> terms;
    terms.reserve(breaks.size() * rule.nodes.size());
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = breaks[i];
        const double len = breaks[i + 1] - lo;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double x = lo + len * rule.nodes[q];
            const double d = a(x) - b(x);
            terms.push_back(len * rule.weights[q] * d * d);
        }
    }
    return std::sqrt(pairwise_sum(terms));
}

double l2_norm(const GridFunction& u) {
    return l2_distance(u, GridFunction::zero(u.grid(), false), u.grid().domain());
}

double pairwise_sum(std::span<const double> terms) {
    if (terms.size() <= 8) {
        double s = 0.0;
        for (double t : terms) s += t;
        return s;
    }
    const std::size_t half = terms.size() / 2;
    return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

} // namespace varfrac
