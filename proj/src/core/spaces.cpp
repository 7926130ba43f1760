#include "spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bisection.hpp"
#include "error.hpp"
#include "random.hpp"

namespace varfrac {

namespace {

// Depth of the grading toward a zero of u; the innermost panel then carries a
// negligible share of \int |u|^p for p > 1.
constexpr int kZeroGrading = 12;
// Gauss order on the graded panels; |u|^p is far from polynomial there.
constexpr int kZeroOrder = 8;
// Cells whose smaller end value is below this fraction of the larger one are
// graded toward that end.
constexpr double kNearZero = 0.75;

} // namespace

LebesgueQuadrature::LebesgueQuadrature(const Grid& grid, const ExponentField& p, int order)
    : grid_(grid), p_field_(p), graded_(graded_rule(1.0, std::max(order, kZeroOrder), kZeroGrading)) {
    const GaussRule rule = GaussRule::on_unit_interval(order);
    per_cell_ = rule.nodes.size();
    const std::size_t n = grid.cells() * rule.nodes.size();
    x_.reserve(n);
    w_.reserve(n);
    p_.reserve(n);
    cell_.reserve(n);
    xi_.reserve(n);
    for (std::size_t c = 0; c < grid.cells(); ++c) {
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double x = grid.node(c) + grid.h() * rule.nodes[q];
            x_.push_back(x);
            w_.push_back(grid.h() * rule.weights[q]);
            p_.push_back(p(x));
            cell_.push_back(static_cast<std::uint32_t>(c));
            xi_.push_back(rule.nodes[q]);
        }
    }
    p_lower_ = p.lower();
    p_upper_ = p.upper();
}

std::vector<double> LebesgueQuadrature::sample(const GridFunction& u) const {
    if (!(u.grid() == grid_)) {
        throw Error(ErrorCode::Argument, "function and quadrature use different grids");
    }
    const auto v = u.values();
    std::vector<double> out(x_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = v[cell_[i]] + xi_[i] * (v[cell_[i] + 1] - v[cell_[i]]);
    }
    return out;
}

LebesgueQuadrature::Samples LebesgueQuadrature::resolve(const GridFunction& u) const {
    if (!(u.grid() == grid_)) {
        throw Error(ErrorCode::Argument, "function and quadrature use different grids");
    }
    const auto v = u.values();
    Samples s;
    s.values.reserve(x_.size());
    s.weights.reserve(x_.size());
    s.exponents.reserve(x_.size());
    // Graded rule on the segment from the zero z to z + len (len may be negative).
    auto add_graded = [&](double z, double len, double slope) {
        for (std::size_t q = 0; q < graded_.nodes.size(); ++q) {
            const double t = graded_.nodes[q] * std::fabs(len);
            const double x = len > 0.0 ? z + t : z - t;
            s.values.push_back(slope * (x - z));
            s.weights.push_back(graded_.weights[q] * std::fabs(len));
            s.exponents.push_back(p_field_(x));
        }
    };
    const double h = grid_.h();
    for (std::size_t c = 0; c < grid_.cells(); ++c) {
        const double a = v[c], b = v[c + 1];
        const double x0 = grid_.node(c);
        const double slope = (b - a) / h;
        if (a == 0.0 && b == 0.0) continue;
        if (a == 0.0 || b == 0.0 || a * b < 0.0) {
            const double z = x0 + h * (a / (a - b));
            if (z > x0) add_graded(z, x0 - z, slope);
            if (z < x0 + h) add_graded(z, x0 + h - z, slope);
            continue;
        }
        if (std::min(std::fabs(a), std::fabs(b)) < kNearZero * std::max(std::fabs(a), std::fabs(b))) {
            // the zero of the linear extension lies close outside the cell
            const bool left = std::fabs(a) < std::fabs(b);
            const double z = left ? x0 : x0 + h;
            for (std::size_t q = 0; q < graded_.nodes.size(); ++q) {
                const double t = graded_.nodes[q] * h;
                const double x = left ? z + t : z - t;
                s.values.push_back(a + slope * (x - x0));
                s.weights.push_back(graded_.weights[q] * h);
                s.exponents.push_back(p_field_(x));
            }
            continue;
        }
        const std::size_t first = c * per_cell_;
        for (std::size_t i = first; i < first + per_cell_; ++i) {
            s.values.push_back(a + xi_[i] * (b - a));
            s.weights.push_back(w_[i]);
            s.exponents.push_back(p_[i]);
        }
    }
    return s;
}

double LebesgueQuadrature::modular_samples(const Samples& s, double scale) const {
    std::vector<double> terms(s.values.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const double a = std::fabs(s.values[i]) / scale;
        terms[i] = a == 0.0 ? 0.0 : s.weights[i] * std::exp(s.exponents[i] * std::log(a));
    }
    return pairwise_sum(terms);
}

double LebesgueQuadrature::norm_samples(const Samples& s) const {
    if (std::all_of(s.values.begin(), s.values.end(), [](double v) { return v == 0.0; })) return 0.0;
    return solve_unit_modular([&](double lambda) { return modular_samples(s, lambda); });
}

double LebesgueQuadrature::modular_values(std::span<const double> values, double scale) const {
    std::vector<double> terms(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double a = std::fabs(values[i]) / scale;
        terms[i] = a == 0.0 ? 0.0 : w_[i] * std::exp(p_[i] * std::log(a));
    }
    return pairwise_sum(terms);
}

double LebesgueQuadrature::norm_values(std::span<const double> values) const {
    if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) return 0.0;
    return solve_unit_modular([&](double lambda) { return modular_values(values, lambda); });
}

double modular(const GridFunction& u, const ExponentField& p, int order) {
    return LebesgueQuadrature(u.grid(), p, order).modular(u);
}

double luxemburg_norm(const GridFunction& u, const ExponentField& p, int order) {
    return LebesgueQuadrature(u.grid(), p, order).norm(u);
}

SandwichCheck check_sandwich(const GridFunction& u, const ExponentField& p, int order) {
    const LebesgueQuadrature lq(u.grid(), p, order);
    const LebesgueQuadrature::Samples vals = lq.resolve(u);
    SandwichCheck out;
    out.norm = lq.norm_samples(vals);
    out.mid = lq.modular_samples(vals);
    const double a = std::pow(out.norm, p.lower());
    const double b = std::pow(out.norm, p.upper());
    out.lhs = std::min(a, b);
    out.rhs = std::max(a, b);
    const double slack = 1e-9 * std::max(1.0, out.rhs);
    out.holds = out.lhs <= out.mid + slack && out.mid <= out.rhs + slack;
    return out;
}

ExponentField conjugate_exponent(const ExponentField& p) {
    const std::string e = p.expr().to_string();
    const Expr conj = Expr::parse("(" + e + ")/((" + e + ")-1)");
    return ExponentField(p.name() + "'", conj, 1, p.domain(), p.bounds().resolution);
}

namespace {

double abs_product_integral(const LebesgueQuadrature& lq, const GridFunction& u,
                            const GridFunction& v) {
    const std::vector<double> a = lq.sample(u);
    const std::vector<double> b = lq.sample(v);
    std::vector<double> terms(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) terms[i] = lq.weights()[i] * std::fabs(a[i] * b[i]);
    return pairwise_sum(terms);
}

HoelderCheck hoelder_with_constant(const GridFunction& u, const GridFunction& v,
                                   const ExponentField& p, int order, double constant) {
    const LebesgueQuadrature lp(u.grid(), p, order);
    const LebesgueQuadrature lc(u.grid(), conjugate_exponent(p), order);
    HoelderCheck out;
    out.constant = constant;
    out.lhs = abs_product_integral(lp, u, v);
    out.rhs = constant * lp.norm(u) * lc.norm(v);
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-9);
    return out;
}

} // namespace

HoelderCheck check_hoelder(const GridFunction& u, const GridFunction& v, const ExponentField& p,
                           int order) {
    const double conj_inf = p.upper() / (p.upper() - 1.0);
    return hoelder_with_constant(u, v, p, order, 1.0 / p.lower() + 1.0 / conj_inf);
}

HoelderCheck check_hoelder_unit_constant(const GridFunction& u, const GridFunction& v,
                                         const ExponentField& p, int order) {
    const double conj = p.lower() / (p.lower() - 1.0);
    return hoelder_with_constant(u, v, p, order, 1.0 / p.lower() + 1.0 / conj);
}

HoelderCheck check_hoelder3(const GridFunction& u, const GridFunction& v, const ExponentField& r,
                            const ExponentField& q, double constant, int order) {
    const std::string re = r.expr().to_string();
    const std::string qe = q.expr().to_string();
    const Expr pe = Expr::parse("1/(1/(" + re + ")+1/(" + qe + "))");
    const ExponentField p("p", pe, 1, r.domain(), r.bounds().resolution);
    const LebesgueQuadrature lp(u.grid(), p, order);
    const LebesgueQuadrature lr(u.grid(), r, order);
    const LebesgueQuadrature lq(u.grid(), q, order);
    const std::vector<double> a = lp.sample(u);
    const std::vector<double> b = lp.sample(v);
    std::vector<double> prod(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
    HoelderCheck out;
    out.constant = constant;
    out.lhs = lp.norm_values(prod);
    out.rhs = constant * lr.norm(u) * lq.norm(v);
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-9);
    return out;
}

std::vector<GridFunction> embedding_dictionary(const Grid& grid, int size, std::uint64_t seed) {
    if (size < 1) throw Error(ErrorCode::Argument, "dictionary_size must be >= 1");
    const Interval d = grid.domain();
    const double len = d.length();
    std::vector<GridFunction> out;
    out.reserve(size);
    auto full = [&] { return static_cast<int>(out.size()) >= size; };

    for (int c = 1; c <= 5 && !full(); ++c) {
        const double centre = d.lo + len * c / 6.0;
        for (double width : {0.1, 0.2, 0.3}) {
            if (full()) break;
            const double half = std::min(width * len, std::min(centre - d.lo, d.hi - centre));
            out.push_back(GridFunction::interpolate(grid, [=](double x) {
                return std::max(0.0, 1.0 - std::fabs(x - centre) / half);
            }));
        }
    }
    for (int j = 0; j < 5 && !full(); ++j) {
        const double centre = d.lo + len * (0.3 + 0.1 * j);
        const double half = 0.25 * len;
        out.push_back(GridFunction::interpolate(grid, [=](double x) {
            const double r = (x - centre) / half;
            return std::fabs(r) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0;
        }));
    }
    Rng rng(seed);
    constexpr int kKnots = 8;
    while (!full()) {
        std::vector<double> knots(kKnots + 2, 0.0);
        for (int i = 1; i <= kKnots; ++i) knots[i] = rng.uniform(-1.0, 1.0);
        out.push_back(GridFunction::interpolate(grid, [&](double x) {
            const double t = std::clamp((x - d.lo) / len, 0.0, 1.0) * (kKnots + 1);
            const int i = std::min(static_cast<int>(t), kKnots);
            const double f = t - i;
            return (1.0 - f) * knots[i] + f * knots[i + 1];
        }));
    }
    return out;
}

EmbeddingEstimator::EmbeddingEstimator(const KernelQuadrature& kernel, int dictionary_size,
                                       std::uint64_t seed)
    : EmbeddingEstimator(kernel, embedding_dictionary(kernel.grid(), dictionary_size, seed)) {}

EmbeddingEstimator::EmbeddingEstimator(const KernelQuadrature& kernel,
                                       std::vector<GridFunction> dictionary)
    : dictionary_(std::move(dictionary)) {
    seminorms_.reserve(dictionary_.size());
    for (std::size_t i = 0; i < dictionary_.size(); ++i) {
        const double sn = kernel.seminorm(dictionary_[i].values(), Region::Omega);
        if (!(sn >= 1e-14)) {
            throw Error(ErrorCode::DegenerateDictionary,
                        "dictionary member " + std::to_string(i) + " has seminorm " +
                            std::to_string(sn));
        }
        seminorms_.push_back(sn);
    }
}

EmbeddingEstimate EmbeddingEstimator::estimate(const ExponentField& r, double safety_factor) const {
    EmbeddingEstimate out;
    if (dictionary_.empty()) return out;
    const LebesgueQuadrature lq(dictionary_.front().grid(), r);
    for (std::size_t i = 0; i < dictionary_.size(); ++i) {
        const double ratio = lq.norm(dictionary_[i]) / seminorms_[i];
        out.ratios.push_back(ratio);
        if (ratio > out.max_ratio) {
            out.max_ratio = ratio;
            out.argmax = static_cast<int>(i);
        }
    }
    out.constant = safety_factor * out.max_ratio;
    return out;
}

EmbeddingEstimate estimate_embedding_constant(const ExponentField& r, int dictionary_size,
                                              const KernelQuadrature& kernel, std::uint64_t seed,
                                              double safety_factor) {
    return EmbeddingEstimator(kernel, dictionary_size, seed).estimate(r, safety_factor);
}

} // namespace varfrac
