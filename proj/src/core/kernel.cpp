#include "kernel.hpp"

#include <algorithm>
#include <cmath>

#include "bisection.hpp"
#include "error.hpp"
#include "parallel.hpp"

namespace varfrac {

namespace {

constexpr std::size_t kChunks = 32;
constexpr double kTailPanel = 0.5;
constexpr int kTailOrder = 8;

// |v|^q with |0|^q = 0.
inline double abs_pow(double v, double q) {
    const double a = std::fabs(v);
    return a == 0.0 ? 0.0 : std::exp(q * std::log(a));
}

double pairwise_merge(std::vector<double>& parts) {
    std::size_t n = parts.size();
    while (n > 1) {
        const std::size_t half = (n + 1) / 2;
        for (std::size_t i = 0; i + half < n; ++i) parts[i] += parts[i + half];
        n = half;
    }
    return parts.empty() ? 0.0 : parts[0];
}

} // namespace

std::size_t KernelQuadrature::estimate_node_count(std::size_t cells,
                                                  const QuadratureOptions& options) {
    const std::size_t g = static_cast<std::size_t>(std::max(options.gauss_order, 1));
    const std::size_t graded = g * static_cast<std::size_t>(std::max(options.grading_depth, 0) + 1);
    const std::size_t far = cells >= 2 ? (cells - 1) * (cells - 2) / 2 : 0;
    return far * g * g + cells * graded * g + (cells - 1) * graded * graded +
           2 * ((cells - 2) * g + 2 * graded);
}

KernelQuadrature::KernelQuadrature(const Grid& grid, const ExponentField& q,
                                   const ExponentField& s, const QuadratureOptions& options,
                                   bool swap_arguments)
    : grid_(grid), options_(options) {
    if (options.gauss_order < 1 || options.grading_depth < 0) {
        throw Error(ErrorCode::Argument, "quadrature needs gauss_order >= 1 and grading_depth >= 0");
    }
    const std::size_t n = grid.cells();
    const std::size_t estimate = estimate_node_count(n, options);
    if (estimate > options.node_budget) {
        throw Error(ErrorCode::GradingOverflow,
                    "kernel quadrature needs " + std::to_string(estimate) +
                        " nodes, budget is " + std::to_string(options.node_budget));
    }
    const Interval dom = grid.domain();
    tail_radius_ = options.tail_radius > 0.0 ? options.tail_radius : 10.0 * dom.length();
    if (tail_radius_ <= 0.5 * dom.length()) {
        throw Error(ErrorCode::Argument, "tail radius must exceed half the domain length");
    }

    const double h = grid.h();
    const int g = options.gauss_order;
    const int m = options.grading_depth;
    const GaussRule gauss = GaussRule::on_unit_interval(g);
    const GaussRule graded = graded_rule(h, g, m);  // on [0, h], dense near 0
    const std::size_t ng = gauss.nodes.size();
    const std::size_t nr = graded.nodes.size();

    auto qf = [&](double x, double y) { return swap_arguments ? q(y, x) : q(x, y); };
    auto sf = [&](double x, double y) { return swap_arguments ? s(y, x) : s(x, y); };
    auto qproj = [&](double x, double y) {
        return swap_arguments ? q.projected(y, x) : q.projected(x, y);
    };

    pairs_.reserve(estimate);

    // Entry for the pair of points and its mirror image, with weight w each.
    auto emit = [&](std::uint32_t px, std::uint32_t py, double x, double y, double w) {
        const double dist = std::fabs(x - y);
        const double ld = std::log(dist);
        const double q1 = qf(x, y);
        const double s1 = sf(x, y);
        const double q2 = qf(y, x);
        const double s2 = sf(y, x);
        const double k1 = w * std::exp(-(1.0 + q1 * s1) * ld);
        if (q1 == q2 && s1 == s2) {
            pairs_.push_back({px, py, 2.0 * k1, q1});
        } else {
            pairs_.push_back({px, py, k1, q1});
            pairs_.push_back({px, py, w * std::exp(-(1.0 + q2 * s2) * ld), q2});
        }
    };

    // Shared point sets: plain Gauss points per cell, and graded points toward
    // the left / right end of each cell.
    std::vector<std::uint32_t> plain(n * ng), left(n * nr), right(n * nr);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t j = 0; j < ng; ++j) plain[c * ng + j] = add_point(c, gauss.nodes[j]);
        for (std::size_t j = 0; j < nr; ++j) {
            left[c * nr + j] = add_point(c, graded.nodes[j] / h);
            right[c * nr + j] = add_point(c, 1.0 - graded.nodes[j] / h);
        }
    }
    auto xc = [&](std::size_t c, double xi) { return grid.node(c) + xi * h; };

    // Far pairs I < J - 1.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            for (std::size_t a = 0; a < ng; ++a) {
                const double x = xc(i, gauss.nodes[a]);
                for (std::size_t b = 0; b < ng; ++b) {
                    const double y = xc(j, gauss.nodes[b]);
                    emit(plain[i * ng + a], plain[j * ng + b], x, y,
                         h * h * gauss.weights[a] * gauss.weights[b]);
                }
            }
        }
    }

    // Diagonal cells in (x, d = x - y): y < x half, mirror folded in by emit.
    for (std::size_t c = 0; c < n; ++c) {
        const double x0 = grid.node(c);
        for (std::size_t r = 0; r < nr; ++r) {
            const double d = graded.nodes[r];
            const double span = h - d;
            for (std::size_t a = 0; a < ng; ++a) {
                const double off = d + span * gauss.nodes[a];  // x - x0
                const double x = x0 + off;
                const double y = x - d;
                const std::uint32_t px = add_point(c, off / h);
                const std::uint32_t py = add_point(c, (off - d) / h);
                emit(px, py, x, y, graded.weights[r] * span * gauss.weights[a]);
            }
        }
    }

    // Cells sharing the vertex c = x_{I+1}: xi = c - x, eta = y - c, both graded.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double corner = grid.node(i + 1);
        for (std::size_t a = 0; a < nr; ++a) {
            const double x = corner - graded.nodes[a];
            for (std::size_t b = 0; b < nr; ++b) {
                const double y = corner + graded.nodes[b];
                emit(right[i * nr + a], left[(i + 1) * nr + b], x, y,
                     graded.weights[a] * graded.weights[b]);
            }
        }
    }

    // Exterior interaction, truncated to |y - centre| <= R.
    const double centre = dom.mid();
    const double far_lo = centre - tail_radius_;
    const double far_hi = centre + tail_radius_;
    const GaussRule tail_rule = GaussRule::on_unit_interval(kTailOrder);
    auto side_integral = [&](double x, double d0, double d1, double sign, double qt) {
        // \int_{d0}^{d1} d^{-1 - qt s(x, x + sign d)} dd in tau = log d
        const double t0 = std::log(d0);
        const double t1 = std::log(d1);
        const int panels = std::max(1, static_cast<int>(std::ceil((t1 - t0) / kTailPanel)));
        const double width = (t1 - t0) / panels;
        double sum = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double lo = t0 + p * width;
            for (int k = 0; k < kTailOrder; ++k) {
                const double tau = lo + width * tail_rule.nodes[k];
                const double d = std::exp(tau);
                const double st = sf(x, x + sign * d);
                sum += width * tail_rule.weights[k] * std::exp(-qt * st * tau);
            }
        }
        return sum;
    };
    auto add_exterior = [&](std::uint32_t px, double x, double w) {
        const double ql = qproj(x, dom.lo);
        const double dl1 = x - far_lo;
        const double tl = side_integral(x, x - dom.lo, dl1, -1.0, ql);
        const double sl = sf(x, far_lo);
        exterior_.push_back({px, 2.0 * w * tl, ql,
                             2.0 * w * std::exp(-ql * sl * std::log(dl1)) / (ql * sl)});
        const double qr = qproj(x, dom.hi);
        const double dr1 = far_hi - x;
        const double tr = side_integral(x, dom.hi - x, dr1, 1.0, qr);
        const double sr = sf(x, far_hi);
        exterior_.push_back({px, 2.0 * w * tr, qr,
                             2.0 * w * std::exp(-qr * sr * std::log(dr1)) / (qr * sr)});
    };
    for (std::size_t c = 0; c < n; ++c) {
        if (c == 0 || c + 1 == n) {
            const auto& pts = c == 0 ? left : right;
            for (std::size_t r = 0; r < nr; ++r) {
                const std::uint32_t id = pts[c * nr + r];
                add_exterior(id, xc(c, points_[id].xi), graded.weights[r]);
            }
        } else {
            for (std::size_t a = 0; a < ng; ++a) {
                add_exterior(plain[c * ng + a], xc(c, gauss.nodes[a]), h * gauss.weights[a]);
            }
        }
    }
    pairs_.shrink_to_fit();
}

std::uint32_t KernelQuadrature::add_point(std::uint32_t cell, double xi) {
    points_.push_back({cell, xi});
    return static_cast<std::uint32_t>(points_.size() - 1);
}

std::vector<double> KernelQuadrature::point_values(std::span<const double> nodal,
                                                   double scale) const {
    if (nodal.size() != grid_.nodes()) {
        throw Error(ErrorCode::Argument, "nodal vector does not match the quadrature grid");
    }
    const double inv = 1.0 / scale;
    std::vector<double> out(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const Point& p = points_[i];
        out[i] = inv * (nodal[p.cell] + p.xi * (nodal[p.cell + 1] - nodal[p.cell]));
    }
    return out;
}

template <bool WithGradient, bool InverseQ>
double KernelQuadrature::accumulate(std::span<const double> nodal, Region region, double scale,
                                    std::span<double> grad) const {
    const std::vector<double> u = point_values(nodal, scale);
    const std::size_t npairs = pairs_.size();
    const std::size_t total = npairs + (region == Region::FullPlane ? exterior_.size() : 0);
    const std::size_t nodes = grid_.nodes();
    std::vector<double> partial(kChunks, 0.0);
    std::vector<double> gpart(WithGradient ? kChunks * nodes : 0, 0.0);

    for_each_chunk(kChunks, [&](std::size_t chunk) {
        const std::size_t lo = total * chunk / kChunks;
        const std::size_t hi = total * (chunk + 1) / kChunks;
        double* gl = WithGradient ? gpart.data() + chunk * nodes : nullptr;
        auto spread = [&](std::uint32_t pid, double t) {
            const Point& p = points_[pid];
            gl[p.cell] += t * (1.0 - p.xi);
            gl[p.cell + 1] += t * p.xi;
        };
        double sum = 0.0;
        for (std::size_t e = lo; e < hi; ++e) {
            double v;
            double qe;
            double w;
            if (e < npairs) {
                const PairEntry& pe = pairs_[e];
                v = u[pe.px] - u[pe.py];
                qe = pe.q;
                w = pe.weight;
            } else {
                const ExteriorEntry& ee = exterior_[e - npairs];
                v = u[ee.px];
                qe = ee.q;
                w = ee.weight;
            }
            const double a = std::fabs(v);
            if (a == 0.0) continue;
            const double la = std::log(a);
            const double pw = std::exp(qe * la);
            sum += InverseQ ? w * pw / qe : w * pw;
            if constexpr (WithGradient) {
                // d/dv (|v|^q / q) = |v|^(q-2) v
                const double t = w * std::copysign(std::exp((qe - 1.0) * la), v);
                if (e < npairs) {
                    spread(pairs_[e].px, t);
                    spread(pairs_[e].py, -t);
                } else {
                    spread(exterior_[e - npairs].px, t);
                }
            }
        }
        partial[chunk] = sum;
    });

    if constexpr (WithGradient) {
        std::vector<double> col(kChunks);
        for (std::size_t i = 0; i < nodes; ++i) {
            for (std::size_t c = 0; c < kChunks; ++c) col[c] = gpart[c * nodes + i];
            grad[i] = pairwise_merge(col);
        }
    }
    return pairwise_merge(partial);
}

double KernelQuadrature::modular(std::span<const double> nodal, Region region,
                                 double scale) const {
    return accumulate<false, false>(nodal, region, scale, {});
}

double KernelQuadrature::energy(std::span<const double> nodal) const {
    return accumulate<false, true>(nodal, Region::FullPlane, 1.0, {});
}

double KernelQuadrature::energy_and_gradient(std::span<const double> nodal,
                                             std::span<double> grad) const {
    if (grad.size() != grid_.nodes()) {
        throw Error(ErrorCode::Argument, "gradient buffer does not match the quadrature grid");
    }
    return accumulate<true, true>(nodal, Region::FullPlane, 1.0, grad);
}

double KernelQuadrature::seminorm(std::span<const double> nodal, Region region) const {
    if (modular(nodal, region) == 0.0) return 0.0;
    return solve_unit_modular([&](double lambda) { return modular(nodal, region, lambda); });
}

TailBound KernelQuadrature::tail_bound(std::span<const double> nodal) const {
    const std::vector<double> u = point_values(nodal, 1.0);
    std::vector<double> mod(exterior_.size()), en(exterior_.size());
    for (std::size_t i = 0; i < exterior_.size(); ++i) {
        const ExteriorEntry& e = exterior_[i];
        mod[i] = e.remainder * abs_pow(u[e.px], e.q);
        en[i] = mod[i] / e.q;
    }
    return {pairwise_sum(mod), pairwise_sum(en)};
}

std::vector<double> KernelQuadrature::quadratic_form() const {
    const std::size_t nodes = grid_.nodes();
    std::vector<double> a(nodes * nodes, 0.0);
    auto coeffs = [&](std::uint32_t pid, std::size_t idx[2], double c[2]) {
        const Point& p = points_[pid];
        idx[0] = p.cell;
        idx[1] = p.cell + 1;
        c[0] = 1.0 - p.xi;
        c[1] = p.xi;
    };
    for (const PairEntry& e : pairs_) {
        std::size_t idx[4];
        double c[4];
        coeffs(e.px, idx, c);
        coeffs(e.py, idx + 2, c + 2);
        c[2] = -c[2];
        c[3] = -c[3];
        for (int r = 0; r < 4; ++r) {
            for (int k = 0; k < 4; ++k) a[idx[r] * nodes + idx[k]] += e.weight * c[r] * c[k];
        }
    }
    for (const ExteriorEntry& e : exterior_) {
        std::size_t idx[2];
        double c[2];
        coeffs(e.px, idx, c);
        for (int r = 0; r < 2; ++r) {
            for (int k = 0; k < 2; ++k) a[idx[r] * nodes + idx[k]] += e.weight * c[r] * c[k];
        }
    }
    return a;
}

} // namespace varfrac
