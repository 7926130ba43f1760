#include "energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace varfrac {

namespace {

inline double abs_pow(double v, double e) {
    const double a = std::fabs(v);
    return a == 0.0 ? 0.0 : std::exp(e * std::log(a));
}

// |v|^(e-2) v, taken as 0 below the 1e-14 cutoff.
inline double signed_pow(double v, double e) {
    const double a = std::fabs(v);
    return a < 1e-14 ? 0.0 : std::copysign(std::exp((e - 1.0) * std::log(a)), v);
}

} // namespace

Problem::Problem(Grid grid, ExponentField p, ExponentField q, ExponentField s, ExponentField k,
                 Potential v, double alpha, double beta, double lambda,
                 const QuadratureOptions& quadrature)
    : grid_(grid),
      p_(std::move(p)),
      q_(std::move(q)),
      s_(std::move(s)),
      k_(std::move(k)),
      v_(std::move(v)),
      alpha_(alpha),
      beta_(beta),
      lambda_(lambda) {
    kernel_ = std::make_shared<const KernelQuadrature>(grid_, q_, s_, quadrature);
    build_sources(quadrature.gauss_order);
}

void Problem::build_sources(int order) {
    const GaussRule rule = GaussRule::on_unit_interval(order);
    sources_.clear();
    sources_.reserve(grid_.cells() * rule.nodes.size());
    for (std::size_t c = 0; c < grid_.cells(); ++c) {
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double x = grid_.node(c) + grid_.h() * rule.nodes[i];
            sources_.push_back({static_cast<std::uint32_t>(c), rule.nodes[i],
                                grid_.h() * rule.weights[i], p_(x), k_(x), v_(x)});
        }
    }
}

Problem Problem::with_lambda(double lambda) const {
    Problem out(*this);
    out.lambda_ = lambda;
    return out;
}

Problem Problem::with_sources(double alpha, double beta) const {
    Problem out(*this);
    out.alpha_ = alpha;
    out.beta_ = beta;
    return out;
}

Problem Problem::without_potential() const {
    Problem out(*this);
    out.use_potential_ = false;
    return out;
}

std::vector<double> Problem::nodal(std::span<const double> interior) const {
    if (interior.size() != unknowns()) {
        throw Error(ErrorCode::Argument, "expected " + std::to_string(unknowns()) +
                                             " interior values, got " +
                                             std::to_string(interior.size()));
    }
    std::vector<double> out(grid_.nodes(), 0.0);
    std::copy(interior.begin(), interior.end(), out.begin() + 1);
    return out;
}

GridFunction Problem::function(std::span<const double> interior) const {
    return GridFunction(grid_, nodal(interior), true);
}

std::vector<double> Problem::values_at(std::span<const double> interior) const {
    const std::vector<double> u = nodal(interior);
    std::vector<double> out(sources_.size());
    for (std::size_t i = 0; i < sources_.size(); ++i) {
        const SourcePoint& sp = sources_[i];
        out[i] = u[sp.cell] + sp.xi * (u[sp.cell + 1] - u[sp.cell]);
    }
    return out;
}

EnergyBreakdown Problem::energy(std::span<const double> interior) const {
    const std::vector<double> u = nodal(interior);
    const std::vector<double> at = values_at(interior);
    std::vector<double> pot(at.size()), sp(at.size()), sk(at.size());
    for (std::size_t i = 0; i < at.size(); ++i) {
        const SourcePoint& s = sources_[i];
        pot[i] = s.w * s.v * at[i] * at[i];
        sp[i] = s.w * abs_pow(at[i], s.p) / s.p;
        sk[i] = s.w * abs_pow(at[i], s.k) / s.k;
    }
    EnergyBreakdown e;
    e.kinetic = kernel_->energy(u);
    e.potential = use_potential_ ? 0.5 * lambda_ * pairwise_sum(pot) : 0.0;
    e.source_p = alpha_ * pairwise_sum(sp);
    e.source_k = beta_ * pairwise_sum(sk);
    e.total = e.kinetic + e.potential - e.source_p - e.source_k;
    return e;
}

GradientResult Problem::gradient(std::span<const double> interior) const {
    const std::vector<double> u = nodal(interior);
    const std::vector<double> at = values_at(interior);
    GradientResult out;
    std::vector<double> full(grid_.nodes(), 0.0);
    const double kinetic = kernel_->energy_and_gradient(u, full);

    // Each node collects the points of its left and right cell separately.
    std::vector<double> left(grid_.nodes(), 0.0), right(grid_.nodes(), 0.0);
    std::vector<double> pot_t(at.size()), sp_t(at.size()), sk_t(at.size());
    for (std::size_t i = 0; i < at.size(); ++i) {
        const SourcePoint& s = sources_[i];
        const double a = at[i];
        if (std::fabs(a) < 1e-14 && s.k < 2.0) out.nonsmooth_source = true;
        const double lin = (use_potential_ ? lambda_ * s.v * a : 0.0) -
                           alpha_ * signed_pow(a, s.p) - beta_ * signed_pow(a, s.k);
        const double t = s.w * lin;
        left[s.cell] += t * (1.0 - s.xi);
        right[s.cell + 1] += t * s.xi;
        pot_t[i] = s.w * s.v * a * a;
        sp_t[i] = s.w * abs_pow(a, s.p) / s.p;
        sk_t[i] = s.w * abs_pow(a, s.k) / s.k;
    }
    const double pot = use_potential_ ? 0.5 * lambda_ * pairwise_sum(pot_t) : 0.0;
    const double sp = alpha_ * pairwise_sum(sp_t);
    const double sk = beta_ * pairwise_sum(sk_t);
    out.energy = kinetic + pot - sp - sk;
    out.values.resize(unknowns());
    for (std::size_t i = 1; i + 1 < grid_.nodes(); ++i) {
        out.values[i - 1] = full[i] + (right[i] + left[i]);
    }
    return out;
}

double Problem::norm_lambda(std::span<const double> interior) const {
    return kernel_->seminorm(nodal(interior), Region::Omega);
}

double Problem::potential_mass(std::span<const double> interior) const {
    const std::vector<double> at = values_at(interior);
    std::vector<double> t(at.size());
    for (std::size_t i = 0; i < at.size(); ++i) t[i] = sources_[i].w * sources_[i].v * at[i] * at[i];
    return pairwise_sum(t);
}

double Problem::source_modular(std::span<const double> interior, bool k_exponent) const {
    const std::vector<double> at = values_at(interior);
    std::vector<double> t(at.size());
    for (std::size_t i = 0; i < at.size(); ++i) {
        const SourcePoint& s = sources_[i];
        t[i] = s.w * abs_pow(at[i], k_exponent ? s.k : s.p);
    }
    return pairwise_sum(t);
}

std::vector<double> Problem::metric_matrix() const {
    const std::size_t nodes = grid_.nodes();
    const std::size_t n = unknowns();
    const std::vector<double> full = kernel_->quadratic_form();
    std::vector<double> out(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) out[i * n + j] = full[(i + 1) * nodes + (j + 1)];
    }
    if (use_potential_) {
        for (const SourcePoint& s : sources_) {
            const std::size_t c[2] = {s.cell, s.cell + 1};
            const double b[2] = {1.0 - s.xi, s.xi};
            for (int r = 0; r < 2; ++r) {
                for (int q = 0; q < 2; ++q) {
                    if (c[r] == 0 || c[r] + 1 == nodes || c[q] == 0 || c[q] + 1 == nodes) continue;
                    out[(c[r] - 1) * n + (c[q] - 1)] += lambda_ * s.w * s.v * b[r] * b[q];
                }
            }
        }
    }
    return out;
}

GeometryConstants evaluate_geometry(const GeometryInputs& in) {
    GeometryConstants g;
    g.inputs = in;
    const double pp = in.p_upper;
    const double kp = in.k_upper;
    g.A = std::max(std::pow(in.c_p, in.p_lower), std::pow(in.c_p, in.p_upper)) / in.p_lower;
    g.B = std::max(std::pow(in.c_k, in.k_lower), std::pow(in.c_k, in.k_upper)) / in.k_lower;
    g.D = std::min(1.0 / in.q_upper, 0.5);
    g.alpha_max = g.D * (2.0 - kp) / (g.A * (pp - kp));
    g.beta_max = g.D * (pp - 2.0) / (g.B * (pp - kp));
    g.product_bound = std::pow(g.alpha_max, 2.0 - kp) * std::pow(g.beta_max, pp - 2.0);
    g.product_value = std::pow(in.alpha, 2.0 - kp) * std::pow(in.beta, pp - 2.0);
    g.rho = std::pow(g.D * (2.0 - kp) / (g.A * in.alpha * (pp - kp)), 1.0 / (pp - 2.0));
    g.psi_at_rho = psi(g, g.rho);
    g.delta = g.psi_at_rho * std::pow(g.rho, kp);
    g.admissible = in.alpha <= g.alpha_max && in.beta <= g.beta_max &&
                   g.product_value <= g.product_bound;
    return g;
}

GeometryConstants geometry_constants(const GeometryInputs& in) {
    if (!(in.c_p > 0.0 && in.c_k > 0.0)) {
        throw Error(ErrorCode::Argument, "embedding constants must be positive");
    }
    GeometryConstants g = evaluate_geometry(in);
    if (!g.admissible) {
        std::ostringstream msg;
        msg.precision(6);
        if (in.alpha > g.alpha_max) {
            msg << "alpha = " << in.alpha << " exceeds alpha_max = " << g.alpha_max;
        } else if (in.beta > g.beta_max) {
            msg << "beta = " << in.beta << " exceeds beta_max = " << g.beta_max;
        } else {
            msg << "alpha^(2-k+) beta^(p+-2) = " << g.product_value << " exceeds "
                << g.product_bound;
        }
        throw Error(ErrorCode::Inadmissible, msg.str());
    }
    return g;
}

double psi(const GeometryConstants& g, double sigma) {
    const double kp = g.inputs.k_upper;
    const double pp = g.inputs.p_upper;
    return g.D * std::pow(sigma, 2.0 - kp) - g.A * g.inputs.alpha * std::pow(sigma, pp - kp) -
           g.B * g.inputs.beta;
}

double tau0(double beta, double k_upper, double q_lower, double w0_norm, double w0_k_modular) {
    // q- <= k+ leaves no guaranteed exponent; keep 2 and let the caller halve
    const double e = q_lower > k_upper ? std::min(q_lower, 2.0) : 2.0;
    const double base = beta / (k_upper * std::pow(w0_norm, e)) * w0_k_modular /
                        std::max(1.0 / q_lower, 0.5);
    const double t = std::pow(base, 1.0 / (e - k_upper));
    return e < 2.0 ? std::min(t, 1.0) : t;
}

std::vector<double> normalized_hat(const Problem& problem, Interval support) {
    const Grid& g = problem.grid();
    const double c = support.mid();
    const double half = 0.5 * support.length();
    std::vector<double> u(problem.unknowns());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = std::max(0.0, 1.0 - std::fabs(g.node(i + 1) - c) / half);
    }
    const double n = problem.norm_lambda(u);
    if (n == 0.0) {
        throw Error(ErrorCode::Argument, "hat support contains no interior grid node");
    }
    for (double& v : u) v /= n;
    return u;
}

std::vector<double> make_e_point(const Problem& problem, std::span<const double> v0, double rho) {
    const double norm = problem.norm_lambda(v0);
    std::vector<double> e(v0.size());
    for (int j = 1; j <= 20; ++j) {
        const double sigma = std::ldexp(1.0, j);
        if (sigma * norm <= rho) continue;
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = sigma * v0[i];
        if (problem.value(e) < 0.0) return e;
    }
    throw Error(ErrorCode::EscapeFailure,
                "no sigma in 2..2^20 gives sigma*v0 outside the ball with negative energy");
}

} // namespace varfrac
