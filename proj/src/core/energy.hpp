#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fields.hpp"
#include "grid.hpp"
#include "kernel.hpp"

namespace varfrac {

struct EnergyBreakdown {
    double kinetic = 0.0;    // \iint_{R^2} (1/q) |u(x) - u(y)|^q K
    double potential = 0.0;  // (lambda/2) \int V u^2
    double source_p = 0.0;   // \int (alpha/p) |u|^p
    double source_k = 0.0;   // \int (beta/k) |u|^k
    double total = 0.0;
};

struct GradientResult {
    std::vector<double> values;  // one entry per interior node
    double energy = 0.0;
    bool nonsmooth_source = false;  // some quadrature node had |u| < 1e-14 where k < 2
};

/**
 * A discretized instance of the variational problem: grid, exponents,
 * potential, parameters and the cached kernel quadrature. Functions are
 * passed as interior nodal vectors (length N - 1); the end values are 0.
 */
class Problem {
public:
    Problem(Grid grid, ExponentField p, ExponentField q, ExponentField s, ExponentField k,
            Potential v, double alpha, double beta, double lambda,
            const QuadratureOptions& quadrature = {});

    // Copies sharing the kernel cache.
    Problem with_lambda(double lambda) const;
    Problem with_sources(double alpha, double beta) const;
    Problem without_potential() const;

    const Grid& grid() const { return grid_; }
    std::size_t unknowns() const { return grid_.nodes() - 2; }
    const ExponentField& p() const { return p_; }
    const ExponentField& q() const { return q_; }
    const ExponentField& s() const { return s_; }
    const ExponentField& k() const { return k_; }
    const Potential& potential() const { return v_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double lambda() const { return lambda_; }
    bool has_potential() const { return use_potential_; }
    const KernelQuadrature& kernel() const { return *kernel_; }

    std::vector<double> nodal(std::span<const double> interior) const;
    GridFunction function(std::span<const double> interior) const;

    EnergyBreakdown energy(std::span<const double> interior) const;
    double value(std::span<const double> interior) const { return energy(interior).total; }
    GradientResult gradient(std::span<const double> interior) const;

    // [u]_{q,s,Omega}: the norm used for radii and the ball constraint.
    double norm_lambda(std::span<const double> interior) const;
    double potential_mass(std::span<const double> interior) const;  // \int V u^2
    double source_modular(std::span<const double> interior, bool k_exponent) const;

    // Dense interior matrix of \iint (du)^2 K + lambda \int V u^2 (row-major),
    // a fixed SPD metric for preconditioning.
    std::vector<double> metric_matrix() const;

private:
    struct SourcePoint {
        std::uint32_t cell;
        double xi;
        double w;
        double p;
        double k;
        double v;
    };

    Problem() = default;
    void build_sources(int order);
    std::vector<double> values_at(std::span<const double> interior) const;

    Grid grid_;
    ExponentField p_, q_, s_, k_;
    Potential v_;
    double alpha_ = 0.0;
    double beta_ = 0.0;
    double lambda_ = 0.0;
    bool use_potential_ = true;
    std::shared_ptr<const KernelQuadrature> kernel_;
    std::vector<SourcePoint> sources_;
};

struct GeometryInputs {
    double p_lower = 0.0, p_upper = 0.0;
    double k_lower = 0.0, k_upper = 0.0;
    double q_lower = 0.0, q_upper = 0.0;
    double alpha = 0.0, beta = 0.0;
    double c_p = 0.0, c_k = 0.0;
};

struct GeometryConstants {
    double A = 0.0, B = 0.0, D = 0.0;
    double rho = 0.0;  // argmax of psi
    double psi_at_rho = 0.0;
    double delta = 0.0;
    double alpha_max = 0.0, beta_max = 0.0;
    double product_value = 0.0;  // alpha^(2-k+) beta^(p+-2)
    double product_bound = 0.0;
    bool admissible = false;
    GeometryInputs inputs;
};

// Closed forms only; never throws.
GeometryConstants evaluate_geometry(const GeometryInputs& in);
// As evaluate_geometry, but throws Error(Inadmissible) outside the admissible set.
GeometryConstants geometry_constants(const GeometryInputs& in);

double psi(const GeometryConstants& g, double sigma);

// [beta / (k+ |w0|^e) \int |w0|^k / max(1/q-, 1/2)]^(1/(e - k+)) with e = min(q-, 2).
// For q- < 2 the kinetic part of I(tau w0) only decays like tau^q-, so the start is
// guaranteed negative for tau < tau0 <= 1 only with that exponent.
double tau0(double beta, double k_upper, double q_lower, double w0_norm, double w0_k_modular);

// Centered hat on `support`, scaled to norm_lambda = 1.
std::vector<double> normalized_hat(const Problem& problem, Interval support);

// sigma * v0 for the first sigma in 2, 4, ..., 2^20 with sigma |v0| > rho and
// negative energy; throws Error(EscapeFailure) otherwise.
std::vector<double> make_e_point(const Problem& problem, std::span<const double> v0, double rho);

} // namespace varfrac
