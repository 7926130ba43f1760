#pragma once

#include <functional>
#include <vector>

#include "fields.hpp"
#include "grid.hpp"

// Reference quadrature for tests. It shares nothing with the library's kernel
// code: pairs are integrated in (x, d = y - x) over the whole strip, with
// Boost Gauss rules per sub-piece and per d-panel, geometric grading of the
// first d-panel, and tanh-sinh for the exterior integral.
namespace oracle {

struct Nodal {
    double a = 0.0, b = 1.0;
    std::vector<double> u;  // values at a + i h, i = 0..N; zero outside [a, b]

    std::size_t cells() const { return u.size() - 1; }
    double h() const { return (b - a) / static_cast<double>(cells()); }
    double operator()(double x) const;
};

Nodal sample(double a, double b, std::size_t cells, const std::function<double(double)>& f);
Nodal from_grid_function(const varfrac::GridFunction& g);

struct Settings {
    int grading_depth = 40;
    bool high_order = false;  // 16-point rules instead of 8
};

enum class Weight { Modular, Energy };

// \iint |u(x) - u(y)|^q |x - y|^(-1 - q s) over Omega x Omega, or over the full
// plane truncated to |y - c| <= tail_radius; Energy adds the 1/q factor.
double kinetic(const Nodal& u, const varfrac::ExponentField& q, const varfrac::ExponentField& s,
               bool full_plane, double tail_radius, Weight weight, const Settings& st = {});

// d/du_i of the full-plane kinetic energy for every interior node.
std::vector<double> kinetic_gradient(const Nodal& u, const varfrac::ExponentField& q,
                                     const varfrac::ExponentField& s, double tail_radius,
                                     const Settings& st = {});

struct Lower {
    const varfrac::ExponentField* p;
    const varfrac::ExponentField* k;
    const varfrac::Potential* v;
    double alpha, beta, lambda;
};

// (lambda/2) \int V u^2 - \int (alpha/p)|u|^p - \int (beta/k)|u|^k
double lower_order_energy(const Nodal& u, const Lower& terms);
std::vector<double> lower_order_gradient(const Nodal& u, const Lower& terms);

// Nodes of u plus the roots of u inside cells where it changes sign.
std::vector<double> breaks_of(const Nodal& u);

// \int |f|^{p(x)} over [a, b] by adaptive Gauss-Kronrod, split at `breaks`.
double lebesgue_modular(const std::function<double(double)>& f, const varfrac::ExponentField& p,
                        double a, double b, const std::vector<double>& breaks = {});

// Luxemburg norm by an independent bisection on the oracle modular.
double luxemburg(const std::function<double(double)>& f, const varfrac::ExponentField& p, double a,
                 double b, const std::vector<double>& breaks = {});

} // namespace oracle
