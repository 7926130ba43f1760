#include "bisection.hpp"

#include <cmath>

#include "error.hpp"

namespace varfrac {

double solve_unit_modular(const std::function<double(double)>& modular_at,
                          const ScaleSearch& search) {
    double lo = search.lo;
    double hi = search.hi;
    for (int i = 0; modular_at(lo) < 1.0; ++i) {
        if (i == 40 || lo < 1e-290) {
            throw Error(ErrorCode::BracketFailure, "modular stays below 1 as the scale shrinks");
        }
        lo *= 1e-6;
    }
    for (int i = 0; modular_at(hi) > 1.0; ++i) {
        if (i == 40 || hi > 1e290) {
            throw Error(ErrorCode::BracketFailure, "modular stays above 1 as the scale grows");
        }
        hi *= 1e6;
    }
    double llo = std::log(lo);
    double lhi = std::log(hi);
    // hi/lo - 1 <= rel_tol  <=>  lhi - llo <= log1p(rel_tol)
    const double target = std::log1p(search.rel_tol);
    while (lhi - llo > target) {
        const double mid = 0.5 * (llo + lhi);
        if (modular_at(std::exp(mid)) > 1.0) {
            llo = mid;
        } else {
            lhi = mid;
        }
    }
    return std::exp(0.5 * (llo + lhi));
}

} // namespace varfrac
