#pragma once

#include <functional>

namespace varfrac {

struct ScaleSearch {
    double rel_tol = 1e-10;
    double lo = 1e-12;
    double hi = 1e12;
};

// Unique lambda > 0 with modular_at(lambda) = 1, for a modular that decreases
// strictly in lambda. Bisects in log(lambda) starting from [lo, hi] and widens
// the bracket geometrically when needed; throws Error(BracketFailure) if the
// modular never crosses 1.
double solve_unit_modular(const std::function<double(double)>& modular_at,
                          const ScaleSearch& search = {});

} // namespace varfrac
