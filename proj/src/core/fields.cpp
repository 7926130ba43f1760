#include "fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "error.hpp"

namespace varfrac {

namespace {

std::vector<double> linspace(Interval d, int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        xs[i] = (i == n - 1) ? d.hi : d.lo + d.length() * static_cast<double>(i) / (n - 1);
    }
    return xs;
}

std::string point_text(std::initializer_list<double> pt) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    bool first = true;
    for (double v : pt) {
        if (!first) os << ", ";
        os << v;
        first = false;
    }
    os << ')';
    return os.str();
}

double checked_eval(const Expr& e, double x) {
    try {
        return e.eval(x);
    } catch (const Error& err) {
        throw Error(ErrorCode::Evaluation, std::string(err.what()) + " at x = " + point_text({x}));
    }
}

double checked_eval(const Expr& e, double x, double y) {
    try {
        return e.eval(x, y);
    } catch (const Error& err) {
        throw Error(ErrorCode::Evaluation,
                    std::string(err.what()) + " at (x, y) = " + point_text({x, y}));
    }
}

// Dense samples of a one-variable field and of a two-variable field.
std::vector<double> sample_1d(const Expr& e, const std::vector<double>& xs) {
    std::vector<double> v(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) v[i] = checked_eval(e, xs[i]);
    return v;
}

} // namespace

Bounds infer_bounds(const Expr& e, int arity, Interval domain, int resolution) {
    if (resolution < 2) {
        throw Error(ErrorCode::Argument, "scan resolution must be >= 2");
    }
    const auto xs = linspace(domain, resolution);
    Bounds b;
    b.resolution = resolution;
    b.min = std::numeric_limits<double>::infinity();
    b.max = -std::numeric_limits<double>::infinity();
    auto consider = [&](double v, std::vector<double> at) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::Evaluation, "non-finite field value");
        }
        if (v < b.min) {
            b.min = v;
            b.argmin = at;
        }
        if (v > b.max) {
            b.max = v;
            b.argmax = std::move(at);
        }
    };
    if (arity == 1) {
        for (double x : xs) consider(checked_eval(e, x), {x});
    } else {
        for (double x : xs) {
            for (double y : xs) consider(checked_eval(e, x, y), {x, y});
        }
    }
    return b;
}

ExponentField::ExponentField(std::string name, Expr expr, int arity, Interval domain,
                             int resolution)
    : name_(std::move(name)), expr_(std::move(expr)), arity_(arity), domain_(domain) {
    if (arity != 1 && arity != 2) {
        throw Error(ErrorCode::Argument, "field arity must be 1 or 2");
    }
    if (arity == 1 && expr_.uses_y()) {
        throw Error(ErrorCode::Validation, "field " + name_ + " must depend on x only");
    }
    bounds_ = infer_bounds(expr_, arity, domain, resolution);
}

ExponentField ExponentField::constant(std::string name, double value, int arity,
                                      Interval domain) {
    return ExponentField(std::move(name), Expr::constant(value), arity, domain, 2);
}

double ExponentField::projected(double x, double y) const {
    return expr_.eval(std::clamp(x, domain_.lo, domain_.hi), std::clamp(y, domain_.lo, domain_.hi));
}

Potential::Potential(Expr expr, Interval domain) : expr_(std::move(expr)), domain_(domain) {
    if (expr_.uses_y()) {
        throw Error(ErrorCode::Validation, "potential V must depend on x only");
    }
}

ZeroSet extract_zero_set(const Potential& v, double zeta_tol, int resolution) {
    if (!(zeta_tol > 0.0)) {
        throw Error(ErrorCode::Argument, "zeta_tol must be > 0");
    }
    if (resolution < 2) {
        throw Error(ErrorCode::Argument, "scan resolution must be >= 2");
    }
    const auto xs = linspace(v.domain(), resolution);
    const auto vs = sample_1d(v.expr(), xs);
    ZeroSet out;
    std::size_t i = 0;
    while (i < xs.size()) {
        if (vs[i] > zeta_tol) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < xs.size() && vs[j + 1] <= zeta_tol) ++j;
        out.intervals.push_back({xs[i], xs[j]});
        i = j + 1;
    }
    if (out.intervals.empty()) {
        throw Error(ErrorCode::EmptyZeroSet, "V exceeds zeta_tol at every sample point");
    }
    const auto longest = std::max_element(
        out.intervals.begin(), out.intervals.end(),
        [](const Interval& a, const Interval& b) { return a.length() < b.length(); });
    const double third = longest->length() / 3.0;
    out.omega0 = {longest->lo + third, longest->hi - third};
    return out;
}

bool HypothesisReport::all_passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.passed; });
}

const HypothesisEntry* HypothesisReport::find(const std::string& name) const {
    for (const auto& e : entries) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

namespace {

// Largest sampled |p(x) - p(y)| * |log|x - y|| over pairs with |x - y| < 1/2.
struct HolderEstimate {
    double m = 0.0;
    double x = 0.0;
    double y = 0.0;
};

HolderEstimate log_holder_sup(const Expr& p, Interval d, int resolution) {
    const auto xs = linspace(d, resolution);
    const auto ps = sample_1d(p, xs);
    HolderEstimate best;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            const double dist = xs[j] - xs[i];
            if (dist >= 0.5) break;
            const double m = std::fabs(ps[i] - ps[j]) * std::fabs(std::log(dist));
            if (m > best.m) best = {m, xs[i], xs[j]};
        }
    }
    return best;
}

} // namespace

HypothesisReport check_hypotheses(const ExponentField& p, const ExponentField& q,
                                  const ExponentField& s, const ExponentField& k,
                                  const Potential& v, int n, const HypothesisOptions& opt) {
    HypothesisReport rep;
    rep.options = opt;
    rep.n = n;
    const Interval omega = p.domain();
    const double nn = static_cast<double>(n);

    rep.p = infer_bounds(p.expr(), 1, omega, opt.resolution_1d);
    rep.k = infer_bounds(k.expr(), 1, omega, opt.resolution_1d);
    rep.v = infer_bounds(v.expr(), 1, omega, opt.resolution_1d);
    rep.q = infer_bounds(q.expr(), 2, q.domain(), opt.resolution_2d);
    rep.s = infer_bounds(s.expr(), 2, s.domain(), opt.resolution_2d);
    rep.s_omega = infer_bounds(s.expr(), 2, omega, opt.resolution_2d);

    auto add = [&](std::string name, bool ok, std::vector<double> witness, std::string detail,
                   double value = 0.0) {
        HypothesisEntry e;
        e.name = std::move(name);
        e.passed = ok;
        if (!ok) e.witness = std::move(witness);
        e.detail = std::move(detail);
        e.value = value;
        rep.entries.push_back(std::move(e));
    };

    const auto xs = linspace(omega, opt.resolution_1d);
    const auto ps = sample_1d(p.expr(), xs);
    const auto ks = sample_1d(k.expr(), xs);
    std::vector<double> qdiag(xs.size()), sdiag(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        qdiag[i] = checked_eval(q.expr(), xs[i], xs[i]);
        sdiag[i] = checked_eval(s.expr(), xs[i], xs[i]);
    }

    // P1a: 2 < p^- and p^+ < n q(x,x) / (n - s(x,x) q(x,x)) everywhere
    {
        bool ok = rep.p.min > 2.0;
        std::vector<double> w = rep.p.argmin;
        if (ok) {
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double den = nn - sdiag[i] * qdiag[i];
                if (den <= 0.0 || !(rep.p.max < nn * qdiag[i] / den)) {
                    ok = false;
                    w = {xs[i]};
                    break;
                }
            }
        }
        add("P1a", ok, w, "2 < p^- and p^+ < n q(x,x)/(n - s(x,x) q(x,x))", rep.p.min);
    }

    // P2: log-Hoelder constant must stabilise under grid refinement
    {
        const auto coarse = log_holder_sup(p.expr(), omega, opt.resolution_1d);
        const auto fine = log_holder_sup(p.expr(), omega, 2 * opt.resolution_1d - 1);
        const double scale = std::max(coarse.m, 1e-300);
        const bool ok = std::isfinite(fine.m) &&
                        (fine.m == 0.0 || std::fabs(fine.m - coarse.m) <= opt.holder_stability * scale);
        std::ostringstream os;
        os.precision(10);
        os << "sampled M = " << fine.m << " (coarser grid: " << coarse.m << ")";
        add("P2", ok, {fine.x, fine.y}, os.str(), fine.m);
    }

    const auto q2 = linspace(q.domain(), opt.resolution_2d);
    // Q1 symmetry
    {
        bool ok = true;
        std::vector<double> w;
        for (std::size_t i = 0; i < q2.size() && ok; ++i) {
            for (std::size_t j = i + 1; j < q2.size(); ++j) {
                const double a = checked_eval(q.expr(), q2[i], q2[j]);
                const double b = checked_eval(q.expr(), q2[j], q2[i]);
                if (!(std::fabs(a - b) < opt.symmetry_tol)) {
                    ok = false;
                    w = {q2[i], q2[j]};
                    break;
                }
            }
        }
        add("Q1", ok, w, "q(x,y) = q(y,x) on sampled pairs");
    }
    // Q2 bounds
    {
        bool ok = rep.q.min > 1.0 && rep.q.max < rep.p.min;
        std::vector<double> w = rep.q.min > 1.0 ? rep.q.argmax : rep.q.argmin;
        add("Q2", ok, w, "1 < q^- and q^+ < p^-", rep.q.max);
    }
    // Q3 translation invariance for shifts keeping both points in the domain
    {
        const auto pts = linspace(q.domain(), opt.resolution_shift);
        const double len = q.domain().length();
        const int nz = 2 * opt.resolution_shift - 1;
        bool ok = true;
        std::vector<double> w;
        for (std::size_t i = 0; i < pts.size() && ok; ++i) {
            for (std::size_t j = 0; j < pts.size() && ok; ++j) {
                const double ref = checked_eval(q.expr(), pts[i], pts[j]);
                for (int m = 0; m < nz; ++m) {
                    const double z = -len + 2.0 * len * m / (nz - 1);
                    const double x = pts[i] - z;
                    const double y = pts[j] - z;
                    if (z == 0.0 || !q.domain().contains(x) || !q.domain().contains(y)) continue;
                    if (!(std::fabs(checked_eval(q.expr(), x, y) - ref) < opt.symmetry_tol)) {
                        ok = false;
                        w = {pts[i], pts[j], z};
                        break;
                    }
                }
            }
        }
        add("Q3", ok, w, "q((x,y) - (z,z)) = q(x,y) for sampled shifts inside the domain");
    }

    const auto s2 = linspace(s.domain(), opt.resolution_2d);
    // S1 symmetry on the enclosing box
    {
        bool ok = true;
        std::vector<double> w;
        for (std::size_t i = 0; i < s2.size() && ok; ++i) {
            for (std::size_t j = i + 1; j < s2.size(); ++j) {
                const double a = checked_eval(s.expr(), s2[i], s2[j]);
                const double b = checked_eval(s.expr(), s2[j], s2[i]);
                if (!(std::fabs(a - b) < opt.symmetry_tol)) {
                    ok = false;
                    w = {s2[i], s2[j]};
                    break;
                }
            }
        }
        add("S1", ok, w, "s(x,y) = s(y,x) on sampled pairs");
    }
    {
        const bool ok = rep.s.min > 0.0 && rep.s.max < 1.0;
        add("S2", ok, rep.s.min > 0.0 ? rep.s.argmax : rep.s.argmin, "0 < s^- and s^+ < 1",
            rep.s.max);
    }
    {
        const bool ok = rep.k.min > 1.0 && rep.k.max < 2.0;
        add("K1", ok, rep.k.min > 1.0 ? rep.k.argmax : rep.k.argmin, "1 < k^- and k^+ < 2",
            rep.k.max);
    }

    // V1 / V2 via the sampled zero set
    {
        bool nonneg = rep.v.min >= 0.0;
        try {
            const ZeroSet zs = extract_zero_set(v, opt.zeta_tol, opt.resolution_1d);
            rep.zero_set = zs.intervals;
            rep.omega0 = zs.omega0;
            rep.has_zero_set = true;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyZeroSet) throw;
        }
        if (!rep.has_zero_set) {
            add("V1", false, rep.v.argmin, "zero set of V is empty");
            add("V2", false, rep.v.argmin, "no Omega_0 without a zero set");
        } else {
            bool interior = true;
            std::vector<double> w = nonneg ? std::vector<double>{} : rep.v.argmin;
            for (const auto& iv : rep.zero_set) {
                if (iv.lo <= omega.lo || iv.hi >= omega.hi) {
                    interior = false;
                    w = {iv.lo <= omega.lo ? iv.lo : iv.hi};
                }
            }
            add("V1", nonneg && interior, w,
                "V >= 0 and its zero set is nonempty and strictly inside Omega");

            const auto o0 = linspace(rep.omega0, 101);
            bool vanishes = rep.omega0.length() > 0.0;
            std::vector<double> w2 = {rep.omega0.lo};
            for (double x : o0) {
                if (!(std::fabs(checked_eval(v.expr(), x)) <= opt.zeta_tol)) {
                    vanishes = false;
                    w2 = {x};
                    break;
                }
            }
            add("V2", vanishes, w2, "V vanishes on the closure of Omega_0");
        }
    }

    {
        const bool ok = nn > rep.q.max * rep.s.max;
        add("DIM", ok, rep.q.argmax, "n > q^+ s^+", rep.q.max * rep.s.max);
    }
    {
        const bool ok = nn > 2.0 * rep.s.max;
        add("DIM3", ok, rep.s.argmax, "n > 2 s^+", 2.0 * rep.s.max);
    }
    // SUBCRIT: q*(x) = n q(x,x) / (n - s^- q(x,x)) > r(x) for r = p and r = k
    {
        bool ok = true;
        std::vector<double> w;
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double den = nn - rep.s.min * qdiag[i];
            const double qstar = den > 0.0 ? nn * qdiag[i] / den : std::numeric_limits<double>::infinity();
            margin = std::min(margin, qstar - std::max(ps[i], ks[i]));
            if (den <= 0.0 || !(qstar > ps[i]) || !(qstar > ks[i])) {
                ok = false;
                w = {xs[i]};
                break;
            }
        }
        add("SUBCRIT", ok, w, "q*(x) > r(x) for r = p and r = k", margin);
    }
    return rep;
}

} // namespace varfrac
