#ifndef EXTREMAL_INTEGRATE_HPP
#define EXTREMAL_INTEGRATE_HPP

#include <functional>
#include <queue>

#include "extremal/convex_fn.hpp"

namespace extremal {

enum class Method { bracket, layer_cake, monte_carlo };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::bracket: return "bracket";
        case Method::layer_cake: return "layer_cake";
        case Method::monte_carlo: return "monte_carlo";
    }
    return "?";
}

struct IntegralEstimate {
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    Method method = Method::bracket;
    std::size_t work = 0;
};

class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(IntegralEstimate best_so_far)
        : Error("subdivision budget exceeded"), best(best_so_far) {}
    IntegralEstimate best;
};

// ---------------------------------------------------------------------------
// Rigorous bracket for convex integrands: on each simplex, Jensen's
// inequality bounds from below at the centroid and the chord rule bounds from
// above at the vertices. Adaptive bisection of the worst simplex along its
// longest edge; ties broken by insertion order, so runs are reproducible.

inline IntegralEstimate integrate_bracketed(const std::function<double(const Vec&)>& f,
                                            const Polytope& P, double tol = 1e-4,
                                            std::size_t budget = 400000) {
    struct Item {
        Simplex simplex;
        double lo, hi;
        std::size_t order;
    };
    struct Worse {
        bool operator()(const Item& a, const Item& b) const {
            const double ga = a.hi - a.lo, gb = b.hi - b.lo;
            if (ga != gb) return ga < gb;
            return a.order > b.order;
        }
    };

    auto rate = [&](const Simplex& s, std::size_t order) {
        const double lo = s.volume() * f(s.centroid());
        double mean = 0.0;
        for (const Vec& v : s.vertices()) mean += f(v);
        mean /= static_cast<double>(s.vertices().size());
        return Item{s, lo, s.volume() * mean, order};
    };

    std::priority_queue<Item, std::vector<Item>, Worse> queue;
    double sum_lo = 0.0, sum_hi = 0.0;
    std::size_t order = 0, work = 0;
    for (const Simplex& s : P.triangulation()) {
        Item it = rate(s, order++);
        ++work;
        sum_lo += it.lo;
        sum_hi += it.hi;
        queue.push(std::move(it));
    }

    auto finish = [&](Method m) {
        // Recompute the sums compensated over the remaining items for an
        // order-independent result.
        std::vector<Item> rest;
        while (!queue.empty()) {
            rest.push_back(queue.top());
            queue.pop();
        }
        KahanSum lo, hi;
        for (const Item& it : rest) {
            lo.add(it.lo);
            hi.add(it.hi);
        }
        IntegralEstimate est;
        est.lower = lo.value();
        est.upper = hi.value();
        est.value = 0.5 * (est.lower + est.upper);
        est.method = m;
        est.work = work;
        return est;
    };

    while (true) {
        const double mid = 0.5 * (sum_lo + sum_hi);
        if (sum_hi - sum_lo <= tol * (1.0 + std::abs(mid))) return finish(Method::bracket);
        if (work >= budget) throw BudgetExceeded(finish(Method::bracket));
        Item worst = queue.top();
        queue.pop();
        sum_lo -= worst.lo;
        sum_hi -= worst.hi;
        std::size_t a = 0, b = 1;
        worst.simplex.longest_edge(a, b);
        Vec mid_pt(P.dim());
        for (int c = 0; c < P.dim(); ++c)
            mid_pt[c] = 0.5 * (worst.simplex.vertices()[a][c] + worst.simplex.vertices()[b][c]);
        for (std::size_t repl : {a, b}) {
            std::vector<Vec> vs = worst.simplex.vertices();
            vs[repl] = mid_pt;
            Item child = rate(Simplex(std::move(vs)), order++);
            ++work;
            sum_lo += child.lo;
            sum_hi += child.hi;
            queue.push(std::move(child));
        }
    }
}

inline IntegralEstimate integrate_bracketed(const ConvexFn& f, const Polytope& P, double tol = 1e-4,
                                            std::size_t budget = 400000) {
    return integrate_bracketed([&](const Vec& x) { return f(x); }, P, tol, budget);
}

// ---------------------------------------------------------------------------
// Sub-level set volumes. Piecewise-affine sub-levels are polytopes; the two
// gauge shapes have the exact dilation law vol{. < a} = scale(a)^n vol(P).

namespace detail {

inline double max_affine_sublevel_volume(const MaxAffine& m, double shift, const Polytope& P,
                                         double a) {
    std::vector<Halfspace> hs = P.halfspaces();
    for (const AffinePiece& p : m.pieces) {
        if (norm2(p.slope) < 1e-14) {
            if (p.intercept + shift > a) return 0.0;  // constant piece above the level
            continue;
        }
        hs.push_back({p.slope, a - shift - p.intercept});
    }
    auto Q = Polytope::try_intersection(std::move(hs), P.dim());
    return Q ? Q->volume() : 0.0;
}

struct GaugeProfile {
    double volume = 0.0;    // vol(P)
    double inf_core = 0.0;  // min of the unshifted core
    double sup_core = 0.0;  // max of the unshifted core on the closure
    std::function<double(double)> prof;     // a -> vol{core < a}
    std::function<double(double)> cumint;   // a -> integral of prof from inf_core
};

inline GaugeProfile profile_of(const GaugeExtremizer& e) {
    const Polytope& P = *e.domain;
    const int n = P.dim();
    const double V = P.volume();
    GaugeProfile g;
    g.volume = V;
    g.inf_core = -1.0;
    g.sup_core = 1.0 / n;
    g.prof = [V, n](double a) {
        if (a <= -1.0) return 0.0;
        if (a >= 1.0 / n) return V;
        const double s = n * (a + 1.0) / (n + 1.0);
        return V * std::pow(s, n);
    };
    g.cumint = [V, n](double a) {
        if (a <= -1.0) return 0.0;
        const double top = std::min(a, 1.0 / n);
        const double base = std::pow(static_cast<double>(n) / (n + 1.0), n) / (n + 1.0);
        double c = V * base * std::pow(1.0 + top, n + 1);
        if (a > 1.0 / n) c += (a - 1.0 / n) * V;
        return c;
    };
    return g;
}

inline GaugeProfile profile_of(const GaugeCollar& c) {
    const Polytope& P = *c.domain;
    const int n = P.dim();
    const double V = P.volume();
    const double w = c.width;
    GaugeProfile g;
    g.volume = V;
    g.inf_core = 0.0;
    g.sup_core = 1.0;
    g.prof = [V, n, w](double a) {
        if (a <= 0.0) return 0.0;
        if (a >= 1.0) return V;
        return V * std::pow(1.0 - w + w * a, n);
    };
    g.cumint = [V, n, w](double a) {
        if (a <= 0.0) return 0.0;
        const double top = std::min(a, 1.0);
        double cum = V * (std::pow(1.0 - w + w * top, n + 1) - std::pow(1.0 - w, n + 1)) /
                     (w * (n + 1));
        if (a > 1.0) cum += (a - 1.0) * V;
        return cum;
    };
    return g;
}

// Signed and absolute integrals of (core + shift) over P from the volume
// profile, by the layer-cake identity with exact antiderivatives.
struct LayerCakeTotals {
    double integral = 0.0;
    double absolute = 0.0;
};

inline LayerCakeTotals layer_cake_exact(const GaugeProfile& g, double shift) {
    const double u0 = -shift;  // f < 0 iff core < u0
    auto I = [&](double u) { return g.volume * u - g.cumint(u); };  // antiderivative of V - prof
    const double neg = g.cumint(u0);
    const double pos = I(std::max(g.sup_core, u0)) - I(u0);
    return {pos - neg, pos + neg};
}

}  // namespace detail

inline double sublevel_volume(const ConvexFn& f, const Polytope& P, double a) {
    return std::visit(
        [&](const auto& core) -> double {
            using T = std::decay_t<decltype(core)>;
            if constexpr (std::is_same_v<T, MaxAffine>) {
                return detail::max_affine_sublevel_volume(core, f.shift(), P, a);
            } else if constexpr (std::is_same_v<T, GridFn>) {
                throw UnsupportedVariant("sub-level volumes need a piecewise-affine or gauge shape");
            } else {
                auto g = detail::profile_of(core);
                return g.prof(a - f.shift());
            }
        },
        f.core());
}

// ---------------------------------------------------------------------------
// Exact integrals of piecewise-affine functions: decompose P into the
// activity regions of the pieces; an affine integrand over a polytope is its
// value at the centroid times the volume.

namespace detail {

inline Vec polytope_centroid(const Polytope& Q) {
    Vec c(Q.dim(), 0.0);
    for (const Simplex& t : Q.triangulation()) {
        const Vec tc = t.centroid();
        for (int i = 0; i < Q.dim(); ++i) c[i] += t.volume() * tc[i];
    }
    for (double& x : c) x /= Q.volume();
    return c;
}

inline std::vector<AffinePiece> prune_pieces(const std::vector<AffinePiece>& pieces) {
    std::vector<AffinePiece> out;
    for (const AffinePiece& p : pieces) {
        bool dominated = false;
        for (AffinePiece& q : out) {
            if (norm_inf(sub(q.slope, p.slope)) < 1e-12) {
                q.intercept = std::max(q.intercept, p.intercept);
                dominated = true;
                break;
            }
        }
        if (!dominated) out.push_back(p);
    }
    return out;
}

inline double exact_integral_pieces(const std::vector<AffinePiece>& raw, const Polytope& P) {
    const std::vector<AffinePiece> pieces = prune_pieces(raw);
    if (pieces.size() == 1) {
        const Vec c = polytope_centroid(P);
        return P.volume() * pieces[0].at(c);
    }
    KahanSum total;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        std::vector<Halfspace> hs = P.halfspaces();
        bool feasible = true;
        for (std::size_t j = 0; j < pieces.size(); ++j) {
            if (j == k) continue;
            Vec d = sub(pieces[j].slope, pieces[k].slope);
            if (norm2(d) < 1e-13) {
                if (pieces[j].intercept > pieces[k].intercept) feasible = false;
                continue;
            }
            hs.push_back({std::move(d), pieces[k].intercept - pieces[j].intercept});
        }
        if (!feasible) continue;
        auto R = Polytope::try_intersection(std::move(hs), P.dim());
        if (!R) continue;
        total.add(R->volume() * pieces[k].at(polytope_centroid(*R)));
    }
    return total.value();
}

}  // namespace detail

// Exact integral of a piecewise-affine ConvexFn over P. Throws
// UnsupportedVariant for grid functions.
inline double exact_integral(const ConvexFn& f, const Polytope& P) {
    if (!f.piecewise_affine()) throw UnsupportedVariant("exact integrals need piecewise-affine input");
    if (std::holds_alternative<MaxAffine>(f.core()))
        return detail::exact_integral_pieces(f.as_max_affine().pieces, P);
    // gauge shapes: closed-form layer cake over the dilation profile
    return std::visit(
        [&](const auto& core) -> double {
            using T = std::decay_t<decltype(core)>;
            if constexpr (std::is_same_v<T, GaugeExtremizer> || std::is_same_v<T, GaugeCollar>) {
                return detail::layer_cake_exact(detail::profile_of(core), f.shift()).integral;
            } else {
                throw UnsupportedVariant();
            }
        },
        f.core());
}

inline double exact_abs_integral(const ConvexFn& f, const Polytope& P) {
    if (!f.piecewise_affine()) throw UnsupportedVariant("exact integrals need piecewise-affine input");
    if (std::holds_alternative<MaxAffine>(f.core())) {
        const MaxAffine m = f.as_max_affine();
        const double total = detail::exact_integral_pieces(m.pieces, P);
        std::vector<Halfspace> hs = P.halfspaces();
        bool whole_nonneg = false;
        for (const AffinePiece& p : m.pieces) {
            if (norm2(p.slope) < 1e-14) {
                if (p.intercept > 0.0) whole_nonneg = true;  // f >= intercept > 0
                continue;
            }
            hs.push_back({p.slope, -p.intercept});
        }
        if (whole_nonneg) return total;
        auto Q = Polytope::try_intersection(std::move(hs), P.dim());
        if (!Q) return total >= 0.0 ? total : -total;
        const double neg = detail::exact_integral_pieces(m.pieces, *Q);
        return total - 2.0 * neg;
    }
    return std::visit(
        [&](const auto& core) -> double {
            using T = std::decay_t<decltype(core)>;
            if constexpr (std::is_same_v<T, GaugeExtremizer> || std::is_same_v<T, GaugeCollar>) {
                return detail::layer_cake_exact(detail::profile_of(core), f.shift()).absolute;
            } else {
                throw UnsupportedVariant();
            }
        },
        f.core());
}

// ---------------------------------------------------------------------------
// Layer-cake absolute integral: integral of |f| from the monotone volume
// profiles. Exact antiderivatives for the gauge shapes; adaptive
// Gauss-Legendre on the profile for piecewise-affine input.

namespace detail {

inline const double kGL5x[5] = {-0.906179845938663992797626878299,
                                -0.538469310105683091036314420700, 0.0,
                                0.538469310105683091036314420700,
                                0.906179845938663992797626878299};
inline const double kGL5w[5] = {0.236926885056189087514264040720,
                                0.478628670499366468041291514836, 0.568888888888888888888888888889,
                                0.478628670499366468041291514836,
                                0.236926885056189087514264040720};

inline double gl5(const std::function<double(double)>& g, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += kGL5w[i] * g(mid + half * kGL5x[i]);
    return s * half;
}

// Adaptive panel quadrature with an error accumulator and an eval budget.
inline double adaptive_quad(const std::function<double(double)>& g, double a, double b, double tol,
                            std::size_t& evals, std::size_t budget, double& err_out) {
    struct Panel {
        double a, b, coarse;
    };
    std::vector<Panel> stack{{a, b, gl5(g, a, b)}};
    evals += 5;
    KahanSum total;
    double err = 0.0;
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.a + p.b);
        const double left = gl5(g, p.a, mid), right = gl5(g, mid, p.b);
        evals += 10;
        const double fine = left + right;
        const double diff = std::abs(fine - p.coarse);
        if (diff <= tol * std::max(1.0, std::abs(fine)) * ((p.b - p.a) / (b - a)) ||
            evals >= budget || (p.b - p.a) < 1e-13 * (b - a)) {
            total.add(fine);
            err += diff;
        } else {
            stack.push_back({p.a, mid, left});
            stack.push_back({mid, p.b, right});
        }
    }
    err_out += err;
    return total.value();
}

}  // namespace detail

inline IntegralEstimate layer_cake_abs(const ConvexFn& f, const Polytope& P,
                                       std::size_t quadrature_budget = 6000) {
    IntegralEstimate est;
    est.method = Method::layer_cake;

    if (std::holds_alternative<GaugeExtremizer>(f.core()) ||
        std::holds_alternative<GaugeCollar>(f.core())) {
        est.value = exact_abs_integral(f, P);
        est.lower = est.value - 1e-14 * (1.0 + std::abs(est.value));
        est.upper = est.value + 1e-14 * (1.0 + std::abs(est.value));
        est.work = 1;
        return est;
    }
    if (!std::holds_alternative<MaxAffine>(f.core()))
        throw UnsupportedVariant("layer-cake needs sub-level volumes");

    const MaxAffine m = f.as_max_affine();
    // f >= L with L = max_j min_vertices piece_j; the max over the closure is
    // attained at a vertex.
    double L = -kInf, U = -kInf;
    for (const AffinePiece& p : m.pieces) {
        double pmin = kInf;
        for (const Vec& v : P.vertices()) pmin = std::min(pmin, p.at(v));
        L = std::max(L, pmin);
    }
    for (const Vec& v : P.vertices()) {
        double val = -kInf;
        for (const AffinePiece& p : m.pieces) val = std::max(val, p.at(v));
        U = std::max(U, val);
    }

    const double V = P.volume();
    ConvexFn g = ConvexFn::max_affine(m.pieces);
    auto prof = [&](double t) { return sublevel_volume(g, P, t); };

    std::size_t evals = 0;
    double err = 0.0;
    KahanSum total;
    if (L < 0.0)
        total.add(detail::adaptive_quad([&](double t) { return prof(-t); }, 0.0, -L, 1e-10, evals,
                                        quadrature_budget, err));
    if (U > 0.0)
        total.add(detail::adaptive_quad([&](double t) { return V - prof(t); }, 0.0, U, 1e-10, evals,
                                        quadrature_budget, err));
    est.value = total.value();
    est.lower = est.value - err - 1e-12 * (1.0 + std::abs(est.value));
    est.upper = est.value + err + 1e-12 * (1.0 + std::abs(est.value));
    est.work = evals;
    return est;
}

// ---------------------------------------------------------------------------
// Monte Carlo over the simplex decomposition; unbiased, +-3 sigma bracket,
// bit-reproducible for a fixed seed.

inline IntegralEstimate monte_carlo_integral(const std::function<double(const Vec&)>& g,
                                             const Polytope& P, std::size_t samples,
                                             std::uint64_t seed) {
    if (samples == 0) throw Error("need at least one sample");
    PolytopeSampler draw(P);
    SplitMix64 rng(seed);
    KahanSum sum, sumsq;
    for (std::size_t i = 0; i < samples; ++i) {
        const double v = g(draw(rng));
        sum.add(v);
        sumsq.add(v * v);
    }
    const double N = static_cast<double>(samples);
    const double mean = sum.value() / N;
    const double var = std::max(0.0, sumsq.value() / N - mean * mean);
    const double sigma = std::sqrt(var / N);
    const double V = P.volume();
    IntegralEstimate est;
    est.value = V * mean;
    est.lower = V * (mean - 3.0 * sigma);
    est.upper = V * (mean + 3.0 * sigma);
    est.method = Method::monte_carlo;
    est.work = samples;
    return est;
}

inline IntegralEstimate monte_carlo_integral(const ConvexFn& f, const Polytope& P,
                                             std::size_t samples, std::uint64_t seed) {
    return monte_carlo_integral([&](const Vec& x) { return f(x); }, P, samples, seed);
}

}  // namespace extremal

#endif  // EXTREMAL_INTEGRATE_HPP
