#ifndef EXTREMAL_FUNCTIONALS_HPP
#define EXTREMAL_FUNCTIONALS_HPP

#include <thread>

#include "extremal/integrate.hpp"

namespace extremal {

// Sharp lower constant c_n = 2 n^n / (n+1)^(n+1). Evaluated as a single
// division of exactly representable integers, so c_n and its reciprocal
// multiply back to 1.0 in double precision for n <= 6.
inline double sharp_constant(int n) {
    if (n < 1) throw Error("dimension must be positive");
    double num = 2.0, den = 1.0;
    for (int i = 0; i < n; ++i) num *= static_cast<double>(n);
    for (int i = 0; i < n + 1; ++i) den *= static_cast<double>(n + 1);
    return num / den;
}

struct Infimum {
    double value = 0.0;
    Vec argmin;
};

// Minimum of a convex function over the closure of P. Piecewise-affine
// functions reduce to a small LP solved exactly by enumerating the vertices
// of the capped epigraph; the gauge shapes carry their minimum at the apex by
// construction. Ties resolve to the lexicographically smallest minimizer.
inline Infimum infimum_over_closure(const ConvexFn& f, const Polytope& P) {
    return std::visit(
        [&](const auto& core) -> Infimum {
            using T = std::decay_t<decltype(core)>;
            if constexpr (std::is_same_v<T, GaugeExtremizer>) {
                return {-1.0 + f.shift(), core.apex};
            } else if constexpr (std::is_same_v<T, GaugeCollar>) {
                return {f.shift(), core.apex};
            } else if constexpr (std::is_same_v<T, GridFn>) {
                Infimum best{kInf, P.interior_point()};
                auto consider = [&](const Vec& x) {
                    if (!core.box.contains(x, 1e-9)) return;
                    const double v = f(x);
                    if (v < best.value - 1e-12 ||
                        (v <= best.value + 1e-12 && lex_less(x, best.argmin))) {
                        best.value = v;
                        best.argmin = x;
                    }
                };
                // lattice nodes inside P, then the vertices of P
                const int n = core.box.dim();
                std::vector<int> idx(n, 0);
                while (true) {
                    Vec x(n);
                    for (int a = 0; a < n; ++a) x[a] = core.node_coord(a, idx[a]);
                    if (P.contains(x, 1e-9)) consider(x);
                    int a = n - 1;
                    while (a >= 0 && ++idx[a] == core.shape[a]) idx[a--] = 0;
                    if (a < 0) break;
                }
                for (const Vec& v : P.vertices()) consider(v);
                consider(P.interior_point());
                return best;
            } else {
                const MaxAffine m = f.as_max_affine();
                const int n = P.dim();
                double cap = -kInf;
                for (const Vec& v : P.vertices()) {
                    double val = -kInf;
                    for (const AffinePiece& p : m.pieces) val = std::max(val, p.at(v));
                    cap = std::max(cap, val);
                }
                std::vector<Halfspace> hs;
                for (const Halfspace& h : P.halfspaces()) {
                    Vec a = h.normal;
                    a.push_back(0.0);
                    hs.push_back({std::move(a), h.offset});
                }
                for (const AffinePiece& p : m.pieces) {
                    Vec a = p.slope;
                    a.push_back(-1.0);
                    hs.push_back({std::move(a), -p.intercept});
                }
                Vec top(n + 1, 0.0);
                top[n] = 1.0;
                hs.push_back({std::move(top), cap + 1.0});
                const std::vector<Vec> verts = Polytope::vertex_candidates(std::move(hs), n + 1);
                if (verts.empty()) throw NonConvergence("epigraph enumeration found no vertices");
                Infimum best{kInf, {}};
                for (const Vec& v : verts) {
                    const double t = v[n];
                    Vec x(v.begin(), v.begin() + n);
                    if (t < best.value - 1e-9 ||
                        (t <= best.value + 1e-9 && (best.argmin.empty() || lex_less(x, best.argmin)))) {
                        best.value = std::min(t, best.value);
                        best.argmin = std::move(x);
                    }
                }
                return best;
            }
        },
        f.core());
}

// Mean of f over P; exact for piecewise-affine and gauge shapes, bracketed
// quadrature otherwise.
inline double mean_value(const ConvexFn& f, const Polytope& P) {
    if (f.piecewise_affine()) return exact_integral(f, P) / P.volume();
    return integrate_bracketed(f, P, 1e-8).value / P.volume();
}

inline ConvexFn normalize_mean_zero(const ConvexFn& f, const Polytope& P) {
    return f.shifted(-mean_value(f, P));
}

inline double abs_mean_value(const ConvexFn& f, const Polytope& P) {
    if (f.piecewise_affine()) return exact_abs_integral(f, P) / P.volume();
    return monte_carlo_integral([&](const Vec& x) { return std::abs(f(x)); }, P, 400000, 0x5eedULL)
               .value /
           P.volume();
}

enum class Verdict { within_bounds, lower_violation, upper_violation };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::within_bounds: return "within_bounds";
        case Verdict::lower_violation: return "lower_violation";
        case Verdict::upper_violation: return "upper_violation";
    }
    return "?";
}

struct FunctionalReport {
    double infimum = 0.0;
    Vec argmin;
    double mean_residual = 0.0;
    double abs_mean = 0.0;
    double ratio = 0.0;
    double sharp_lower = 0.0;
    double upper = 2.0;
    Verdict verdict = Verdict::within_bounds;
    bool degenerate = false;
};

inline constexpr double kRatioTol = 1e-7;

// Evaluate the two-sided bound for a convex function on P. The function is
// re-centered to mean zero internally; the ratio compares the normalized
// absolute mass against the depth of the minimum.
inline FunctionalReport ratio_report(const ConvexFn& f, const Polytope& P, double tol = kRatioTol) {
    FunctionalReport rep;
    rep.sharp_lower = sharp_constant(P.dim());

    const ConvexFn g = normalize_mean_zero(f, P);
    rep.mean_residual = mean_value(g, P);
    const Infimum inf = infimum_over_closure(g, P);
    rep.infimum = inf.value;
    rep.argmin = inf.argmin;
    rep.abs_mean = abs_mean_value(g, P);

    if (-rep.infimum < 1e-12 * (1.0 + rep.abs_mean)) {
        rep.degenerate = true;
        rep.ratio = 0.0;
        rep.verdict = Verdict::within_bounds;
        return rep;
    }
    rep.ratio = rep.abs_mean / (-rep.infimum);
    if (rep.ratio < rep.sharp_lower - tol)
        rep.verdict = Verdict::lower_violation;
    else if (rep.ratio > rep.upper + tol)
        rep.verdict = Verdict::upper_violation;
    else
        rep.verdict = Verdict::within_bounds;
    return rep;
}

// Volume of the strict negative region and the absolute mass it carries.
struct NegativePart {
    double volume = 0.0;
    double abs_integral = 0.0;
};

inline NegativePart negative_part(const ConvexFn& f, const Polytope& P) {
    const MaxAffine m = f.as_max_affine();
    std::vector<Halfspace> hs = P.halfspaces();
    for (const AffinePiece& p : m.pieces) {
        if (norm2(p.slope) < 1e-14) {
            if (p.intercept >= 0.0) return {0.0, 0.0};
            continue;
        }
        hs.push_back({p.slope, -p.intercept});
    }
    auto Q = Polytope::try_intersection(std::move(hs), P.dim());
    if (!Q) return {0.0, 0.0};
    return {Q->volume(), -detail::exact_integral_pieces(m.pieces, *Q)};
}

// ---------------------------------------------------------------------------
// Randomized instances. All draws come from a SplitMix64 stream, and
// campaign trials derive their seed as splitmix64(master ^ mix(index)), so
// runs reproduce bit-for-bit regardless of threading.

inline Polytope random_polytope(int n, SplitMix64& rng) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<Halfspace> hs;
        const int extra = 2 + static_cast<int>(rng.next_u64() % (2 * n + 2));
        for (int k = 0; k < extra; ++k) {
            Vec a(n);
            for (int i = 0; i < n; ++i) a[i] = rng.normal();
            if (norm2(a) < 1e-6) continue;
            hs.push_back({a, rng.uniform(0.7, 1.3) * norm2(a)});
        }
        for (int i = 0; i < n; ++i) {
            Vec e(n, 0.0);
            e[i] = 1.0;
            hs.push_back({e, rng.uniform(1.2, 2.2)});
            e[i] = -1.0;
            hs.push_back({e, rng.uniform(1.2, 2.2)});
        }
        try {
            return Polytope::from_halfspaces(std::move(hs), n);
        } catch (const Error&) {
            continue;
        }
    }
    throw NonConvergence("failed to draw a valid random polytope");
}

enum class ApexKind { interior, vertex, facet };

inline Vec random_apex(const Polytope& P, SplitMix64& rng, ApexKind kind) {
    switch (kind) {
        case ApexKind::interior: {
            PolytopeSampler s(P);
            return s(rng);
        }
        case ApexKind::vertex:
            return P.vertices()[rng.next_u64() % P.vertices().size()];
        case ApexKind::facet: {
            for (int tries = 0; tries < 32; ++tries) {
                const std::size_t fi = rng.next_u64() % P.halfspaces().size();
                const auto idx = P.facet_vertex_indices(fi);
                if (idx.size() < static_cast<std::size_t>(P.dim())) continue;
                std::vector<double> w(idx.size());
                double tot = 0.0;
                for (double& wi : w) {
                    wi = -std::log(std::max(rng.next_double(), 1e-12));
                    tot += wi;
                }
                Vec y(P.dim(), 0.0);
                for (std::size_t i = 0; i < idx.size(); ++i)
                    for (int c = 0; c < P.dim(); ++c) y[c] += (w[i] / tot) * P.vertices()[idx[i]][c];
                return y;
            }
            return P.vertices().front();
        }
    }
    return P.interior_point();
}

// Random mean-zero piecewise-affine convex function: up to 2n+3 affine pieces
// with slopes in [-3,3]^n and intercepts in [-1,1]; near-constant draws are
// rejected so the ratio stays well defined.
inline ConvexFn random_mean_zero_fn(const Polytope& P, SplitMix64& rng) {
    const int n = P.dim();
    for (int attempt = 0; attempt < 64; ++attempt) {
        const int k = 2 + static_cast<int>(rng.next_u64() % (2 * n + 2));
        std::vector<AffinePiece> pieces;
        for (int i = 0; i < k; ++i) {
            Vec s(n);
            for (int c = 0; c < n; ++c) s[c] = rng.uniform(-3.0, 3.0);
            pieces.push_back({std::move(s), rng.uniform(-1.0, 1.0)});
        }
        ConvexFn f = normalize_mean_zero(ConvexFn::max_affine(std::move(pieces)), P);
        if (infimum_over_closure(f, P).value < -1e-3) return f;
    }
    throw NonConvergence("failed to draw a non-degenerate convex function");
}

// ---------------------------------------------------------------------------
// Verification campaign over random instances.

struct CampaignSummary {
    int trials = 0;
    int violations = 0;
    double min_ratio = kInf;
    double max_ratio = -kInf;
    double c_n = 0.0;
    std::vector<FunctionalReport> reports;  // indexed by trial
};

inline CampaignSummary run_verify_campaign(int dim, int trials, std::uint64_t seed,
                                           double tol = kRatioTol, int threads = 1) {
    if (dim < 1 || dim > 3) throw DimensionTooLarge("randomized campaigns support dim <= 3");
    if (trials < 1) throw Error("need at least one trial");
    CampaignSummary sum;
    sum.trials = trials;
    sum.c_n = sharp_constant(dim);
    sum.reports.resize(trials);

    auto run_trial = [&](int t) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        Polytope P = random_polytope(dim, rng);
        ConvexFn f = random_mean_zero_fn(P, rng);
        sum.reports[t] = ratio_report(f, P, tol);
    };

    threads = std::max(1, threads);
    if (threads == 1) {
        for (int t = 0; t < trials; ++t) run_trial(t);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&, w] {
                for (int t = w; t < trials; t += threads) run_trial(t);
            });
        for (auto& th : pool) th.join();
    }

    for (const FunctionalReport& r : sum.reports) {
        if (r.degenerate) continue;
        sum.min_ratio = std::min(sum.min_ratio, r.ratio);
        sum.max_ratio = std::max(sum.max_ratio, r.ratio);
        if (r.verdict != Verdict::within_bounds) ++sum.violations;
    }
    return sum;
}

}  // namespace extremal

#endif  // EXTREMAL_FUNCTIONALS_HPP
