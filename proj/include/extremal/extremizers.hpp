#ifndef EXTREMAL_EXTREMIZERS_HPP
#define EXTREMAL_EXTREMIZERS_HPP

#include "extremal/functionals.hpp"

namespace extremal {

// The extremizer attached to an apex y in the closure of P.
inline ConvexFn build_gauge_extremizer(const Polytope& P, Vec apex) {
    return ConvexFn::gauge_extremizer(P, std::move(apex));
}

// Apex of a (candidate) extremizer: the minimizer over the closure.
inline Vec recover_apex(const ConvexFn& f, const Polytope& P) {
    return infimum_over_closure(f, P).argmin;
}

struct LevelResidual {
    double level = 0.0;
    double sym_diff_volume = 0.0;
    bool exact = false;
};

struct ExtremizerCertificate {
    Vec apex;
    std::vector<LevelResidual> homothety_residuals;
    double inf_value = 0.0;   // after normalization; -1 for a true extremizer
    double sup_value = 0.0;   // 1/n for a true extremizer
    double mean_residual = 0.0;
    double ratio_gap = 0.0;
    double tolerance = 0.0;
    bool valid = false;
};

struct CertifyOptions {
    std::size_t mc_samples = 100000;
    std::uint64_t seed = 0;
    double tolerance = 1e-3;
};

namespace detail {

inline double symmetric_difference_exact(const Polytope& P, const ConvexFn& g, double level,
                                         const Polytope& H) {
    const MaxAffine m = g.as_max_affine();
    std::vector<Halfspace> sub = P.halfspaces();
    for (const AffinePiece& p : m.pieces) {
        if (norm2(p.slope) < 1e-14) {
            if (p.intercept > level) return H.volume();  // sub-level empty
            continue;
        }
        sub.push_back({p.slope, level - p.intercept});
    }
    auto Q = Polytope::try_intersection(sub, P.dim());
    const double v1 = Q ? Q->volume() : 0.0;
    const double v2 = H.volume();
    double both = 0.0;
    if (Q) {
        std::vector<Halfspace> cap = sub;
        for (const Halfspace& h : H.halfspaces()) cap.push_back(h);
        auto I = Polytope::try_intersection(std::move(cap), P.dim());
        both = I ? I->volume() : 0.0;
    }
    return v1 + v2 - 2.0 * both;
}

inline double symmetric_difference_mc(const Polytope& P, const ConvexFn& g, double level,
                                      const Polytope& H, std::size_t samples, std::uint64_t seed) {
    PolytopeSampler draw(P);
    SplitMix64 rng(seed);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const Vec x = draw(rng);
        const bool in_sub = g(x) < level;
        const bool in_hom = H.contains(x, kTol);
        if (in_sub != in_hom) ++mismatches;
    }
    return P.volume() * static_cast<double>(mismatches) / static_cast<double>(samples);
}

}  // namespace detail

// Certify that f behaves like the extremizer with its own apex: after
// rescaling the minimum to -1, each sub-level set {f < a} must coincide with
// the dilation of P toward the apex at scale n(a+1)/(n+1). Residuals are
// recorded per level; the certificate is valid only when every one of them
// (plus the range, mean and ratio gaps) sits below the tolerance.
inline ExtremizerCertificate certify_extremizer(const ConvexFn& f, const Polytope& P,
                                                const std::vector<double>& levels,
                                                const CertifyOptions& opt = {}) {
    const int n = P.dim();
    const Infimum inf0 = infimum_over_closure(f, P);
    if (inf0.value >= -1e-12) throw NoNegativePart();

    // rescale the minimum to -1; an already-normalized input keeps its exact
    // gauge form
    const ConvexFn g = std::abs(inf0.value + 1.0) < 1e-15 ? f : f.scaled(1.0 / -inf0.value);

    ExtremizerCertificate cert;
    cert.tolerance = opt.tolerance;
    cert.apex = inf0.argmin;

    const Infimum infg = infimum_over_closure(g, P);
    cert.inf_value = infg.value;
    double sup = -kInf;
    for (const Vec& v : P.vertices()) sup = std::max(sup, g(v));
    cert.sup_value = sup;
    cert.mean_residual = mean_value(g, P);
    cert.ratio_gap = std::abs(ratio_report(g, P).ratio - sharp_constant(n));

    std::uint64_t level_index = 0;
    for (double a : levels) {
        if (a <= -1.0 || a >= 1.0 / n) throw Error("certification levels must lie in (-1, 1/n)");
        const double s = n * (a + 1.0) / (n + 1.0);
        const Polytope H = P.homothety(cert.apex, s);
        LevelResidual r;
        r.level = a;
        if (g.piecewise_affine()) {
            r.sym_diff_volume = detail::symmetric_difference_exact(P, g, a, H);
            r.exact = true;
        } else {
            r.sym_diff_volume = detail::symmetric_difference_mc(P, g, a, H, opt.mc_samples,
                                                                derive_seed(opt.seed, level_index));
            r.exact = false;
        }
        cert.homothety_residuals.push_back(r);
        ++level_index;
    }

    const double tol = opt.tolerance;
    cert.valid = std::abs(cert.inf_value + 1.0) <= tol && std::abs(cert.sup_value - 1.0 / n) <= tol &&
                 std::abs(cert.mean_residual) <= tol && cert.ratio_gap <= tol;
    for (const LevelResidual& r : cert.homothety_residuals)
        if (r.sym_diff_volume > tol * P.volume()) cert.valid = false;
    return cert;
}

// ---------------------------------------------------------------------------
// Affine extremizers exist exactly on cone-cap domains: all facets but one
// meet at a single vertex.

struct ConeHalfspaceDecomposition {
    Vec apex;
    Vec halfspace_normal;
    double halfspace_offset = 0.0;
    AffinePiece defining_function;  // normalized linear form of the cap, centered at the apex
    AffinePiece extremizer;         // the affine extremizer itself
    std::vector<Vec> apex_candidates;
};

inline std::optional<ConeHalfspaceDecomposition> detect_affine_extremizer(const Polytope& P) {
    const int n = P.dim();
    // true facets only: hyperplanes carrying at least n vertices, deduplicated
    std::vector<std::size_t> facets;
    for (std::size_t i = 0; i < P.halfspaces().size(); ++i) {
        if (P.facet_vertex_indices(i).size() < static_cast<std::size_t>(n)) continue;
        bool dup = false;
        for (std::size_t j : facets) {
            const Halfspace& a = P.halfspaces()[i];
            const Halfspace& b = P.halfspaces()[j];
            if (norm_inf(sub(a.normal, b.normal)) < 1e-9 && std::abs(a.offset - b.offset) < 1e-9)
                dup = true;
        }
        if (!dup) facets.push_back(i);
    }

    std::vector<Vec> candidates;
    std::vector<std::size_t> cap_of;
    for (const Vec& y : P.vertices()) {
        std::size_t off = 0, cap = 0;
        for (std::size_t i : facets) {
            const Halfspace& h = P.halfspaces()[i];
            if (std::abs(dot(h.normal, y) - h.offset) > kVertexSlack * (1.0 + norm_inf(y))) {
                ++off;
                cap = i;
            }
        }
        if (off == 1) {
            candidates.push_back(y);
            cap_of.push_back(cap);
        }
    }
    if (candidates.empty()) return std::nullopt;

    // vertices are stored in lexicographic order, so the first hit wins ties
    const Vec& y = candidates.front();
    const Halfspace& capf = P.halfspaces()[cap_of.front()];
    const double slack = capf.offset - dot(capf.normal, y);

    ConeHalfspaceDecomposition d;
    d.apex = y;
    d.halfspace_normal = capf.normal;
    d.halfspace_offset = capf.offset;
    const double factor = (1.0 + 1.0 / n) / slack;
    d.defining_function = AffinePiece{scale(capf.normal, factor), 0.0};
    d.extremizer = AffinePiece{scale(capf.normal, factor), -factor * dot(capf.normal, y) - 1.0};
    d.apex_candidates = std::move(candidates);
    return d;
}

// ---------------------------------------------------------------------------
// Near-extremal family for the upper constant. A gauge collar of width w,
// re-centered to mean zero, has ratio 2(1 - w/2)^2 on an interval; choosing
// w(eps) = 2(1 - sqrt(1 - 3 eps/4)) calibrates that to exactly 2 - 3 eps/2,
// which increases to the unattained supremum 2 as eps -> 0 and degenerates to
// the interval extremizer at eps = 1. The flat core always keeps at least a
// (1 - eps)^n volume fraction.

inline double collar_width_for(double epsilon) {
    if (epsilon <= 0.0 || epsilon > 1.0) throw Error("epsilon must lie in (0, 1]");
    return 2.0 * (1.0 - std::sqrt(1.0 - 0.75 * epsilon));
}

inline ConvexFn near_extremizer_family(const Polytope& P, const Vec& apex, double epsilon) {
    const double w = collar_width_for(epsilon);
    ConvexFn psi = ConvexFn::gauge_collar(P, apex, w);
    return normalize_mean_zero(psi, P);
}

}  // namespace extremal

#endif  // EXTREMAL_EXTREMIZERS_HPP
