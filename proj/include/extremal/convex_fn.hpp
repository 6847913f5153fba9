#ifndef EXTREMAL_CONVEX_FN_HPP
#define EXTREMAL_CONVEX_FN_HPP

#include <memory>
#include <variant>

#include "extremal/polytope.hpp"

namespace extremal {

struct AffinePiece {
    Vec slope;
    double intercept = 0.0;

    double at(const Vec& x) const { return dot(slope, x) + intercept; }
};

struct MaxAffine {
    std::vector<AffinePiece> pieces;
};

// Extremizer with apex y: ((n+1)/n) * gauge(P, y, x - y) - 1, clamped to
// [-1, 1/n]. Equivalently the infimum over r of the shrunken-domain
// membership r-levels; the two agree and the closed form is the evaluator.
struct GaugeExtremizer {
    std::shared_ptr<const Polytope> domain;
    Vec apex;
};

// Boundary collar ramp: max(0, (gauge - (1 - width)) / width). Vanishes on
// the inner homothety of scale 1 - width and climbs linearly to 1 at the
// boundary. Building block of the near-extremal family.
struct GaugeCollar {
    std::shared_ptr<const Polytope> domain;
    Vec apex;
    double width = 0.5;
};

struct Box {
    Vec lo;
    Vec hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Vec& x, double tol = kTol) const {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
        return true;
    }
};

// Sampled values on a uniform lattice with multilinear interpolation.
struct GridFn {
    Box box;
    std::vector<int> shape;          // nodes per axis, each >= 2
    std::vector<double> values;      // row-major, last axis fastest

    double node_coord(int axis, int k) const {
        return box.lo[axis] + (box.hi[axis] - box.lo[axis]) * static_cast<double>(k) /
               static_cast<double>(shape[axis] - 1);
    }

    double interpolate(const Vec& x) const {
        const int n = box.dim();
        std::vector<int> base(n);
        std::vector<double> frac(n);
        for (int a = 0; a < n; ++a) {
            const double span = box.hi[a] - box.lo[a];
            double t = (x[a] - box.lo[a]) / span * static_cast<double>(shape[a] - 1);
            t = std::clamp(t, 0.0, static_cast<double>(shape[a] - 1));
            int b = static_cast<int>(t);
            if (b > shape[a] - 2) b = shape[a] - 2;
            base[a] = b;
            frac[a] = t - static_cast<double>(b);
        }
        double acc = 0.0;
        const int corners = 1 << n;
        for (int c = 0; c < corners; ++c) {
            double w = 1.0;
            std::size_t flat = 0;
            for (int a = 0; a < n; ++a) {
                const int bit = (c >> a) & 1;
                w *= bit ? frac[a] : (1.0 - frac[a]);
                flat = flat * static_cast<std::size_t>(shape[a]) +
                       static_cast<std::size_t>(base[a] + bit);
            }
            acc += w * values[flat];
        }
        return acc;
    }
};

namespace detail {

// Discrete convexity of lattice samples: second differences along axes and
// the two main diagonals must be nonnegative. Exact for sampled convex
// functions, so it gates Grid construction without false alarms.
inline bool lattice_convex(const GridFn& g, double tol) {
    const int n = g.box.dim();
    std::vector<std::size_t> strides(n);
    std::size_t s = 1;
    for (int a = n - 1; a >= 0; --a) {
        strides[a] = s;
        s *= static_cast<std::size_t>(g.shape[a]);
    }
    const std::size_t total = g.values.size();
    std::vector<int> idx(n, 0);
    auto in_range = [&](const std::vector<int>& v) {
        for (int a = 0; a < n; ++a)
            if (v[a] < 0 || v[a] >= g.shape[a]) return false;
        return true;
    };
    std::vector<std::vector<int>> dirs;
    for (int a = 0; a < n; ++a) {
        std::vector<int> d(n, 0);
        d[a] = 1;
        dirs.push_back(d);
    }
    if (n >= 2)
        for (int mask = 1; mask < (1 << (n - 1)); ++mask) {
            std::vector<int> d(n, 0);
            d[0] = 1;
            for (int a = 1; a < n; ++a) d[a] = ((mask >> (a - 1)) & 1) ? 1 : -1;
            dirs.push_back(d);
        }
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (int a = 0; a < n; ++a) {
            idx[a] = static_cast<int>(rem / strides[a]);
            rem %= strides[a];
        }
        for (const auto& d : dirs) {
            std::vector<int> prev(n), next(n);
            for (int a = 0; a < n; ++a) {
                prev[a] = idx[a] - d[a];
                next[a] = idx[a] + d[a];
            }
            if (!in_range(prev) || !in_range(next)) continue;
            std::size_t fp = 0, fn = 0;
            for (int a = 0; a < n; ++a) {
                fp += static_cast<std::size_t>(prev[a]) * strides[a];
                fn += static_cast<std::size_t>(next[a]) * strides[a];
            }
            if (g.values[fp] + g.values[fn] - 2.0 * g.values[flat] < -tol) return false;
        }
    }
    return true;
}

}  // namespace detail

// A convex function given by one of the core shapes plus an additive shift.
// Shifting is the only mutation-like operation and returns a fresh value, so
// instances stay immutable and shareable.
class ConvexFn {
public:
    using Core = std::variant<MaxAffine, GaugeExtremizer, GaugeCollar, GridFn>;

    static ConvexFn max_affine(std::vector<AffinePiece> pieces) {
        if (pieces.empty()) throw Error("max_affine needs at least one piece");
        for (const AffinePiece& p : pieces)
            for (double s : p.slope)
                if (!std::isfinite(s)) throw Error("non-finite slope");
        return ConvexFn(MaxAffine{std::move(pieces)});
    }

    static ConvexFn constant(double c, int dim) { return max_affine({AffinePiece{Vec(dim, 0.0), c}}); }

    static ConvexFn gauge_extremizer(const Polytope& P, Vec apex) {
        if (!P.contains(apex, kTol)) throw ApexOutside();
        return ConvexFn(GaugeExtremizer{std::make_shared<Polytope>(P), std::move(apex)});
    }

    static ConvexFn gauge_collar(const Polytope& P, Vec apex, double width) {
        if (!P.contains(apex, kTol)) throw ApexOutside();
        if (width <= 0.0 || width > 1.0) throw Error("collar width must lie in (0, 1]");
        return ConvexFn(GaugeCollar{std::make_shared<Polytope>(P), std::move(apex), width});
    }

    // Grid construction is gated by a discrete convexity check of the nodes.
    static ConvexFn grid(Box box, std::vector<int> shape, std::vector<double> values) {
        std::size_t expect = 1;
        for (int s : shape) {
            if (s < 2) throw Error("grid needs >= 2 nodes per axis");
            expect *= static_cast<std::size_t>(s);
        }
        if (values.size() != expect) throw Error("grid value count mismatch");
        GridFn g{std::move(box), std::move(shape), std::move(values)};
        double span = 0.0;
        for (double v : g.values)
            if (std::isfinite(v)) span = std::max(span, std::abs(v));
        if (!detail::lattice_convex(g, 1e-9 * (1.0 + span)))
            throw ResolutionTooCoarse("grid samples fail the convexity check");
        return ConvexFn(std::move(g));
    }

    double operator()(const Vec& x) const {
        return std::visit([&](const auto& core) { return eval_core(core, x); }, core_) + shift_;
    }

    ConvexFn shifted(double c) const {
        ConvexFn f = *this;
        f.shift_ += c;
        return f;
    }

    double shift() const { return shift_; }
    const Core& core() const { return core_; }
    int dim() const {
        return std::visit(
            [](const auto& c) -> int {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, MaxAffine>)
                    return static_cast<int>(c.pieces[0].slope.size());
                else if constexpr (std::is_same_v<T, GridFn>)
                    return c.box.dim();
                else
                    return c.domain->dim();
            },
            core_);
    }

    bool piecewise_affine() const { return !std::holds_alternative<GridFn>(core_); }

    // Exact piecewise-affine form with the shift folded into intercepts.
    // Gauge shapes expand into one piece per facet visible from the apex.
    MaxAffine as_max_affine() const {
        MaxAffine out = std::visit(
            [&](const auto& c) -> MaxAffine {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, MaxAffine>) {
                    return c;
                } else if constexpr (std::is_same_v<T, GaugeExtremizer>) {
                    const int n = c.domain->dim();
                    const double factor = static_cast<double>(n + 1) / static_cast<double>(n);
                    MaxAffine m;
                    for (const AffinePiece& g : gauge_pieces(*c.domain, c.apex)) {
                        AffinePiece p;
                        p.slope = scale(g.slope, factor);
                        p.intercept = factor * g.intercept - 1.0;
                        m.pieces.push_back(std::move(p));
                    }
                    if (m.pieces.empty()) m.pieces.push_back({Vec(n, 0.0), -1.0});
                    return m;
                } else if constexpr (std::is_same_v<T, GaugeCollar>) {
                    const int n = c.domain->dim();
                    MaxAffine m;
                    m.pieces.push_back({Vec(n, 0.0), 0.0});
                    for (const AffinePiece& g : gauge_pieces(*c.domain, c.apex)) {
                        AffinePiece p;
                        p.slope = scale(g.slope, 1.0 / c.width);
                        p.intercept = (g.intercept - (1.0 - c.width)) / c.width;
                        m.pieces.push_back(std::move(p));
                    }
                    return m;
                } else {
                    throw UnsupportedVariant("grid functions have no exact piecewise-affine form");
                }
            },
            core_);
        for (AffinePiece& p : out.pieces) p.intercept += shift_;
        return out;
    }

    ConvexFn plus(const ConvexFn& other) const {
        const MaxAffine a = as_max_affine();
        const MaxAffine b = other.as_max_affine();
        std::vector<AffinePiece> pieces;
        pieces.reserve(a.pieces.size() * b.pieces.size());
        for (const AffinePiece& pa : a.pieces)
            for (const AffinePiece& pb : b.pieces)
                pieces.push_back({add(pa.slope, pb.slope), pa.intercept + pb.intercept});
        return max_affine(std::move(pieces));
    }

    ConvexFn scaled(double r) const {
        if (r <= 0.0) throw Error("scale factor must be positive");
        if (std::holds_alternative<GridFn>(core_)) {
            GridFn g = std::get<GridFn>(core_);
            for (double& v : g.values) v *= r;
            ConvexFn f{Core{std::move(g)}};
            f.shift_ = r * shift_;
            return f;
        }
        MaxAffine m = as_max_affine();
        for (AffinePiece& p : m.pieces) {
            p.slope = scale(p.slope, r);
            p.intercept *= r;
        }
        return max_affine(std::move(m.pieces));
    }

    // The facet pieces of gauge(P, y, x - y) as affine functions of x, one
    // per facet with positive slack at the apex.
    static std::vector<AffinePiece> gauge_pieces(const Polytope& P, const Vec& apex) {
        std::vector<AffinePiece> out;
        for (const Halfspace& h : P.halfspaces()) {
            const double slack = h.offset - dot(h.normal, apex);
            if (slack <= kTol) continue;
            AffinePiece p;
            p.slope = scale(h.normal, 1.0 / slack);
            p.intercept = -dot(h.normal, apex) / slack;
            out.push_back(std::move(p));
        }
        return out;
    }

private:
    explicit ConvexFn(Core core) : core_(std::move(core)) {}

    static double eval_core(const MaxAffine& m, const Vec& x) {
        double v = -kInf;
        for (const AffinePiece& p : m.pieces) v = std::max(v, p.at(x));
        return v;
    }

    static double eval_core(const GaugeExtremizer& e, const Vec& x) {
        const Polytope& P = *e.domain;
        if (!P.contains(x, 1e-7)) throw OutsideDomain();
        const int n = P.dim();
        const double g = P.gauge(e.apex, sub(x, e.apex));
        const double v = (static_cast<double>(n + 1) / n) * g - 1.0;
        return std::clamp(v, -1.0, 1.0 / n);
    }

    static double eval_core(const GaugeCollar& c, const Vec& x) {
        const Polytope& P = *c.domain;
        if (!P.contains(x, 1e-7)) throw OutsideDomain();
        const double g = P.gauge(c.apex, sub(x, c.apex));
        return std::max(0.0, (g - (1.0 - c.width)) / c.width);
    }

    static double eval_core(const GridFn& g, const Vec& x) {
        if (!g.box.contains(x, 1e-9)) throw OutsideDomain();
        return g.interpolate(x);
    }

    Core core_;
    double shift_ = 0.0;
};

struct ConvexityWitness {
    bool convex = true;
    Vec x;
    Vec y;
};

// Midpoint convexity on sampled pairs from P. Returns a violating pair on
// failure.
inline ConvexityWitness check_convexity(const ConvexFn& f, const Polytope& P, int samples,
                                        std::uint64_t seed, double tol = 1e-9) {
    SplitMix64 rng(seed);
    PolytopeSampler sample(P);
    for (int it = 0; it < samples; ++it) {
        const Vec x = sample(rng);
        const Vec y = sample(rng);
        Vec mid(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) mid[i] = 0.5 * (x[i] + y[i]);
        const double fx = f(x), fy = f(y), fm = f(mid);
        const double scale_tol = tol * (1.0 + std::abs(fx) + std::abs(fy));
        if (fm > 0.5 * (fx + fy) + scale_tol) return {false, x, y};
    }
    return {true, {}, {}};
}

}  // namespace extremal

#endif  // EXTREMAL_CONVEX_FN_HPP
