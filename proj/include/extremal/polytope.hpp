#ifndef EXTREMAL_POLYTOPE_HPP
#define EXTREMAL_POLYTOPE_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <utility>

#include "extremal/common.hpp"

namespace extremal {

inline constexpr int kMaxDim = 4;
inline constexpr int kMaxFacets = 32;

// Open half-space {x : normal . x < offset}.
struct Halfspace {
    Vec normal;
    double offset = 0.0;
};

class Simplex {
public:
    explicit Simplex(std::vector<Vec> vertices) : verts_(std::move(vertices)) {
        const std::size_t n = verts_.empty() ? 0 : verts_[0].size();
        if (verts_.size() != n + 1) throw Error("simplex needs n+1 vertices in R^n");
        volume_ = std::abs(edge_determinant()) / factorial(n);
    }

    const std::vector<Vec>& vertices() const { return verts_; }
    std::size_t dim() const { return verts_.size() - 1; }
    double volume() const { return volume_; }

    Vec centroid() const {
        Vec c(verts_[0].size(), 0.0);
        for (const Vec& v : verts_)
            for (std::size_t i = 0; i < c.size(); ++i) c[i] += v[i];
        for (double& x : c) x /= static_cast<double>(verts_.size());
        return c;
    }

    double edge_determinant() const {
        const std::size_t n = verts_.size() - 1;
        std::vector<Vec> edges(n);
        for (std::size_t i = 0; i < n; ++i) edges[i] = sub(verts_[i + 1], verts_[0]);
        return determinant(edges);
    }

    double longest_edge(std::size_t& a, std::size_t& b) const {
        double best = -1.0;
        for (std::size_t i = 0; i < verts_.size(); ++i)
            for (std::size_t j = i + 1; j < verts_.size(); ++j) {
                const double len = norm2(sub(verts_[i], verts_[j]));
                if (len > best) {
                    best = len;
                    a = i;
                    b = j;
                }
            }
        return best;
    }

private:
    static double factorial(std::size_t n) {
        double f = 1.0;
        for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
        return f;
    }

    std::vector<Vec> verts_;
    double volume_;
};

// Bounded open convex polytope in H-representation. Immutable after
// construction: vertices, a strictly interior point, a triangulation and the
// volume are all computed once in the factory, so instances can be shared
// across threads freely.
class Polytope {
public:
    static Polytope from_halfspaces(std::vector<Halfspace> hs, int dim) {
        validate_shape(hs, dim);
        normalize(hs);

        // Boundedness certificate: enumerate over the system augmented with a
        // huge box. Any surviving vertex pinned to the box exposes a
        // recession direction.
        const double box = 1e6;
        std::vector<Halfspace> augmented = hs;
        for (int i = 0; i < dim; ++i) {
            Vec e(dim, 0.0);
            e[i] = 1.0;
            augmented.push_back({e, box});
            e[i] = -1.0;
            augmented.push_back({e, box});
        }
        std::vector<Vec> verts = enumerate(augmented, dim);
        if (verts.empty()) throw EmptyInterior();
        for (const Vec& v : verts)
            if (norm_inf(v) > box - 1.0) throw Unbounded();

        Polytope p;
        p.dim_ = dim;
        p.hs_ = std::move(hs);
        p.verts_ = std::move(verts);
        p.finish_construction();
        return p;
    }

    // Intersection of an existing bounded system with extra half-spaces.
    // Returns nullopt when the result is empty or lower-dimensional; used for
    // sub-level sets and piece regions, where emptiness is a normal outcome.
    static std::optional<Polytope> try_intersection(std::vector<Halfspace> hs, int dim) {
        normalize(hs);
        std::vector<Vec> verts = enumerate(hs, dim);
        if (verts.size() < static_cast<std::size_t>(dim) + 1) return std::nullopt;
        Polytope p;
        p.dim_ = dim;
        p.hs_ = std::move(hs);
        p.verts_ = std::move(verts);
        Vec c = centroid_of(p.verts_);
        if (p.margin(c) <= kTol) return std::nullopt;
        p.finish_construction();
        return p;
    }

    int dim() const { return dim_; }
    const std::vector<Halfspace>& halfspaces() const { return hs_; }
    const std::vector<Vec>& vertices() const { return verts_; }
    const Vec& interior_point() const { return interior_; }
    double volume() const { return volume_; }
    const std::vector<Simplex>& triangulation() const { return tris_; }
    bool degenerate_scale() const { return degenerate_scale_; }

    bool contains(const Vec& x, double tol = kTol) const {
        if (x.size() != static_cast<std::size_t>(dim_)) throw Error("dimension mismatch");
        for (const Halfspace& h : hs_)
            if (dot(h.normal, x) >= h.offset + tol) return false;
        return true;
    }

    // Smallest slack over all facets; positive iff strictly interior.
    double margin(const Vec& x) const {
        double m = kInf;
        for (const Halfspace& h : hs_) m = std::min(m, h.offset - dot(h.normal, x));
        return m;
    }

    // Minkowski functional of P - apex evaluated at a direction:
    // inf{ lambda > 0 : dir/lambda in P - apex }. Escaping directions from a
    // boundary apex give +infinity.
    double gauge(const Vec& apex, const Vec& dir) const {
        if (!contains(apex, kTol)) throw ApexOutside();
        double g = 0.0;
        for (const Halfspace& h : hs_) {
            const double ad = dot(h.normal, dir);
            if (ad <= 0.0) continue;
            const double slack = std::max(0.0, h.offset - dot(h.normal, apex));
            if (slack == 0.0) return kInf;
            g = std::max(g, ad / slack);
        }
        return g;
    }

    // center + s*(P - center) in H-representation. scale = 0 collapses to a
    // point; the result is flagged rather than rejected.
    Polytope homothety(const Vec& center, double s) const {
        if (s < 0.0) throw Error("homothety scale must be nonnegative");
        Polytope p;
        p.dim_ = dim_;
        p.hs_ = hs_;
        for (Halfspace& h : p.hs_) h.offset = s * h.offset + (1.0 - s) * dot(h.normal, center);
        p.verts_.reserve(verts_.size());
        for (const Vec& v : verts_) p.verts_.push_back(add(center, scale(sub(v, center), s)));
        if (s == 0.0) {
            p.degenerate_scale_ = true;
            p.verts_ = {center};
            p.interior_ = center;
            p.volume_ = 0.0;
            return p;
        }
        std::sort(p.verts_.begin(), p.verts_.end(), [](const Vec& a, const Vec& b) { return lex_less(a, b); });
        p.interior_ = add(center, scale(sub(interior_, center), s));
        p.tris_.reserve(tris_.size());
        const double sn = std::pow(s, dim_);
        for (const Simplex& t : tris_) {
            std::vector<Vec> vs;
            vs.reserve(t.vertices().size());
            for (const Vec& v : t.vertices()) vs.push_back(add(center, scale(sub(v, center), s)));
            p.tris_.emplace_back(std::move(vs));
        }
        p.volume_ = sn * volume_;
        return p;
    }

    // Vertex enumeration of an arbitrary bounded system, without building a
    // full polytope (no triangulation). The caller guarantees boundedness.
    static std::vector<Vec> vertex_candidates(std::vector<Halfspace> hs, int dim) {
        normalize(hs);
        return enumerate(hs, dim);
    }

    // Vertices lying on facet i (within the global tolerance).
    std::vector<std::size_t> facet_vertex_indices(std::size_t facet) const {
        std::vector<std::size_t> out;
        const Halfspace& h = hs_[facet];
        for (std::size_t k = 0; k < verts_.size(); ++k)
            if (std::abs(dot(h.normal, verts_[k]) - h.offset) <= kVertexSlack * (1.0 + norm_inf(verts_[k])))
                out.push_back(k);
        return out;
    }

private:
    Polytope() = default;

    static void validate_shape(const std::vector<Halfspace>& hs, int dim) {
        if (dim < 1 || dim > kMaxDim) throw DimensionTooLarge();
        if (static_cast<int>(hs.size()) > kMaxFacets) throw DimensionTooLarge("too many facets");
        for (const Halfspace& h : hs) {
            if (static_cast<int>(h.normal.size()) != dim) throw Error("normal dimension mismatch");
            if (norm2(h.normal) < kTol) throw Error("zero normal");
        }
    }

    static void normalize(std::vector<Halfspace>& hs) {
        for (Halfspace& h : hs) {
            const double len = norm2(h.normal);
            for (double& x : h.normal) x /= len;
            h.offset /= len;
        }
    }

    static Vec centroid_of(const std::vector<Vec>& vs) {
        Vec c(vs[0].size(), 0.0);
        for (const Vec& v : vs)
            for (std::size_t i = 0; i < c.size(); ++i) c[i] += v[i];
        for (double& x : c) x /= static_cast<double>(vs.size());
        return c;
    }

    // Brute-force vertex enumeration over n-subsets of facets; adequate at
    // desk scale (n <= 4, facets <= 32 plus a certification box).
    static std::vector<Vec> enumerate(const std::vector<Halfspace>& hs, int dim) {
        const std::size_t m = hs.size();
        const std::size_t n = static_cast<std::size_t>(dim);
        std::vector<std::size_t> idx(n);
        std::vector<Vec> found;
        std::vector<std::size_t> stack;
        stack.reserve(n);

        auto feasible = [&](const Vec& x) {
            const double slack = kVertexSlack * (1.0 + norm_inf(x));
            for (const Halfspace& h : hs)
                if (dot(h.normal, x) > h.offset + slack) return false;
            return true;
        };

        // Iterative subset enumeration in lexicographic order.
        std::vector<std::size_t> comb(n);
        for (std::size_t i = 0; i < n; ++i) comb[i] = i;
        if (m < n) return found;
        while (true) {
            std::vector<Vec> A(n);
            Vec b(n);
            for (std::size_t i = 0; i < n; ++i) {
                A[i] = hs[comb[i]].normal;
                b[i] = hs[comb[i]].offset;
            }
            Vec x;
            if (solve_linear(std::move(A), std::move(b), x) && feasible(x)) found.push_back(x);

            // next combination
            std::size_t i = n;
            while (i-- > 0) {
                if (comb[i] != i + m - n) {
                    ++comb[i];
                    for (std::size_t j = i + 1; j < n; ++j) comb[j] = comb[j - 1] + 1;
                    break;
                }
                if (i == 0) return dedup(found);
            }
        }
    }

    static std::vector<Vec> dedup(std::vector<Vec> vs) {
        std::sort(vs.begin(), vs.end(), [](const Vec& a, const Vec& b) { return lex_less(a, b, 0.0); });
        std::vector<Vec> out;
        for (const Vec& v : vs) {
            bool fresh = true;
            for (const Vec& u : out)
                if (norm_inf(sub(u, v)) <= kVertexSlack) {
                    fresh = false;
                    break;
                }
            if (fresh) out.push_back(v);
        }
        return out;
    }

    void finish_construction() {
        interior_ = centroid_of(verts_);
        if (margin(interior_) <= kTol) throw EmptyInterior("no strictly interior point (degenerate input)");
        std::sort(verts_.begin(), verts_.end(), [](const Vec& a, const Vec& b) { return lex_less(a, b); });
        triangulate();
        KahanSum vol;
        for (const Simplex& t : tris_) vol.add(t.volume());
        volume_ = vol.value();
    }

    static std::size_t affine_rank(const std::vector<Vec>& pts, const std::vector<std::size_t>& sel) {
        if (sel.size() < 2) return 0;
        std::vector<Vec> rows;
        for (std::size_t i = 1; i < sel.size(); ++i) rows.push_back(sub(pts[sel[i]], pts[sel[0]]));
        // Row-echelon rank with a fixed threshold.
        std::size_t rank = 0;
        const std::size_t cols = pts[sel[0]].size();
        for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
            std::size_t piv = rank;
            for (std::size_t r = rank + 1; r < rows.size(); ++r)
                if (std::abs(rows[r][c]) > std::abs(rows[piv][c])) piv = r;
            if (std::abs(rows[piv][c]) < 1e-8) continue;
            std::swap(rows[piv], rows[rank]);
            for (std::size_t r = rank + 1; r < rows.size(); ++r) {
                const double f = rows[r][c] / rows[rank][c];
                for (std::size_t cc = c; cc < cols; ++cc) rows[r][cc] -= f * rows[rank][cc];
            }
            ++rank;
        }
        return rank;
    }

    // Fan triangulation: cone the interior point over recursively triangulated
    // facets. A face is identified by the set of facets active on all of its
    // vertices; recursion bottoms out at segments. A polytope that is already
    // a simplex is returned as itself.
    void triangulate() {
        std::vector<std::size_t> all(verts_.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        std::set<std::vector<std::size_t>> seen;
        std::vector<std::vector<Vec>> chains;
        face_fan(all, {}, static_cast<std::size_t>(dim_), seen, {}, chains);
        tris_.clear();
        for (auto& chain : chains) tris_.emplace_back(std::move(chain));
        // Drop flat slivers produced by degenerate face combinatorics.
        std::erase_if(tris_, [&](const Simplex& t) { return t.volume() < 1e-14; });
    }

    void face_fan(const std::vector<std::size_t>& face, const std::vector<std::size_t>& active,
                  std::size_t d, std::set<std::vector<std::size_t>>& seen, std::vector<Vec> cone,
                  std::vector<std::vector<Vec>>& out) const {
        if (face.size() == d + 1) {
            std::vector<Vec> simplex = cone;
            for (std::size_t k : face) simplex.push_back(verts_[k]);
            out.push_back(std::move(simplex));
            return;
        }
        // Not a simplex: fan from the face centroid over its (d-1)-faces.
        Vec center(verts_[0].size(), 0.0);
        for (std::size_t k : face)
            for (std::size_t i = 0; i < center.size(); ++i) center[i] += verts_[k][i];
        for (double& x : center) x /= static_cast<double>(face.size());
        if (d == static_cast<std::size_t>(dim_)) center = interior_;

        cone.push_back(center);
        std::set<std::vector<std::size_t>> sub_seen;
        for (std::size_t j = 0; j < hs_.size(); ++j) {
            if (std::find(active.begin(), active.end(), j) != active.end()) continue;
            std::vector<std::size_t> sub;
            for (std::size_t k : face) {
                const double r = dot(hs_[j].normal, verts_[k]) - hs_[j].offset;
                if (std::abs(r) <= kVertexSlack * (1.0 + norm_inf(verts_[k]))) sub.push_back(k);
            }
            if (sub.size() < d) continue;
            if (affine_rank(verts_, sub) != d - 1) continue;
            if (!sub_seen.insert(sub).second) continue;
            std::vector<std::size_t> sub_active = active;
            sub_active.push_back(j);
            face_fan(sub, sub_active, d - 1, seen, cone, out);
        }
    }

    int dim_ = 0;
    std::vector<Halfspace> hs_;
    std::vector<Vec> verts_;
    Vec interior_;
    std::vector<Simplex> tris_;
    double volume_ = 0.0;
    bool degenerate_scale_ = false;
};

// Uniform sampler: pick a simplex of the triangulation with probability
// proportional to volume, then a Dirichlet(1,...,1) barycentric point.
class PolytopeSampler {
public:
    explicit PolytopeSampler(const Polytope& P) : P_(&P) {
        double acc = 0.0;
        for (const Simplex& t : P.triangulation()) {
            acc += t.volume();
            cumulative_.push_back(acc);
        }
        if (cumulative_.empty() || acc <= 0.0) throw Error("cannot sample a degenerate polytope");
    }

    Vec operator()(SplitMix64& rng) const {
        const double u = rng.next_double() * cumulative_.back();
        std::size_t k = std::lower_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin();
        if (k >= cumulative_.size()) k = cumulative_.size() - 1;
        const Simplex& t = P_->triangulation()[k];
        const std::size_t m = t.vertices().size();
        std::vector<double> w(m);
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double u1 = rng.next_double();
            while (u1 <= 0.0) u1 = rng.next_double();
            w[i] = -std::log(u1);
            total += w[i];
        }
        Vec x(P_->dim(), 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (int c = 0; c < P_->dim(); ++c) x[c] += (w[i] / total) * t.vertices()[i][c];
        return x;
    }

private:
    const Polytope* P_;
    std::vector<double> cumulative_;
};

// Convenience builders used throughout the tests and the CLI.

inline Polytope make_box(const Vec& lo, const Vec& hi) {
    const int n = static_cast<int>(lo.size());
    std::vector<Halfspace> hs;
    for (int i = 0; i < n; ++i) {
        Vec e(n, 0.0);
        e[i] = 1.0;
        hs.push_back({e, hi[i]});
        e[i] = -1.0;
        hs.push_back({e, -lo[i]});
    }
    return Polytope::from_halfspaces(std::move(hs), n);
}

inline Polytope make_unit_cube(int n) { return make_box(Vec(n, 0.0), Vec(n, 1.0)); }

// {x_i > 0, sum x_i < 1}
inline Polytope make_standard_simplex(int n) {
    std::vector<Halfspace> hs;
    for (int i = 0; i < n; ++i) {
        Vec e(n, 0.0);
        e[i] = -1.0;
        hs.push_back({e, 0.0});
    }
    hs.push_back({Vec(n, 1.0), 1.0});
    return Polytope::from_halfspaces(std::move(hs), n);
}

inline Polytope make_interval(double a, double b) { return make_box({a}, {b}); }

}  // namespace extremal

#endif  // EXTREMAL_POLYTOPE_HPP
