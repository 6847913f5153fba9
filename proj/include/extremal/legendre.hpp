#ifndef EXTREMAL_LEGENDRE_HPP
#define EXTREMAL_LEGENDRE_HPP

#include <functional>

#include "extremal/convex_fn.hpp"

namespace extremal {

namespace detail {

inline std::vector<Vec> lattice_points(const Box& box, int nodes_per_axis) {
    const int n = box.dim();
    std::vector<Vec> pts;
    std::vector<int> idx(n, 0);
    while (true) {
        Vec x(n);
        for (int a = 0; a < n; ++a)
            x[a] = box.lo[a] + (box.hi[a] - box.lo[a]) * static_cast<double>(idx[a]) /
                                   static_cast<double>(nodes_per_axis - 1);
        pts.push_back(std::move(x));
        int a = n - 1;
        while (a >= 0 && ++idx[a] == nodes_per_axis) idx[a--] = 0;
        if (a < 0) break;
    }
    return pts;
}

}  // namespace detail

// Discrete Legendre transform on a box. The dual variable ranges over the
// same box, so the box must cover both the domain of interest and the slope
// range of the input; slopes outside it saturate at the boundary samples.
// Sample lattice and output lattice coincide, which keeps the dual pairing
// inequalities exact at the nodes.
inline ConvexFn legendre_transform(const std::function<double(const Vec&)>& f, const Box& box,
                                   int resolution) {
    if (resolution < 2) throw Error("resolution must be >= 2 per axis");
    const int n = box.dim();
    const std::vector<Vec> xs = detail::lattice_points(box, resolution);
    std::vector<double> fx(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) fx[i] = f(xs[i]);

    std::vector<double> values(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        double best = -kInf;
        for (std::size_t i = 0; i < xs.size(); ++i) best = std::max(best, dot(xs[j], xs[i]) - fx[i]);
        values[j] = best;
    }
    std::vector<int> shape(n, resolution);
    // A discrete max of affine functions of s is convex, so the gate only
    // trips on pathological inputs (e.g. non-finite samples).
    return ConvexFn::grid(box, std::move(shape), std::move(values));
}

inline ConvexFn legendre_transform(const ConvexFn& f, const Box& box, int resolution) {
    return legendre_transform([&](const Vec& x) { return f(x); }, box, resolution);
}

// max of |f**(x) - f(x)| over a refinement of the transform lattice (4x + 1
// nodes per axis). Measuring between nodes keeps the metric honest for
// functions whose gradients land exactly on the lattice, where the nodal
// values alone are reproduced exactly at every resolution.
inline double involution_residual(const std::function<double(const Vec&)>& f, const Box& box,
                                  int resolution) {
    const ConvexFn g = legendre_transform(f, box, resolution);
    const ConvexFn gg = legendre_transform(g, box, resolution);
    double worst = 0.0;
    for (const Vec& x : detail::lattice_points(box, 4 * resolution + 1))
        worst = std::max(worst, std::abs(gg(x) - f(x)));
    return worst;
}

inline double involution_residual(const ConvexFn& f, const Box& box, int resolution) {
    return involution_residual([&](const Vec& x) { return f(x); }, box, resolution);
}

}  // namespace extremal

#endif  // EXTREMAL_LEGENDRE_HPP
