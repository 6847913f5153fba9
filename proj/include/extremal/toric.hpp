#ifndef EXTREMAL_TORIC_HPP
#define EXTREMAL_TORIC_HPP

#include <string>

#include "extremal/functionals.hpp"

namespace extremal {

// Transforms of a torus-invariant potential pair on the moment polytope.
// phi_ref is the user-supplied reference transform (bounded on P); the
// default reference is identically zero, which is all the implemented
// formulas need since only differences and infima of transforms enter.
struct ToricPotentialPair {
    Polytope P;
    ConvexFn phi_ref;
    ConvexFn phi_u;
};

// Total Kahler volume from the moment polytope: pi^n n! vol(P).
inline double toric_volume(const Polytope& P) {
    const int n = P.dim();
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= static_cast<double>(i);
    return std::pow(3.14159265358979323846264338328, n) * f * P.volume();
}

namespace detail {

// Exact integral of |f - g| for piecewise-affine f, g: decompose P by the
// joint activity regions and split each one along the zero set of the
// difference.
inline double exact_abs_difference(const MaxAffine& F, const MaxAffine& G, const Polytope& P) {
    const std::vector<AffinePiece> A = prune_pieces(F.pieces);
    const std::vector<AffinePiece> B = prune_pieces(G.pieces);
    KahanSum total;
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t j = 0; j < B.size(); ++j) {
            std::vector<Halfspace> hs = P.halfspaces();
            bool feasible = true;
            auto add_active = [&](const std::vector<AffinePiece>& pieces, std::size_t k) {
                for (std::size_t l = 0; l < pieces.size(); ++l) {
                    if (l == k) continue;
                    Vec d = sub(pieces[l].slope, pieces[k].slope);
                    if (norm2(d) < 1e-13) {
                        if (pieces[l].intercept > pieces[k].intercept) feasible = false;
                        continue;
                    }
                    hs.push_back({std::move(d), pieces[k].intercept - pieces[l].intercept});
                }
            };
            add_active(A, i);
            add_active(B, j);
            if (!feasible) continue;
            const AffinePiece diff{sub(A[i].slope, B[j].slope), A[i].intercept - B[j].intercept};
            // split the region by the sign of the difference
            for (int sign : {+1, -1}) {
                std::vector<Halfspace> part = hs;
                if (norm2(diff.slope) >= 1e-13) {
                    Vec nrm = scale(diff.slope, static_cast<double>(sign));
                    part.push_back({std::move(nrm), static_cast<double>(-sign) * diff.intercept});
                } else if ((sign > 0) != (diff.intercept <= 0.0)) {
                    continue;  // constant difference: only one sign branch exists
                }
                auto R = Polytope::try_intersection(std::move(part), P.dim());
                if (!R) continue;
                total.add(std::abs(R->volume() * diff.at(polytope_centroid(*R))));
            }
        }
    }
    return total.value();
}

}  // namespace detail

// Path-length distance between two potentials through their transforms:
// the normalized L^1 distance on the moment polytope. Exact for
// piecewise-affine transforms, Monte Carlo otherwise.
inline double d1_toric(const ConvexFn& phi0, const ConvexFn& phi1, const Polytope& P) {
    if (phi0.piecewise_affine() && phi1.piecewise_affine()) {
        return detail::exact_abs_difference(phi0.as_max_affine(), phi1.as_max_affine(), P) /
               P.volume();
    }
    return monte_carlo_integral([&](const Vec& x) { return std::abs(phi0(x) - phi1(x)); }, P,
                                400000, 0xd1d1ULL)
               .value /
           P.volume();
}

// Monge-Ampere energy slope on the transform side: minus the mean of the
// transform difference.
inline double ma_energy_toric(const ConvexFn& phi_u, const ConvexFn& phi_ref, const Polytope& P) {
    return -(mean_value(phi_u, P) - mean_value(phi_ref, P));
}

struct JMagnitude {
    double center = 0.0;
    std::string note;
};

// Magnitude of the J functional for an energy-normalized potential: the
// center is -inf phi_u; the additive constant depends only on the manifold
// and is reported symbolically, never computed.
inline JMagnitude j_magnitude_bounds(const ConvexFn& phi_u, const Polytope& P, double tol = 1e-7) {
    const double energy = ma_energy_toric(phi_u, ConvexFn::constant(0.0, P.dim()), P);
    if (std::abs(energy) > tol)
        throw NotNormalized("J magnitude needs I(u) = 0; re-center the transform first");
    JMagnitude j;
    j.center = -infimum_over_closure(phi_u, P).value;
    j.note = "J(u) = center +- C for a fixed constant C = C(X, omega), not computed";
    return j;
}

}  // namespace extremal

#endif  // EXTREMAL_TORIC_HPP
