#ifndef EXTREMAL_RADIAL_HPP
#define EXTREMAL_RADIAL_HPP

#include <functional>

#include "extremal/common.hpp"

namespace extremal {

// Model ray built from a current whose positive part carries no absolutely
// continuous mass: only the total-mass bookkeeping survives, and the mass of
// the s-slice is (1-s)^n V.
struct RadialRayModel {
    double tau_minus = 0.0;
    double tau_plus = 1.0;
    int dim = 1;
    double total_mass = 1.0;

    static RadialRayModel make(double a, double b, int n, double V = 1.0) {
        if (!(a < b)) throw Error("need tau_minus < tau_plus");
        if (n < 1) throw Error("dimension must be positive");
        if (!(V > 0.0)) throw Error("total mass must be positive");
        return {a, b, n, V};
    }

    // The energy-normalized ray: tau in [-1/n, 1].
    static RadialRayModel canonical(int n, double V = 1.0) {
        return make(-1.0 / static_cast<double>(n), 1.0, n, V);
    }

    bool is_canonical() const {
        return tau_plus == 1.0 && tau_minus == -1.0 / static_cast<double>(dim);
    }
};

inline double mass_profile(double s, int n, double V) {
    if (s < 0.0 || s > 1.0) throw Error("profile parameter must lie in [0, 1]");
    return std::pow(1.0 - s, n) * V;
}

// Sampled (or analytic) total-mass curve on the normalized parameter [0, 1].
struct MassProfile {
    std::function<double(double)> at;
    int dim = 1;
    double total = 1.0;

    static MassProfile plurisupported(int n, double V = 1.0) {
        return {[n, V](double s) { return mass_profile(s, n, V); }, n, V};
    }
};

namespace radial_detail {

inline double pow_int(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// exact integer powers n^n and (n+1)^(n+1); exact in double for n <= 15
inline void sharp_integers(int n, double& num, double& den) {
    num = 2.0;
    den = 1.0;
    for (int i = 0; i < n; ++i) num *= static_cast<double>(n);
    for (int i = 0; i < n + 1; ++i) den *= static_cast<double>(n + 1);
}

inline const double kGLx[8] = {-0.96028985649753623168356086857, -0.79666647741362673959155393647,
                               -0.52553240991632898581773904918, -0.18343464249564980493947614236,
                               0.18343464249564980493947614236,  0.52553240991632898581773904918,
                               0.79666647741362673959155393647,  0.96028985649753623168356086857};
inline const double kGLw[8] = {0.10122853629037625915253135431, 0.22238103445337447054435599443,
                               0.31370664587788728733796220199, 0.36268378337836198296515044928,
                               0.36268378337836198296515044928, 0.31370664587788728733796220199,
                               0.22238103445337447054435599443, 0.10122853629037625915253135431};

inline double gl8(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 8; ++i) s += kGLw[i] * f(mid + half * kGLx[i]);
    return s * half;
}

}  // namespace radial_detail

// Energy slope of the ray: (1/V) integral over [a, b] of (slice mass - V)
// plus b. The closed form collapses to (b + n a)/(n + 1), which vanishes
// identically on the canonical ray.
inline double radial_ma_energy(const RadialRayModel& m) {
    return (m.tau_plus + static_cast<double>(m.dim) * m.tau_minus) / (m.dim + 1);
}

// The same energy by direct quadrature of the mass profile (degree-n
// polynomial, integrated exactly by the 8-point rule for n <= 15).
inline double radial_ma_energy_quadrature(const RadialRayModel& m) {
    const double a = m.tau_minus, b = m.tau_plus;
    const double integral = radial_detail::gl8(
        [&](double tau) { return mass_profile((tau - a) / (b - a), m.dim, m.total_mass) - m.total_mass; },
        a, b);
    return integral / m.total_mass + b;
}

// Radial J functional: the top slope minus the energy slope.
inline double radial_j(const RadialRayModel& m) { return m.tau_plus - radial_ma_energy(m); }

// L^1 speed of the ray from the layer-cake of the slice masses.
inline double radial_d1(const RadialRayModel& m) {
    const int n = m.dim;
    const double a = m.tau_minus, b = m.tau_plus;
    if (m.is_canonical()) {
        double num, den;
        radial_detail::sharp_integers(n, num, den);
        return num / den;  // 2 n^n / (n+1)^(n+1)
    }
    if (a >= 0.0) return radial_ma_energy(m);
    if (b <= 0.0) return -radial_ma_energy(m);
    const double width = b - a;
    return -a - width / (n + 1) +
           2.0 * radial_detail::pow_int(b, n + 1) / ((n + 1) * radial_detail::pow_int(width, n));
}

inline double radial_d1_quadrature(const RadialRayModel& m) {
    const int n = m.dim;
    const double a = m.tau_minus, b = m.tau_plus, V = m.total_mass;
    auto M = [&](double s) { return mass_profile((s - a) / (b - a), n, V); };
    double total = 0.0;
    if (b > 0.0) total += radial_detail::gl8(M, std::max(a, 0.0), b);
    if (a > 0.0) total += a * V;
    if (a < 0.0) total += radial_detail::gl8([&](double s) { return V - M(s); }, a, std::min(b, 0.0));
    if (b < 0.0) total += -b * V;
    return total / V;
}

// Sharp J-to-speed ratio of the canonical ray, J/d1 evaluated in exact
// integer arithmetic: (n+1)^(n+1) / (2 n^n). Reciprocal of the sharp lower
// constant, exactly, in double precision for n <= 6.
inline double extremal_ratio(int n) {
    if (n < 1) throw Error("dimension must be positive");
    double num, den;
    radial_detail::sharp_integers(n, num, den);
    return den / num;
}

struct ConcavityWitness {
    bool concave = true;
    double s_left = 0.0, s_mid = 0.0, s_right = 0.0;
};

// Discrete concavity of the n-th root of the profile on a grid: every
// interior point must sit on or above the chord of its neighbors.
inline ConcavityWitness concavity_check(const MassProfile& profile, const std::vector<double>& grid) {
    const double root = 1.0 / profile.dim;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double l = grid[i - 1], c = grid[i], r = grid[i + 1];
        const double t = (c - l) / (r - l);
        const double chord = (1.0 - t) * std::pow(std::max(profile.at(l), 0.0), root) +
                             t * std::pow(std::max(profile.at(r), 0.0), root);
        if (std::pow(std::max(profile.at(c), 0.0), root) < chord - 1e-10 * (1.0 + chord))
            return {false, l, c, r};
    }
    return {true, 0.0, 0.0, 0.0};
}

// Equality case of the slice-mass comparison: the profile must match the
// pure power law (1-s)^n V on the grid. The numerical shadow of ray
// rigidity: only plurisupported-model profiles pass.
inline bool equality_rigidity_check(const MassProfile& profile, const std::vector<double>& grid,
                                    double tol = 1e-9) {
    for (double s : grid) {
        if (s < 0.0 || s >= 1.0) continue;
        if (std::abs(profile.at(s) - mass_profile(s, profile.dim, profile.total)) >
            tol * profile.total)
            return false;
    }
    return true;
}

struct RadialReport {
    int n = 1;
    double a = 0.0, b = 1.0;
    double I = 0.0, J = 0.0, d1 = 0.0, ratio = 0.0;
    bool rigidity = false;
};

inline RadialReport radial_report(const RadialRayModel& m, int rigidity_grid = 33) {
    RadialReport r;
    r.n = m.dim;
    r.a = m.tau_minus;
    r.b = m.tau_plus;
    r.I = radial_ma_energy(m);
    r.J = radial_j(m);
    r.d1 = radial_d1(m);
    r.ratio = m.is_canonical() ? extremal_ratio(m.dim) : r.J / r.d1;
    std::vector<double> grid;
    for (int i = 0; i < rigidity_grid; ++i)
        grid.push_back(static_cast<double>(i) / rigidity_grid);
    r.rigidity = equality_rigidity_check(MassProfile::plurisupported(m.dim, m.total_mass), grid);
    return r;
}

}  // namespace extremal

#endif  // EXTREMAL_RADIAL_HPP
