#ifndef EXTREMAL_COMMON_HPP
#define EXTREMAL_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace extremal {

using Vec = std::vector<double>;

// Global geometric tolerance: membership, vertex activity, apex checks.
inline constexpr double kTol = 1e-9;

// Slack used when accepting candidate vertices from n-by-n solves. Looser
// than kTol so that true vertices survive roundoff in the linear solves.
inline constexpr double kVertexSlack = 1e-7;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class EmptyInterior : public Error {
public:
    explicit EmptyInterior(const std::string& what = "polytope has empty interior") : Error(what) {}
};

class Unbounded : public Error {
public:
    explicit Unbounded(const std::string& what = "half-space system is unbounded") : Error(what) {}
};

class DimensionTooLarge : public Error {
public:
    explicit DimensionTooLarge(const std::string& what = "dimension or facet count beyond supported scale")
        : Error(what) {}
};

class ApexOutside : public Error {
public:
    explicit ApexOutside(const std::string& what = "apex outside the closure of the polytope") : Error(what) {}
};

class OutsideDomain : public Error {
public:
    explicit OutsideDomain(const std::string& what = "evaluation point outside the domain") : Error(what) {}
};

class UnsupportedVariant : public Error {
public:
    explicit UnsupportedVariant(const std::string& what = "operation not supported for this representation")
        : Error(what) {}
};

class ResolutionTooCoarse : public Error {
public:
    explicit ResolutionTooCoarse(const std::string& what = "grid resolution too coarse") : Error(what) {}
};

class NonConvergence : public Error {
public:
    explicit NonConvergence(const std::string& what = "iteration failed to converge") : Error(what) {}
};

class NoNegativePart : public Error {
public:
    explicit NoNegativePart(const std::string& what = "function has no negative part") : Error(what) {}
};

class NotNormalized : public Error {
public:
    explicit NotNormalized(const std::string& what = "potential is not energy-normalized") : Error(what) {}
};

// ---------------------------------------------------------------------------
// Small dense linear algebra, enough for desk-scale polytopes (n <= 4).

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec scale(const Vec& a, double s) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

inline bool lex_less(const Vec& a, const Vec& b, double tol = kTol) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i] - tol) return true;
        if (a[i] > b[i] + tol) return false;
    }
    return false;
}

// Solves A x = b in place by Gaussian elimination with partial pivoting.
// Returns false when the pivot falls below `pivot_tol` (singular system).
inline bool solve_linear(std::vector<Vec> A, Vec b, Vec& x, double pivot_tol = 1e-12) {
    const std::size_t n = A.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) < pivot_tol) return false;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A[r][col] / A[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double s = b[ri];
        for (std::size_t c = ri + 1; c < n; ++c) s -= A[ri][c] * x[c];
        x[ri] = s / A[ri][ri];
    }
    return true;
}

// Determinant of a small square matrix (rows), partial pivoting.
inline double determinant(std::vector<Vec> A) {
    const std::size_t n = A.size();
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (A[piv][col] == 0.0) return 0.0;
        if (piv != col) {
            std::swap(A[piv], A[col]);
            det = -det;
        }
        det *= A[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A[r][col] / A[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
        }
    }
    return det;
}

// Neumaier compensated accumulator; keeps sums order-robust.
class KahanSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// ---------------------------------------------------------------------------
// Deterministic RNG. splitmix64 doubles both as the stream generator and as
// the per-trial seed derivation (trial seeds are splitmix64(master ^ index)).

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution; identical across platforms.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Marsaglia polar would need rejection state; Box-Muller is deterministic.
    double normal() {
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    std::uint64_t derive(std::uint64_t index) const {
        SplitMix64 g(state_ ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        return g.next_u64();
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return SplitMix64(master).derive(index);
}

}  // namespace extremal

#endif  // EXTREMAL_COMMON_HPP
