// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Each criterion pins its tolerances in code; seeds are fixed so the run is
// reproducible end to end.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "extremal/extremizers.hpp"
#include "extremal/json_io.hpp"
#include "extremal/legendre.hpp"
#include "extremal/radial.hpp"

using namespace extremal;

namespace {

int failures = 0;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

void report(int index, const char* title, bool ok, const std::string& detail, double elapsed) {
    std::printf("criterion %2d: %s  %s (%s) [%.2fs]\n", index, ok ? "PASS" : "FAIL", title,
                detail.c_str(), elapsed);
    if (!ok) ++failures;
}

void criterion(int index, const char* title, const std::function<std::pair<bool, std::string>()>& fn) {
    const double t0 = now_seconds();
    std::pair<bool, std::string> result;
    try {
        result = fn();
    } catch (const std::exception& e) {
        result = {false, std::string("exception: ") + e.what()};
    }
    report(index, title, result.first, result.second, now_seconds() - t0);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

int main() {
    criterion(1, "gauge extremizers attain the sharp constant", [] {
        const double limit_s = 30.0;
        const double t0 = now_seconds();
        double worst = 0.0;
        SplitMix64 rng(101);
        for (int n = 1; n <= 3; ++n) {
            const double cn = sharp_constant(n);
            for (int p = 0; p < 20; ++p) {
                Polytope P = random_polytope(n, rng);
                for (int k = 0; k < 5; ++k) {
                    const ApexKind kind = static_cast<ApexKind>(k % 3);
                    const Vec y = random_apex(P, rng, kind);
                    FunctionalReport rep = ratio_report(build_gauge_extremizer(P, y), P);
                    worst = std::max(worst, std::abs(rep.ratio - cn));
                }
            }
        }
        const double elapsed = now_seconds() - t0;
        const bool ok = worst <= 1e-6 && elapsed < limit_s;
        return std::make_pair(ok, "max |ratio - c_n| = " + fmt(worst) + ", 300 cases");
    });

    criterion(2, "random convex functions respect both bounds", [] {
        const double limit_s = 120.0;
        const double t0 = now_seconds();
        int violations = 0;
        double min_margin = kInf;
        for (int n = 1; n <= 3; ++n) {
            CampaignSummary s = run_verify_campaign(n, 1000, 20260000ULL + n, 1e-7);
            violations += s.violations;
            min_margin = std::min(min_margin, s.min_ratio - (sharp_constant(n) - 1e-7));
            min_margin = std::min(min_margin, (2.0 + 1e-7) - s.max_ratio);
        }
        const double elapsed = now_seconds() - t0;
        const bool ok = violations == 0 && min_margin >= 0.0 && elapsed < limit_s;
        return std::make_pair(ok, "violations = " + std::to_string(violations) + " of 3000, margin " +
                                      fmt(min_margin));
    });

    criterion(3, "worked extremizer values", [] {
        Polytope sq = make_unit_cube(2);
        ConvexFn phi2 = build_gauge_extremizer(sq, {0.5, 0.5});
        const double abs_mean = ratio_report(phi2, sq).abs_mean;
        const double sub0 = sublevel_volume(phi2, sq, 0.0);

        Polytope iv = make_interval(0.0, 1.0);
        ConvexFn phi1 = build_gauge_extremizer(iv, {0.0});
        const double mass1 = exact_abs_integral(phi1, iv);

        const bool ok = std::abs(abs_mean - 8.0 / 27.0) <= 1e-9 &&
                        std::abs(sub0 - 4.0 / 9.0) <= 1e-9 && std::abs(mass1 - 0.5) <= 1e-12;
        return std::make_pair(ok, "abs mean " + fmt(abs_mean) + ", sub-level " + fmt(sub0) +
                                      ", interval mass " + fmt(mass1));
    });

    criterion(4, "near-extremal interval family ratios", [] {
        Polytope iv = make_interval(0.0, 1.0);
        double worst = 0.0;
        for (double eps : {0.1, 0.01, 0.001}) {
            const double ratio = ratio_report(near_extremizer_family(iv, {0.0}, eps), iv).ratio;
            worst = std::max(worst, std::abs(ratio - (2.0 - 1.5 * eps)));
        }
        return std::make_pair(worst <= 1e-6,
                              "max deviation from 2 - 3eps/2 = " + fmt(worst) + ", supremum 2 unattained");
    });

    criterion(5, "apex recovery round-trips the construction", [] {
        SplitMix64 rng(505);
        double worst = 0.0;
        int cases = 0;
        for (int n = 1; n <= 3; ++n) {
            for (int rep = 0; rep < 12; ++rep) {
                Polytope P = random_polytope(n, rng);
                for (ApexKind kind : {ApexKind::interior, ApexKind::vertex, ApexKind::facet}) {
                    const Vec y = random_apex(P, rng, kind);
                    const Vec back = recover_apex(build_gauge_extremizer(P, y), P);
                    worst = std::max(worst, norm_inf(sub(back, y)));
                    ++cases;
                }
            }
        }
        return std::make_pair(worst <= 1e-6 && cases >= 100,
                              "max apex error = " + fmt(worst) + " over " + std::to_string(cases) +
                                  " cases");
    });

    criterion(6, "affine extremizer detection", [] {
        Polytope tri = make_standard_simplex(2);
        auto d = detect_affine_extremizer(tri);
        if (!d) return std::make_pair(false, std::string("simplex decomposition missing"));
        double worst = norm_inf(d->apex);
        ConvexFn gauge = build_gauge_extremizer(tri, d->apex);
        SplitMix64 rng(606);
        PolytopeSampler sample(tri);
        for (int i = 0; i < 1000; ++i) {
            const Vec x = sample(rng);
            worst = std::max(worst, std::abs(d->extremizer.at(x) - gauge(x)));
        }
        worst = std::max(worst, std::abs(d->extremizer.slope[0] - 1.5));
        worst = std::max(worst, std::abs(d->extremizer.slope[1] - 1.5));
        const bool square_none = !detect_affine_extremizer(make_unit_cube(2)).has_value();
        return std::make_pair(worst <= 1e-8 && square_none,
                              "simplex max deviation = " + fmt(worst) + ", square: none");
    });

    criterion(7, "radial ray constants", [] {
        const double limit_s = 1.0;
        const double t0 = now_seconds();
        double worst = 0.0;
        bool exact = true;
        for (int n = 1; n <= 6; ++n) {
            RadialRayModel m = RadialRayModel::canonical(n);
            exact = exact && radial_ma_energy(m) == 0.0;
            double num = 2.0, den = 1.0;
            for (int i = 0; i < n; ++i) num *= n;
            for (int i = 0; i < n + 1; ++i) den *= n + 1;
            worst = std::max(worst, std::abs(radial_d1(m) - num / den));
            worst = std::max(worst, std::abs(extremal_ratio(n) - den / num));
            worst = std::max(worst, std::abs(radial_d1_quadrature(m) - num / den));
            exact = exact && extremal_ratio(n) * sharp_constant(n) == 1.0;
        }
        const double elapsed = now_seconds() - t0;
        const bool ok = exact && worst <= 1e-12 && elapsed < limit_s;
        return std::make_pair(ok, std::string("I = 0 and ratio*c_n = 1 exactly: ") +
                                      (exact ? "yes" : "no") + ", max drift " + fmt(worst));
    });

    criterion(8, "rigidity accepts the power law only", [] {
        std::vector<double> grid;
        for (int i = 0; i < 64; ++i) grid.push_back(i / 64.0);
        bool ok = true;
        for (int n = 1; n <= 4; ++n) ok = ok && equality_rigidity_check(MassProfile::plurisupported(n), grid);
        MassProfile round{[](double s) { return 1.0 - s * s; }, 1, 1.0};
        MassProfile flat{[](double) { return 1.0; }, 2, 1.0};
        ok = ok && !equality_rigidity_check(round, grid) && !equality_rigidity_check(flat, grid);
        return std::make_pair(ok, std::string("power law in, parabola and constant out"));
    });

    criterion(9, "integration engines agree", [] {
        SplitMix64 rng(909);
        int checked = 0;
        bool ok = true;
        std::string detail;
        for (int n = 1; n <= 3 && ok; ++n) {
            for (int rep = 0; rep < 17 && checked < 50; ++rep) {
                Polytope P = random_polytope(n, rng);
                ConvexFn f = random_mean_zero_fn(P, rng);
                const double exact_signed = exact_integral(f, P);
                const double exact_abs = exact_abs_integral(f, P);
                IntegralEstimate br = integrate_bracketed(f, P, 1e-5);
                IntegralEstimate lc = layer_cake_abs(f, P);
                IntegralEstimate mc = monte_carlo_integral(f, P, 60000, rng.next_u64());
                IntegralEstimate mca = monte_carlo_integral(
                    [&](const Vec& x) { return std::abs(f(x)); }, P, 60000, rng.next_u64());
                const bool pair1 = br.lower <= mc.upper + 1e-9 && mc.lower <= br.upper + 1e-9;
                const bool pair2 = lc.lower <= mca.upper + 1e-7 && mca.lower <= lc.upper + 1e-7;
                const bool anchored = br.lower - 1e-9 <= exact_signed &&
                                      exact_signed <= br.upper + 1e-9 &&
                                      lc.lower - 1e-7 <= exact_abs && exact_abs <= lc.upper + 1e-7 &&
                                      mc.lower <= exact_signed && exact_signed <= mc.upper &&
                                      mca.lower <= exact_abs && exact_abs <= mca.upper;
                if (!(pair1 && pair2 && anchored)) {
                    ok = false;
                    detail = "disagreement at case " + std::to_string(checked);
                    break;
                }
                ++checked;
            }
        }
        if (ok) detail = std::to_string(checked) + " integrands, all engine pairs overlap";
        return std::make_pair(ok && checked >= 50, detail);
    });

    criterion(10, "discrete Legendre transform is involutive in the limit", [] {
        Box quad_box{{-3.0}, {3.0}};
        Box logi_box{{-4.0}, {4.0}};
        auto quad = [](const Vec& x) { return 0.5 * x[0] * x[0]; };
        auto logi = [](const Vec& x) {
            return std::log1p(std::exp(-std::abs(x[0]))) + std::max(x[0], 0.0);
        };
        bool monotone = true;
        double final_quad = 0.0, final_logi = 0.0;
        double prev_q = kInf, prev_l = kInf;
        for (int k = 6; k <= 10; ++k) {
            const double rq = involution_residual(quad, quad_box, 1 << k);
            const double rl = involution_residual(logi, logi_box, 1 << k);
            monotone = monotone && rq < prev_q && rl < prev_l;
            prev_q = rq;
            prev_l = rl;
            final_quad = rq;
            final_logi = rl;
        }
        const bool ok = monotone && final_quad < 1e-2 && final_logi < 1e-2;
        return std::make_pair(ok, "final residuals " + fmt(final_quad) + " and " + fmt(final_logi) +
                                      ", strictly decreasing over 2^6..2^10");
    });

    if (failures == 0) std::printf("all criteria passed\n");
    return failures;
}
