#include <catch2/catch_amalgamated.hpp>

#include "extremal/functionals.hpp"

using namespace extremal;

TEST_CASE("sharp constants for small dimensions") {
    CHECK(sharp_constant(1) == 0.5);
    CHECK(sharp_constant(2) == 8.0 / 27.0);
    CHECK(sharp_constant(3) == 27.0 / 128.0);
    CHECK(sharp_constant(6) == 2.0 * 46656.0 / 823543.0);
    CHECK_THROWS_AS(sharp_constant(0), Error);
}

TEST_CASE("infimum over the closure") {
    Polytope iv = make_interval(0.0, 1.0);
    ConvexFn line = ConvexFn::max_affine({AffinePiece{{2.0}, -1.0}});
    Infimum i1 = infimum_over_closure(line, iv);
    CHECK(i1.value == Catch::Approx(-1.0).margin(1e-12));
    CHECK(i1.argmin[0] == Catch::Approx(0.0).margin(1e-9));

    ConvexFn half = ConvexFn::max_affine({AffinePiece{{1.0}, -0.5}});
    Infimum i2 = infimum_over_closure(half, iv);
    CHECK(i2.value == Catch::Approx(-0.5).margin(1e-12));
    CHECK(i2.argmin[0] == Catch::Approx(0.0).margin(1e-9));

    // interior kink: |x - 0.3| has its minimum strictly inside
    ConvexFn vee = ConvexFn::max_affine({AffinePiece{{1.0}, -0.3}, AffinePiece{{-1.0}, 0.3}});
    Infimum i3 = infimum_over_closure(vee, iv);
    CHECK(i3.value == Catch::Approx(0.0).margin(1e-12));
    CHECK(i3.argmin[0] == Catch::Approx(0.3).margin(1e-9));

    Polytope sq = make_unit_cube(2);
    ConvexFn phi = ConvexFn::gauge_extremizer(sq, {0.3, 0.7});
    Infimum i4 = infimum_over_closure(phi, sq);
    CHECK(i4.value == -1.0);
    CHECK(i4.argmin == Vec{0.3, 0.7});

    // 2-D interior kink: max of four planes meeting above (0.25, 0.75)
    ConvexFn bowl = ConvexFn::max_affine({AffinePiece{{1.0, 0.0}, -0.25}, AffinePiece{{-1.0, 0.0}, 0.25},
                                          AffinePiece{{0.0, 1.0}, -0.75}, AffinePiece{{0.0, -1.0}, 0.75}});
    Infimum i5 = infimum_over_closure(bowl, sq);
    CHECK(i5.value == Catch::Approx(0.0).margin(1e-12));
    CHECK(i5.argmin[0] == Catch::Approx(0.25).margin(1e-9));
    CHECK(i5.argmin[1] == Catch::Approx(0.75).margin(1e-9));
}

TEST_CASE("subgradient descent confirms the enumerated minimum") {
    // independent certifier: projected subgradient with shrinking steps
    SplitMix64 rng(808);
    for (int n = 1; n <= 3; ++n) {
        for (int rep = 0; rep < 8; ++rep) {
            Polytope P = random_polytope(n, rng);
            ConvexFn f = random_mean_zero_fn(P, rng);
            const Infimum inf = infimum_over_closure(f, P);
            const double enumerated = inf.value;
            // achievability certificate: the reported value is attained at a
            // feasible point
            REQUIRE(P.contains(inf.argmin, 1e-7));
            REQUIRE(f(inf.argmin) == Catch::Approx(enumerated).margin(1e-9));
            const MaxAffine m = f.as_max_affine();
            double best = kInf;
            Vec best_x = P.interior_point();
            std::vector<Vec> starts = P.vertices();
            starts.push_back(P.interior_point());
            for (Vec x : starts) {
                double step = 0.5;
                for (int it = 0; it < 600; ++it) {
                    // subgradient = slope of an active piece
                    const AffinePiece* act = &m.pieces[0];
                    for (const AffinePiece& p : m.pieces)
                        if (p.at(x) > act->at(x)) act = &p;
                    Vec cand = x;
                    const double g = std::max(norm2(act->slope), 1e-12);
                    for (int c = 0; c < n; ++c) cand[c] -= step * act->slope[c] / g;
                    // stay feasible: back off toward the current point
                    for (int half = 0; half < 40 && !P.contains(cand, 1e-12); ++half)
                        for (int c = 0; c < n; ++c) cand[c] = 0.5 * (cand[c] + x[c]);
                    if (P.contains(cand, 1e-12) && f(cand) < f(x))
                        x = cand;
                    else
                        step *= 0.8;
                    if (f(x) < best) {
                        best = f(x);
                        best_x = x;
                    }
                }
            }
            // shrinking random polish around the incumbent; nonsmooth descent
            // alone stalls above kinks
            for (double radius = 0.5; radius > 1e-9; radius *= 0.5) {
                for (int s = 0; s < 60; ++s) {
                    Vec cand = best_x;
                    for (int c = 0; c < n; ++c) cand[c] += radius * rng.uniform(-1.0, 1.0);
                    if (!P.contains(cand, 1e-12)) continue;
                    const double v = f(cand);
                    if (v < best) {
                        best = v;
                        best_x = cand;
                    }
                }
            }
            CHECK(enumerated <= best + 1e-9);   // never beaten by the search
            CHECK(best <= enumerated + 0.05);   // and the search gets close
        }
    }
}

TEST_CASE("mean-zero normalization") {
    Polytope iv = make_interval(0.0, 1.0);
    ConvexFn f = ConvexFn::max_affine({AffinePiece{{1.0}, 0.0}});
    ConvexFn g = normalize_mean_zero(f, iv);
    CHECK(g({0.0}) == Catch::Approx(-0.5).margin(1e-12));
    CHECK(mean_value(g, iv) == Catch::Approx(0.0).margin(1e-7));

    // boundary spike: mean of max(0,(x-0.9)/0.1) is eps/2 = 0.05
    ConvexFn spike = ConvexFn::max_affine({AffinePiece{{0.0}, 0.0}, AffinePiece{{10.0}, -9.0}});
    ConvexFn spike0 = normalize_mean_zero(spike, iv);
    CHECK(spike0.shift() == Catch::Approx(-0.05).margin(1e-12));

    Polytope sq = make_unit_cube(2);
    ConvexFn phi = ConvexFn::gauge_extremizer(sq, {0.2, 0.9});
    CHECK(std::abs(normalize_mean_zero(phi, sq).shift()) < 1e-7);
}

TEST_CASE("ratio reports for the worked examples") {
    Polytope sq = make_unit_cube(2);
    FunctionalReport r1 = ratio_report(ConvexFn::gauge_extremizer(sq, {0.3, 0.7}), sq);
    CHECK(r1.ratio == Catch::Approx(8.0 / 27.0).margin(1e-9));
    CHECK(r1.verdict == Verdict::within_bounds);
    CHECK(r1.infimum == Catch::Approx(-1.0).margin(1e-12));

    Polytope iv = make_interval(0.0, 1.0);
    FunctionalReport r2 = ratio_report(ConvexFn::max_affine({AffinePiece{{1.0}, -0.5}}), iv);
    CHECK(r2.abs_mean == Catch::Approx(0.25).margin(1e-12));
    CHECK(r2.infimum == Catch::Approx(-0.5).margin(1e-12));
    CHECK(r2.ratio == Catch::Approx(0.5).margin(1e-12));  // the 1-D sharp constant

    ConvexFn ramp = ConvexFn::max_affine({AffinePiece{{0.0}, 0.0}, AffinePiece{{2.0}, -1.0}});
    FunctionalReport r3 = ratio_report(ramp, iv);
    CHECK(r3.abs_mean == Catch::Approx(9.0 / 32.0).margin(1e-12));
    CHECK(r3.infimum == Catch::Approx(-0.25).margin(1e-12));
    CHECK(r3.ratio == Catch::Approx(9.0 / 8.0).margin(1e-12));
    CHECK(r3.verdict == Verdict::within_bounds);

    FunctionalReport r4 = ratio_report(ConvexFn::constant(0.0, 1), iv);
    CHECK(r4.degenerate);
    CHECK(r4.verdict == Verdict::within_bounds);
}

TEST_CASE("ratio and argmin are scale invariant") {
    SplitMix64 rng(606);
    Polytope P = random_polytope(2, rng);
    ConvexFn f = random_mean_zero_fn(P, rng);
    FunctionalReport base = ratio_report(f, P);
    for (double r : {0.25, 2.0, 17.0}) {
        FunctionalReport scaled = ratio_report(f.scaled(r), P);
        CHECK(scaled.ratio == Catch::Approx(base.ratio).margin(1e-10));
        for (int c = 0; c < P.dim(); ++c)
            CHECK(scaled.argmin[c] == Catch::Approx(base.argmin[c]).margin(1e-8));
    }
}

TEST_CASE("negative-part mass bound") {
    // with inf normalized to -1, the average depth of the negative region is
    // at least 1/(n+1)
    SplitMix64 rng(717);
    for (int n = 1; n <= 3; ++n) {
        for (int rep = 0; rep < 12; ++rep) {
            Polytope P = random_polytope(n, rng);
            ConvexFn f = random_mean_zero_fn(P, rng);
            const double inf = infimum_over_closure(f, P).value;
            ConvexFn unit = f.scaled(1.0 / -inf);
            NegativePart np = negative_part(unit, P);
            REQUIRE(np.volume > 0.0);
            CHECK(np.abs_integral / np.volume >= 1.0 / (n + 1) - 1e-9);
        }
    }
}

TEST_CASE("inequality campaign stays within bounds") {
    for (int n = 1; n <= 2; ++n) {
        CampaignSummary s = run_verify_campaign(n, 150, 12345);
        CHECK(s.violations == 0);
        CHECK(s.min_ratio >= sharp_constant(n) - 1e-7);
        CHECK(s.max_ratio <= 2.0 + 1e-7);
    }
}

TEST_CASE("campaigns reproduce bit-for-bit and are thread-invariant") {
    CampaignSummary a = run_verify_campaign(2, 60, 99, kRatioTol, 1);
    CampaignSummary b = run_verify_campaign(2, 60, 99, kRatioTol, 1);
    CampaignSummary c = run_verify_campaign(2, 60, 99, kRatioTol, 4);
    REQUIRE(a.reports.size() == b.reports.size());
    for (std::size_t i = 0; i < a.reports.size(); ++i) {
        CHECK(a.reports[i].ratio == b.reports[i].ratio);
        CHECK(a.reports[i].ratio == c.reports[i].ratio);
        CHECK(a.reports[i].infimum == c.reports[i].infimum);
    }
    CHECK(a.min_ratio == c.min_ratio);
    CHECK(a.max_ratio == c.max_ratio);
}
