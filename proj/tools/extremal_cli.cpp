// Command-line driver: load polytopes and convex functions, verify the sharp
// two-sided bound on random instances, construct and certify extremizers,
// detect affine extremizers, and evaluate the radial-ray constants.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "extremal/json_io.hpp"

using namespace extremal;

namespace {

int thread_count() {
    if (const char* env = std::getenv("EXTREMAL_LAB_THREADS")) {
        const int t = std::atoi(env);
        if (t >= 1) return t;
    }
    return 1;
}

Vec parse_apex(const std::string& text) {
    Vec apex;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        apex.push_back(std::stod(text.substr(pos, next - pos)));
        pos = next + 1;
    }
    if (apex.empty()) throw Error("empty apex");
    return apex;
}

void emit(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload << "\n";
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write " + out_path);
    out << payload << "\n";
}

std::string format_double(double v) {
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"extremal-lab: extremizers of the sharp mass-to-depth bound on convex polytopes"};
    app.require_subcommand(1);

    std::string polytope_path, phi_path, pair_path, out_path, csv_path, apex_text;
    int dim = 2;
    int trials = 100;
    std::uint64_t seed = 0;
    double tol = 1e-7;
    double epsilon = 0.1;
    double ray_a = 0.0, ray_b = 1.0;
    bool ray_custom_a = false, ray_custom_b = false;
    bool include_reports = false;

    auto* verify = app.add_subcommand("verify", "random-instance campaign for the two-sided bound");
    verify->add_option("--dim", dim, "ambient dimension (1-3)");
    verify->add_option("--trials", trials, "number of random instances");
    verify->add_option("--seed", seed, "master seed");
    verify->add_option("--tol", tol, "verdict tolerance");
    verify->add_flag("--reports", include_reports, "include per-trial reports");
    verify->add_option("--out", out_path, "output JSON path (default stdout)");

    auto* extremize = app.add_subcommand("extremize", "build and certify the extremizer for an apex");
    extremize->add_option("--polytope", polytope_path, "polytope JSON file")->required();
    extremize->add_option("--apex", apex_text, "apex coordinates x,y,...")->required();
    extremize->add_option("--tol", tol, "certificate tolerance")->default_val(1e-6);
    extremize->add_option("--out", out_path, "certificate JSON path");
    extremize->add_option("--csv", csv_path, "sub-level profile CSV path");

    auto* certify = app.add_subcommand("certify", "certify a user-supplied convex function");
    certify->add_option("--polytope", polytope_path, "polytope JSON file")->required();
    certify->add_option("--phi", phi_path, "convex function JSON file")->required();
    certify->add_option("--tol", tol, "certificate tolerance")->default_val(1e-3);
    certify->add_option("--out", out_path, "certificate JSON path");

    auto* detect = app.add_subcommand("detect-affine", "cone-cap decomposition when one exists");
    detect->add_option("--polytope", polytope_path, "polytope JSON file")->required();
    detect->add_option("--out", out_path, "output JSON path");

    auto* near = app.add_subcommand("near-extremal", "boundary collar family for the upper constant");
    near->add_option("--polytope", polytope_path, "polytope JSON file")->required();
    near->add_option("--apex", apex_text, "apex coordinates x,y,...")->required();
    near->add_option("--epsilon", epsilon, "sharpness parameter in (0, 1]")->required();
    near->add_option("--out", out_path, "output JSON path");

    auto* toric = app.add_subcommand("toric", "transform-side distance and energies of a pair");
    toric->add_option("--pair", pair_path, "potential pair JSON file")->required();
    toric->add_option("--out", out_path, "output JSON path");

    auto* radial = app.add_subcommand("radial", "model-ray energies and the sharp ratio");
    radial->add_option("--dim", dim, "complex dimension n >= 1");
    radial->add_option("--a", ray_a, "left slope endpoint");
    radial->add_option("--b", ray_b, "right slope endpoint");
    radial->add_option("--out", out_path, "output JSON path");

    CLI11_PARSE(app, argc, argv);
    ray_custom_a = radial->count("--a") > 0;
    ray_custom_b = radial->count("--b") > 0;

    try {
        if (verify->parsed()) {
            CampaignSummary s = run_verify_campaign(dim, trials, seed, tol, thread_count());
            emit(to_json(s, include_reports), out_path);
            return s.violations == 0 ? 0 : 2;
        }

        if (extremize->parsed()) {
            Polytope P = load_polytope(polytope_path);
            const Vec apex = parse_apex(apex_text);
            ConvexFn phi = build_gauge_extremizer(P, apex);
            std::vector<double> levels;
            const int n = P.dim();
            for (int i = 1; i < 16; ++i) levels.push_back(-1.0 + (1.0 + 1.0 / n) * i / 16.0);
            CertifyOptions opt;
            opt.tolerance = tol;
            opt.seed = seed;
            ExtremizerCertificate cert = certify_extremizer(phi, P, levels, opt);
            emit(to_json(cert, detect_affine_extremizer(P)), out_path);
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path, std::ios::binary);
                if (!csv) throw Error("cannot write " + csv_path);
                csv << "level,sublevel_volume_fraction,dilation_prediction\n";
                for (int i = 1; i < 64; ++i) {
                    const double a = -1.0 + (1.0 + 1.0 / n) * i / 64.0;
                    const double frac = sublevel_volume(phi, P, a) / P.volume();
                    const double predicted = std::pow(n * (a + 1.0) / (n + 1.0), n);
                    csv << format_double(a) << "," << format_double(frac) << ","
                        << format_double(predicted) << "\n";
                }
            }
            return cert.valid ? 0 : 2;
        }

        if (certify->parsed()) {
            Polytope P = load_polytope(polytope_path);
            ConvexFn phi = load_convex_fn(phi_path);
            std::vector<double> levels;
            const int n = P.dim();
            for (int i = 1; i < 12; ++i) levels.push_back(-1.0 + (1.0 + 1.0 / n) * i / 12.0);
            CertifyOptions opt;
            opt.tolerance = tol;
            opt.seed = seed;
            ExtremizerCertificate cert = certify_extremizer(phi, P, levels, opt);
            emit(to_json(cert), out_path);
            return cert.valid ? 0 : 2;
        }

        if (detect->parsed()) {
            Polytope P = load_polytope(polytope_path);
            auto d = detect_affine_extremizer(P);
            if (d) {
                emit(to_json(*d), out_path);
            } else {
                emit(R"({"schema":"1","found":false})", out_path);
            }
            return 0;
        }

        if (near->parsed()) {
            Polytope P = load_polytope(polytope_path);
            const Vec apex = parse_apex(apex_text);
            ConvexFn f = near_extremizer_family(P, apex, epsilon);
            FunctionalReport rep = ratio_report(f, P);
            JsonWriter w;
            w.begin_object();
            w.key("schema").value(std::string("1"));
            w.field("epsilon", epsilon);
            w.field("collar_width", collar_width_for(epsilon));
            w.field("flat_volume_fraction",
                    std::pow(1.0 - collar_width_for(epsilon), P.dim()));
            w.comma();
            report_body(w, rep);
            w.end_object();
            emit(w.take(), out_path);
            return 0;
        }

        if (toric->parsed()) {
            ToricPotentialPair pair = load_toric_pair(pair_path);
            JsonWriter w;
            w.begin_object();
            w.key("schema").value(std::string("1"));
            w.field("volume", toric_volume(pair.P));
            w.field("d1", d1_toric(pair.phi_ref, pair.phi_u, pair.P));
            const double I = ma_energy_toric(pair.phi_u, pair.phi_ref, pair.P);
            w.field("I", I);
            if (std::abs(ma_energy_toric(pair.phi_u, ConvexFn::constant(0.0, pair.P.dim()), pair.P)) <
                1e-7) {
                JMagnitude j = j_magnitude_bounds(pair.phi_u, pair.P);
                w.field("J_center", j.center);
                w.field("J_note", j.note);
            }
            w.end_object();
            emit(w.take(), out_path);
            return 0;
        }

        if (radial->parsed()) {
            RadialRayModel m = (ray_custom_a || ray_custom_b)
                                   ? RadialRayModel::make(ray_a, ray_b, dim)
                                   : RadialRayModel::canonical(dim);
            RadialReport r = radial_report(m);
            if (m.is_canonical() && r.ratio * sharp_constant(dim) != 1.0)
                throw Error("canonical ratio check failed");
            emit(to_json(r), out_path);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
