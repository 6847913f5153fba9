#ifndef EXTREMAL_JSON_IO_HPP
#define EXTREMAL_JSON_IO_HPP

#include <charconv>
#include <fstream>
#include <json.hpp>

#include "extremal/extremizers.hpp"
#include "extremal/radial.hpp"
#include "extremal/toric.hpp"

namespace extremal {

// ---------------------------------------------------------------------------
// Input parsing (nlohmann). The vendor parser reads decimal literals
// independently of the process locale.

inline Polytope polytope_from_json(const nlohmann::json& j) {
    if (!j.contains("dim") || !j.contains("halfspaces")) throw Error("polytope JSON needs dim and halfspaces");
    const int dim = j.at("dim").get<int>();
    std::vector<Halfspace> hs;
    for (const auto& h : j.at("halfspaces")) {
        Halfspace half;
        half.normal = h.at("normal").get<std::vector<double>>();
        half.offset = h.at("offset").get<double>();
        hs.push_back(std::move(half));
    }
    return Polytope::from_halfspaces(std::move(hs), dim);
}

inline Polytope load_polytope(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open polytope file: " + path);
    nlohmann::json j;
    in >> j;
    return polytope_from_json(j);
}

inline ConvexFn convex_fn_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    ConvexFn f = [&]() -> ConvexFn {
        if (type == "max_affine") {
            std::vector<AffinePiece> pieces;
            for (const auto& p : j.at("pieces"))
                pieces.push_back({p.at("slope").get<std::vector<double>>(), p.at("intercept").get<double>()});
            return ConvexFn::max_affine(std::move(pieces));
        }
        if (type == "gauge_extremizer") {
            Polytope P = polytope_from_json(j.at("polytope"));
            return ConvexFn::gauge_extremizer(P, j.at("apex").get<std::vector<double>>());
        }
        if (type == "gauge_collar") {
            Polytope P = polytope_from_json(j.at("polytope"));
            return ConvexFn::gauge_collar(P, j.at("apex").get<std::vector<double>>(),
                                          j.at("width").get<double>());
        }
        throw Error("unknown convex function type: " + type);
    }();
    if (j.contains("shift")) f = f.shifted(j.at("shift").get<double>());
    return f;
}

inline ConvexFn load_convex_fn(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open function file: " + path);
    nlohmann::json j;
    in >> j;
    return convex_fn_from_json(j);
}

inline ToricPotentialPair toric_pair_from_json(const nlohmann::json& j) {
    Polytope P = polytope_from_json(j.at("polytope"));
    ConvexFn ref = j.contains("phi_ref") ? convex_fn_from_json(j.at("phi_ref"))
                                         : ConvexFn::constant(0.0, P.dim());
    ConvexFn u = convex_fn_from_json(j.at("phi_u"));
    return {std::move(P), std::move(ref), std::move(u)};
}

inline ToricPotentialPair load_toric_pair(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open pair file: " + path);
    nlohmann::json j;
    in >> j;
    return toric_pair_from_json(j);
}

// ---------------------------------------------------------------------------
// Output writer. Reports must serialize byte-identically for identical
// inputs, with floats carrying 17 significant digits, so numbers go through
// std::to_chars (locale-independent) and key order is fixed by construction.

class JsonWriter {
public:
    std::string take() { return std::move(out_); }

    JsonWriter& begin_object() { return raw("{"); }
    JsonWriter& end_object() { return raw("}"); }
    JsonWriter& begin_array() { return raw("["); }
    JsonWriter& end_array() { return raw("]"); }
    JsonWriter& comma() { return raw(","); }

    JsonWriter& key(const std::string& k) {
        string_value(k);
        return raw(":");
    }

    JsonWriter& value(double v) {
        char buf[40];
        auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
        out_.append(buf, r.ptr);
        return *this;
    }

    JsonWriter& value(long long v) {
        char buf[24];
        auto r = std::to_chars(buf, buf + sizeof(buf), v);
        out_.append(buf, r.ptr);
        return *this;
    }

    JsonWriter& value(std::uint64_t v) {
        char buf[24];
        auto r = std::to_chars(buf, buf + sizeof(buf), v);
        out_.append(buf, r.ptr);
        return *this;
    }

    JsonWriter& value(bool v) { return raw(v ? "true" : "false"); }
    JsonWriter& value(const std::string& v) {
        string_value(v);
        return *this;
    }

    JsonWriter& value(const Vec& v) {
        begin_array();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) comma();
            value(v[i]);
        }
        return end_array();
    }

    template <typename T>
    JsonWriter& field(const std::string& k, const T& v, bool leading_comma = true) {
        if (leading_comma) comma();
        key(k);
        return value(v);
    }

private:
    JsonWriter& raw(const char* s) {
        out_ += s;
        return *this;
    }

    void string_value(const std::string& s) {
        out_ += '"';
        for (char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\t': out_ += "\\t"; break;
                default: out_ += c;
            }
        }
        out_ += '"';
    }

    std::string out_;
};

inline std::string to_json(const IntegralEstimate& e) {
    JsonWriter w;
    w.begin_object();
    w.key("value").value(e.value);
    w.field("lower", e.lower);
    w.field("upper", e.upper);
    w.field("method", std::string(method_name(e.method)));
    w.field("work", static_cast<std::uint64_t>(e.work));
    w.end_object();
    return w.take();
}

inline void report_body(JsonWriter& w, const FunctionalReport& r) {
    w.key("infimum").value(r.infimum);
    w.field("argmin", r.argmin);
    w.field("mean_residual", r.mean_residual);
    w.field("abs_mean", r.abs_mean);
    w.field("ratio", r.ratio);
    w.field("sharp_lower", r.sharp_lower);
    w.field("upper", r.upper);
    w.field("verdict", std::string(verdict_name(r.verdict)));
    w.field("degenerate", r.degenerate);
}

inline std::string to_json(const FunctionalReport& r) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(std::string("1"));
    w.comma();
    report_body(w, r);
    w.end_object();
    return w.take();
}

inline std::string to_json(const CampaignSummary& s, bool include_reports = false) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(std::string("1"));
    w.field("trials", static_cast<long long>(s.trials));
    w.field("violations", static_cast<long long>(s.violations));
    w.field("min_ratio", s.min_ratio);
    w.field("max_ratio", s.max_ratio);
    w.field("c_n", s.c_n);
    if (include_reports) {
        w.comma().key("reports").begin_array();
        for (std::size_t i = 0; i < s.reports.size(); ++i) {
            if (i) w.comma();
            w.begin_object();
            report_body(w, s.reports[i]);
            w.end_object();
        }
        w.end_array();
    }
    w.end_object();
    return w.take();
}

inline void decomposition_body(JsonWriter& w, const ConeHalfspaceDecomposition& d) {
    w.key("apex").value(d.apex);
    w.field("halfspace_normal", d.halfspace_normal);
    w.field("halfspace_offset", d.halfspace_offset);
    w.comma().key("defining_function").begin_object();
    w.key("slope").value(d.defining_function.slope);
    w.field("intercept", d.defining_function.intercept);
    w.end_object();
    w.comma().key("extremizer").begin_object();
    w.key("slope").value(d.extremizer.slope);
    w.field("intercept", d.extremizer.intercept);
    w.end_object();
    w.comma().key("apex_candidates").begin_array();
    for (std::size_t i = 0; i < d.apex_candidates.size(); ++i) {
        if (i) w.comma();
        w.value(d.apex_candidates[i]);
    }
    w.end_array();
}

inline std::string to_json(const ConeHalfspaceDecomposition& d) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(std::string("1"));
    w.comma();
    decomposition_body(w, d);
    w.end_object();
    return w.take();
}

inline std::string to_json(const ExtremizerCertificate& c,
                           const std::optional<ConeHalfspaceDecomposition>& affine = std::nullopt) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(std::string("1"));
    w.field("apex", c.apex);
    w.comma().key("homothety_residuals").begin_array();
    for (std::size_t i = 0; i < c.homothety_residuals.size(); ++i) {
        if (i) w.comma();
        const LevelResidual& r = c.homothety_residuals[i];
        w.begin_object();
        w.key("level").value(r.level);
        w.field("sym_diff_volume", r.sym_diff_volume);
        w.field("exact", r.exact);
        w.end_object();
    }
    w.end_array();
    w.field("inf", c.inf_value);
    w.field("sup", c.sup_value);
    w.field("mean_residual", c.mean_residual);
    w.field("ratio_gap", c.ratio_gap);
    w.field("tolerance", c.tolerance);
    w.field("valid", c.valid);
    if (affine) {
        w.comma().key("affine_decomposition").begin_object();
        decomposition_body(w, *affine);
        w.end_object();
    }
    w.end_object();
    return w.take();
}

inline std::string to_json(const RadialReport& r) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value(std::string("1"));
    w.field("n", static_cast<long long>(r.n));
    w.field("a", r.a);
    w.field("b", r.b);
    w.field("I", r.I);
    w.field("J", r.J);
    w.field("d1", r.d1);
    w.field("ratio", r.ratio);
    w.field("rigidity", r.rigidity);
    w.end_object();
    return w.take();
}

inline std::string to_json(const Polytope& P) {
    JsonWriter w;
    w.begin_object();
    w.key("dim").value(static_cast<long long>(P.dim()));
    w.comma().key("halfspaces").begin_array();
    for (std::size_t i = 0; i < P.halfspaces().size(); ++i) {
        if (i) w.comma();
        w.begin_object();
        w.key("normal").value(P.halfspaces()[i].normal);
        w.field("offset", P.halfspaces()[i].offset);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.take();
}

inline std::string to_json(const ConvexFn& f) {
    JsonWriter w;
    w.begin_object();
    std::visit(
        [&](const auto& core) {
            using T = std::decay_t<decltype(core)>;
            if constexpr (std::is_same_v<T, MaxAffine>) {
                w.key("type").value(std::string("max_affine"));
                w.comma().key("pieces").begin_array();
                for (std::size_t i = 0; i < core.pieces.size(); ++i) {
                    if (i) w.comma();
                    w.begin_object();
                    w.key("slope").value(core.pieces[i].slope);
                    w.field("intercept", core.pieces[i].intercept);
                    w.end_object();
                }
                w.end_array();
            } else if constexpr (std::is_same_v<T, GaugeExtremizer> || std::is_same_v<T, GaugeCollar>) {
                const bool collar = std::is_same_v<T, GaugeCollar>;
                w.key("type").value(std::string(collar ? "gauge_collar" : "gauge_extremizer"));
                w.comma().key("polytope").begin_object();
                w.key("dim").value(static_cast<long long>(core.domain->dim()));
                w.comma().key("halfspaces").begin_array();
                const auto& hs = core.domain->halfspaces();
                for (std::size_t i = 0; i < hs.size(); ++i) {
                    if (i) w.comma();
                    w.begin_object();
                    w.key("normal").value(hs[i].normal);
                    w.field("offset", hs[i].offset);
                    w.end_object();
                }
                w.end_array();
                w.end_object();
                w.field("apex", core.apex);
                if constexpr (std::is_same_v<T, GaugeCollar>) w.field("width", core.width);
            } else {
                throw UnsupportedVariant("grid functions have no JSON form");
            }
        },
        f.core());
    if (f.shift() != 0.0) w.field("shift", f.shift());
    w.end_object();
    return w.take();
}

}  // namespace extremal

#endif  // EXTREMAL_JSON_IO_HPP
