#include "conjphase/io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace conjphase::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) fail("expected a JSON object");
    const auto it = j.find(key);
    if (it == j.end()) fail(std::string("missing field \"") + key + "\"");
    return *it;
}

double number(const Json& j, const char* what) {
    if (!j.is_number()) fail(std::string(what) + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(std::string(what) + " must be finite");
    return v;
}

Index integer(const Json& j, const char* what) {
    if (j.is_number_integer()) return j.get<Index>();
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        std::size_t used = 0;
        try {
            const long long v = std::stoll(s, &used);
            if (used == s.size()) return static_cast<Index>(v);
        } catch (const std::exception&) {
        }
    }
    fail(std::string(what) + " must be an integer");
}

Index optional_offset(const Json& j) {
    const auto it = j.find("index_offset");
    return it == j.end() ? 0 : integer(*it, "index_offset");
}

/// Library validation errors raised while building parsed objects are still
/// malformed input from the caller's point of view.
template <typename F>
auto guarded(F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidArgument) fail(e.what());
        throw;
    } catch (const nlohmann::json::exception& e) {
        fail(e.what());
    }
}

Json branch_json(const EquivalenceBranch& b) {
    return {{"kind", b.kind == BranchKind::Identity ? "identity" : "conjugation"}, {"phase", b.phase}};
}

}  // namespace

const ComplexVector& coefficients(const Signal& s) {
    return std::visit([](const auto& v) -> const ComplexVector& { return v.coeffs; }, s);
}

ComplexVector& coefficients(Signal& s) {
    return std::visit([](auto& v) -> ComplexVector& { return v.coeffs; }, s);
}

std::string kind_name(const Signal& s) {
    switch (s.index()) {
        case 1: return "pw";
        case 2: return "si";
        default: return "vector";
    }
}

Json to_json(const ComplexVector& v) {
    Json out = Json::array();
    for (Index n = v.lo(); n < v.hi(); ++n) out.push_back({v[n].real(), v[n].imag()});
    return out;
}

Json to_json(const RealVector& v) {
    Json out = Json::array();
    for (Index n = v.lo(); n < v.hi(); ++n) out.push_back(v[n]);
    return out;
}

Json to_json(const Generator& g) {
    return std::visit(
        [](const auto& v) -> Json {
            using G = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<G, HatShifted>) {
                return "hat";
            } else if constexpr (std::is_same_v<G, BSpline>) {
                return {{"bspline", v.degree}};
            } else {
                return {{"tabulated", {{"start", v.start}, {"step", v.step}, {"values", v.values}}}};
            }
        },
        g);
}

Json to_json(const Signal& s) {
    Json out;
    out["kind"] = kind_name(s);
    if (const auto* pw = std::get_if<PWSignal>(&s)) {
        out["B"] = pw->bandwidth;
        out["x0"] = pw->x0;
    } else if (const auto* si = std::get_if<SISignal>(&s)) {
        out["generator"] = to_json(si->generator);
    }
    const ComplexVector& c = coefficients(s);
    out["index_offset"] = c.lo();
    out["coeffs"] = to_json(c);
    return out;
}

Json to_json(const Window& w) {
    return {{"coeffs", to_json(w.coeffs)}, {"index_offset", w.coeffs.lo()}, {"B", w.bandwidth}};
}

Json to_json(const SimpleGraph& g) {
    Json edges = Json::array();
    for (const Edge& e : g.edges()) edges.push_back({e.first, e.second});
    return {{"vertices", g.vertices()}, {"edges", edges}};
}

Json to_json(const MeasurementSet& m) {
    Json vertices = Json::object();
    for (const auto& [v, a] : m.vertex_mags) vertices[std::to_string(v)] = a;
    Json edges = Json::array();
    for (const auto& [e, d] : m.edge_mags) edges.push_back({std::to_string(e.first), std::to_string(e.second), d});
    return {{"vertices", vertices}, {"edges", edges}};
}

Json to_json(const Domain& d) {
    return std::visit(
        [](const auto& v) -> Json {
            using D = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<D, VectorDomain>) {
                return {{"kind", "vector"}};
            } else if constexpr (std::is_same_v<D, PWDomain>) {
                return {{"kind", "pw"}, {"B", v.bandwidth}, {"x0", v.x0}};
            } else if constexpr (std::is_same_v<D, SIDomain>) {
                return {{"kind", "si"},
                        {"generator", to_json(v.generator)},
                        {"points", v.points.points()},
                        {"coeff_range", {v.coeff_lo, v.coeff_hi}}};
            } else {
                return {{"kind", "stft"}, {"window", to_json(v.window)}, {"x0", v.x0}};
            }
        },
        d);
}

Json to_json(const SamplesFile& s) {
    Json out;
    const Scheme& sc = s.samples.scheme;
    if (sc.kind == SchemeKind::Adjacent12)
        out["scheme"] = "adjacent12";
    else
        out["scheme"] = {{"two_reference", {sc.ref_k, sc.ref_l}}};
    out["index_offset"] = s.samples.lo();
    out["abs"] = to_json(s.samples.abs);
    out["rel1"] = to_json(s.samples.rel1);
    out["rel2"] = to_json(s.samples.rel2);
    out["domain"] = to_json(s.domain);
    return out;
}

Json to_json(const RecoveryReport& r) {
    Json out;
    out["branch"] = branch_json(r.branch);
    out["residual"] = r.residual;
    out["min_determinant"] = std::isfinite(r.min_determinant) ? Json(r.min_determinant) : Json(nullptr);
    out["max_revisit_discrepancy"] = r.max_revisit_discrepancy;
    out["seed"] = r.seed ? Json{r.seed->first, r.seed->second} : Json(nullptr);
    out["bfs_order"] = r.order;
    out["notes"] = r.notes;
    return out;
}

ComplexVector complex_vector_from_json(const Json& j, Index index_offset) {
    if (!j.is_array()) fail("coefficients must be an array");
    Eigen::VectorXcd v(static_cast<Index>(j.size()));
    Index i = 0;
    for (const Json& e : j) {
        if (e.is_number()) {
            v[i++] = Complex(number(e, "coefficient"), 0.0);
        } else if (e.is_array() && e.size() == 2) {
            v[i++] = Complex(number(e[0], "real part"), number(e[1], "imaginary part"));
        } else {
            fail("complex coefficient must be [re, im] or a number");
        }
    }
    return ComplexVector(index_offset, std::move(v));
}

RealVector real_vector_from_json(const Json& j, Index index_offset) {
    if (!j.is_array()) fail("expected an array of numbers");
    Eigen::VectorXd v(static_cast<Index>(j.size()));
    Index i = 0;
    for (const Json& e : j) v[i++] = number(e, "value");
    return RealVector(index_offset, std::move(v));
}

Generator generator_from_json(const Json& j) {
    if (j.is_string()) {
        if (j.get_ref<const std::string&>() == "hat") return HatShifted{};
        fail("unknown generator \"" + j.get<std::string>() + "\"");
    }
    if (j.is_object() && j.contains("bspline")) {
        const Index m = integer(j["bspline"], "bspline degree");
        if (m < 1) fail("bspline degree must be at least 1");
        return BSpline{static_cast<int>(m)};
    }
    if (j.is_object() && j.contains("tabulated")) {
        const Json& t = j["tabulated"];
        TabulatedGenerator g;
        g.start = number(field(t, "start"), "start");
        g.step = number(field(t, "step"), "step");
        if (!(g.step > 0.0)) fail("tabulated step must be positive");
        const RealVector vals = real_vector_from_json(field(t, "values"));
        g.values.assign(vals.values().data(), vals.values().data() + vals.size());
        return g;
    }
    fail("generator must be \"hat\", {\"bspline\":m} or {\"tabulated\":{...}}");
}

Signal signal_from_json(const Json& j) {
    return guarded([&]() -> Signal {
        const Json& kind = field(j, "kind");
        if (!kind.is_string()) fail("\"kind\" must be a string");
        const auto& k = kind.get_ref<const std::string&>();
        ComplexVector c = complex_vector_from_json(field(j, "coeffs"), optional_offset(j));
        if (k == "vector") return VectorSignal{std::move(c)};
        if (k == "pw")
            return make_pw_signal(number(field(j, "B"), "B"), j.contains("x0") ? number(j["x0"], "x0") : 0.0,
                                  std::move(c));
        if (k == "si") return SISignal{generator_from_json(field(j, "generator")), std::move(c)};
        fail("unknown signal kind \"" + k + "\"");
    });
}

Window window_from_json(const Json& j) {
    return guarded([&] {
        return make_window(real_vector_from_json(field(j, "coeffs"), optional_offset(j)), number(field(j, "B"), "B"));
    });
}

SimpleGraph graph_from_json(const Json& j) {
    return guarded([&] {
        std::vector<Index> vertices;
        for (const Json& v : field(j, "vertices")) vertices.push_back(integer(v, "vertex id"));
        std::vector<Edge> edges;
        for (const Json& e : field(j, "edges")) {
            if (!e.is_array() || e.size() != 2) fail("edge must be [a, b]");
            const Index a = integer(e[0], "edge endpoint");
            const Index b = integer(e[1], "edge endpoint");
            if (a == b) fail("self-loop in graph");
            edges.emplace_back(a, b);
        }
        return SimpleGraph(std::move(vertices), edges);
    });
}

MeasurementSet measurement_set_from_json(const Json& j) {
    return guarded([&] {
        MeasurementSet m;
        const Json& vertices = field(j, "vertices");
        if (!vertices.is_object()) fail("\"vertices\" must map ids to magnitudes");
        for (const auto& [id, mag] : vertices.items())
            m.vertex_mags[integer(Json(id), "vertex id")] = number(mag, "vertex magnitude");
        for (const Json& e : field(j, "edges")) {
            if (!e.is_array() || e.size() != 3) fail("edge entry must be [a, b, magnitude]");
            const Index a = integer(e[0], "edge endpoint");
            const Index b = integer(e[1], "edge endpoint");
            if (a == b) fail("self-loop in measurement set");
            m.edge_mags[Edge(a, b)] = number(e[2], "edge magnitude");
        }
        return m;
    });
}

Domain domain_from_json(const Json& j) {
    return guarded([&]() -> Domain {
        const Json& kind = field(j, "kind");
        if (!kind.is_string()) fail("domain \"kind\" must be a string");
        const auto& k = kind.get_ref<const std::string&>();
        if (k == "vector") return VectorDomain{};
        if (k == "pw") {
            const double b = number(field(j, "B"), "B");
            if (!(b > 0.0)) fail("B must be positive");
            return PWDomain{b, number(field(j, "x0"), "x0")};
        }
        if (k == "si") {
            SIDomain d;
            d.generator = generator_from_json(field(j, "generator"));
            std::vector<double> pts;
            for (const Json& p : field(j, "points")) pts.push_back(number(p, "sample point"));
            d.points = SamplingSet(std::move(pts));
            const Json& range = field(j, "coeff_range");
            if (!range.is_array() || range.size() != 2) fail("coeff_range must be [lo, hi]");
            d.coeff_lo = integer(range[0], "coeff_range");
            d.coeff_hi = integer(range[1], "coeff_range");
            return d;
        }
        if (k == "stft") return StftDomain{window_from_json(field(j, "window")), number(field(j, "x0"), "x0")};
        fail("unknown domain kind \"" + k + "\"");
    });
}

SamplesFile samples_from_json(const Json& j) {
    return guarded([&] {
        SamplesFile out;
        const Json& scheme = field(j, "scheme");
        if (scheme.is_string() && scheme.get_ref<const std::string&>() == "adjacent12") {
            out.samples.scheme = Scheme::adjacent12();
        } else if (scheme.is_object() && scheme.contains("two_reference")) {
            const Json& r = scheme["two_reference"];
            if (!r.is_array() || r.size() != 2) fail("two_reference must be [k, l]");
            out.samples.scheme = Scheme::two_reference(integer(r[0], "reference"), integer(r[1], "reference"));
        } else {
            fail("scheme must be \"adjacent12\" or {\"two_reference\":[k,l]}");
        }
        const Index off = optional_offset(j);
        out.samples.abs = real_vector_from_json(field(j, "abs"), off);
        out.samples.rel1 = real_vector_from_json(field(j, "rel1"), off);
        out.samples.rel2 = real_vector_from_json(field(j, "rel2"), off);
        out.domain = j.contains("domain") ? domain_from_json(j["domain"]) : Domain{VectorDomain{}};
        return out;
    });
}

bool is_measurement_set(const Json& j) {
    return j.is_object() && j.contains("vertices") && j["vertices"].is_object() && !j.contains("scheme");
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(e.what());
    }
}

Json read_json(const std::filesystem::path& path) {
    std::ostringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) fail("cannot open " + path.string());
        buf << in.rdbuf();
    }
    return parse_json(buf.str());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_json(const std::filesystem::path& path, const Json& j) {
    if (path == "-") {
        std::cout << dump(j);
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
    out << dump(j);
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    char buf[40];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            os << (i ? "," : "") << buf;
        }
        os << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
    write_csv(out, header, rows);
}

}  // namespace conjphase::io
