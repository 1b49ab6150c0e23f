#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "conjphase/graphcpr.hpp"

namespace conjphase::cli {

namespace fs = std::filesystem;
using io::Json;

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::HypothesisFailed:
        case ErrorKind::ReferenceCollinear:
        case ErrorKind::AdjacentCollinear:
        case ErrorKind::ZeroSample:
            return kHypothesis;
        case ErrorKind::InfeasibleMagnitudes:
        case ErrorKind::InconsistentMeasurements:
            return kInfeasible;
        case ErrorKind::NumericallySingular:
        case ErrorKind::IllConditionedWindow:
            return kSingular;
        default:
            return kParse;
    }
}

double default_tolerance() {
    const char* env = std::getenv("CONJPHASE_TOL");
    if (!env || !*env) return kDefaultTolerance;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
        throw Error(ErrorKind::ParseError, std::string("CONJPHASE_TOL is not a positive number: ") + env);
    return v;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

constexpr double kGenericMargin = 1e-6;

Generator parse_generator(const std::string& name) {
    if (name == "hat") return HatShifted{};
    if (name.rfind("bspline:", 0) == 0) {
        try {
            const int m = std::stoi(name.substr(8));
            if (m >= 1) return BSpline{m};
        } catch (const std::exception&) {
        }
    }
    throw Error(ErrorKind::ParseError, "generator must be hat or bspline:<degree >= 1>");
}

ComplexVector parse_coeff_tokens(const std::vector<std::string>& tokens, Index offset) {
    Eigen::VectorXcd v(static_cast<Index>(tokens.size()));
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& t = tokens[i];
        const auto comma = t.find(',');
        try {
            std::size_t used = 0;
            const double re = std::stod(t.substr(0, comma), &used);
            if (used != t.substr(0, comma).size()) throw std::invalid_argument(t);
            double im = 0.0;
            if (comma != std::string::npos) {
                const std::string rest = t.substr(comma + 1);
                im = std::stod(rest, &used);
                if (used != rest.size()) throw std::invalid_argument(t);
            }
            v[static_cast<Index>(i)] = Complex(re, im);
        } catch (const std::exception&) {
            throw Error(ErrorKind::ParseError, "coefficient \"" + t + "\" is not re or re,im");
        }
    }
    return ComplexVector(offset, std::move(v));
}

bool adjacent_margins_ok(const ComplexVector& v) {
    for (Index n = v.lo(); n + 1 < v.hi(); ++n)
        if (!(noncollinearity_margin(std::abs(v[n]), std::abs(v[n + 1]), std::abs(v[n + 1] - v[n])) > kGenericMargin))
            return false;
    return true;
}

io::Signal wrap(const GenOptions& o, ComplexVector c) {
    if (o.kind == "vector") return io::VectorSignal{std::move(c)};
    if (o.kind == "pw") return make_pw_signal(o.bandwidth, o.x0, std::move(c));
    if (o.kind == "si") return SISignal{parse_generator(o.generator), std::move(c)};
    throw Error(ErrorKind::ParseError, "kind must be pw, si or vector");
}

io::Domain domain_for(const io::Signal& s) {
    if (const auto* pw = std::get_if<PWSignal>(&s)) return io::PWDomain{pw->bandwidth, pw->x0};
    if (const auto* si = std::get_if<SISignal>(&s))
        return io::SIDomain{si->generator, half_integer_grid(*si), si->coeffs.lo(), si->coeffs.hi()};
    return io::VectorDomain{};
}

std::pair<Index, Index> parse_ref_pair(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) throw std::invalid_argument(text);
        std::size_t u1 = 0;
        std::size_t u2 = 0;
        const std::string a = text.substr(0, comma);
        const std::string b = text.substr(comma + 1);
        const long long k = std::stoll(a, &u1);
        const long long l = std::stoll(b, &u2);
        if (u1 != a.size() || u2 != b.size()) throw std::invalid_argument(text);
        return {static_cast<Index>(k), static_cast<Index>(l)};
    } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "two-ref scheme needs two-ref:k,l");
    }
}

io::Signal signal_on_domain(const io::Domain& d, const ComplexVector& g, RecoveryReport& report) {
    return std::visit(
        [&](const auto& dom) -> io::Signal {
            using D = std::decay_t<decltype(dom)>;
            if constexpr (std::is_same_v<D, io::PWDomain>) {
                return make_pw_signal(dom.bandwidth, dom.x0, g);
            } else if constexpr (std::is_same_v<D, io::SIDomain>) {
                const auto n = static_cast<Index>(dom.points.size());
                const CoefficientFit fit = si_refit_coefficients(dom.generator, dom.points, restrict_to(g, 0, n),
                                                                 dom.coeff_lo, dom.coeff_hi);
                std::ostringstream note;
                note << "coefficients refit by least squares, residual " << fit.residual;
                report.notes.push_back(note.str());
                return SISignal{dom.generator, fit.coeffs};
            } else if constexpr (std::is_same_v<D, io::StftDomain>) {
                throw Error(ErrorKind::InvalidArgument, "STFT domain requires structured samples");
            } else {
                return io::VectorSignal{g};
            }
        },
        d);
}

void emit(const std::string& path, const Json& j, std::ostream& out) {
    if (path == "-")
        out << io::dump(j);
    else
        io::write_json(path, j);
}

}  // namespace

io::Signal generate(const GenOptions& o) {
    if (o.ensure_noncollinear && o.real)
        throw Error(ErrorKind::InvalidArgument, "real signals are collinear; drop --ensure-noncollinear");
    if (!o.coeffs.empty()) {
        io::Signal s = wrap(o, parse_coeff_tokens(o.coeffs, o.offset));
        if (o.ensure_noncollinear && !adjacent_margins_ok(io::coefficients(s)))
            throw Error(ErrorKind::HypothesisFailed, "given coefficients have collinear adjacent samples");
        return s;
    }
    if (o.length <= 0) throw Error(ErrorKind::InvalidArgument, "--len must be positive");
    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> normal(0.0, o.real ? 1.0 : std::sqrt(0.5));
    for (int attempt = 0; attempt < 100000; ++attempt) {
        Eigen::VectorXcd v(o.length);
        for (Index i = 0; i < o.length; ++i) {
            const double re = normal(rng);
            v[i] = Complex(re, o.real ? 0.0 : normal(rng));
        }
        io::Signal s = wrap(o, ComplexVector(o.offset, std::move(v)));
        if (!o.ensure_noncollinear || adjacent_margins_ok(io::coefficients(s))) return s;
    }
    throw Error(ErrorKind::InvalidArgument, "could not draw a signal with non-collinear adjacent samples");
}

ComplexVector measurable_vector(const io::Signal& s) {
    if (const auto* si = std::get_if<SISignal>(&s)) return sample(*si, half_integer_grid(*si));
    return io::coefficients(s);
}

io::Json measure_on_graph(const io::Signal& s, const SimpleGraph& g) {
    Json j = io::to_json(measure(measurable_vector(s), g));
    j["domain"] = io::to_json(domain_for(s));
    return j;
}

io::Json measure_stft(const io::Signal& s, const Window& w) {
    const auto* pw = std::get_if<PWSignal>(&s);
    if (!pw) throw Error(ErrorKind::InvalidArgument, "stft scheme needs a pw signal");
    return io::to_json(io::SamplesFile{stft_structured_samples(*pw, w), io::StftDomain{w, pw->x0}});
}

PWSignal resample_pw(const PWSignal& s, double x1, Index guard) {
    if (s.coeffs.empty()) return make_pw_signal(s.bandwidth, x1, {});
    const Index lo = s.coeffs.lo() - guard;
    const Index hi = s.coeffs.hi() + guard;
    ComplexVector c = ComplexVector::zeros(lo, hi - lo);
    for (Index n = lo; n < hi; ++n) c.at(n) = pw_eval(s, x1 + static_cast<double>(n) * s.grid_step());
    return make_pw_signal(s.bandwidth, x1, std::move(c));
}

io::Json measure_signal(const io::Signal& s, const std::string& spec, const MeasureOptions& o) {
    if (spec == "adjacent12") {
        const auto* pw = std::get_if<PWSignal>(&s);
        if (o.x0_search && pw) {
            auto generic = [&](const ComplexVector& v) {
                for (Index n = v.lo(); n + 1 < v.hi(); ++n)
                    if (!is_noncollinear(std::abs(v[n]), std::abs(v[n + 1]), std::abs(v[n + 1] - v[n]), o.tol))
                        return false;
                return true;
            };
            if (!generic(pw->coeffs)) {
                std::mt19937_64 rng(o.seed);
                std::uniform_real_distribution<double> unit(0.0, 1.0);
                for (int attempt = 0;; ++attempt) {
                    if (attempt >= o.attempts)
                        throw Error(ErrorKind::HypothesisFailed, "no grid offset with non-collinear adjacent samples");
                    const PWSignal moved = resample_pw(*pw, pw->x0 + unit(rng) * pw->grid_step(), o.guard);
                    if (generic(moved.coeffs))
                        return io::to_json(io::SamplesFile{make_adjacent12_samples(moved.coeffs), domain_for(moved)});
                }
            }
        }
        return io::to_json(io::SamplesFile{make_adjacent12_samples(measurable_vector(s)), domain_for(s)});
    }
    if (spec.rfind("two-ref:", 0) == 0) {
        const auto [k, l] = parse_ref_pair(spec.substr(8));
        return io::to_json(io::SamplesFile{make_two_reference_samples(measurable_vector(s), k, l), domain_for(s)});
    }
    if (spec.rfind("graph:", 0) == 0) return measure_on_graph(s, io::graph_from_json(io::read_json(spec.substr(6))));
    if (spec.rfind("stft:", 0) == 0) return measure_stft(s, io::window_from_json(io::read_json(spec.substr(5))));
    throw Error(ErrorKind::ParseError, "scheme must be adjacent12, two-ref:k,l, graph:<file> or stft:<file>");
}

RecoverResult recover_measurements(const io::Json& j, const RecoverOptions& o) {
    RecoveryOptions ro;
    ro.tol = o.tol;
    ro.polish = o.polish;
    if (io::is_measurement_set(j)) {
        if (o.real) throw Error(ErrorKind::InvalidArgument, "--real applies to adjacent12 samples");
        const MeasurementSet m = io::measurement_set_from_json(j);
        SimpleGraph g;
        for (const auto& [v, _] : m.vertex_mags) g.add_vertex(v);
        for (const auto& [e, _] : m.edge_mags) g.add_edge(e.first, e.second);
        const io::Domain d = j.contains("domain") ? io::domain_from_json(j["domain"]) : io::Domain{io::VectorDomain{}};
        Recovery r = propagate_recover(g, m, ro);
        io::Signal s = signal_on_domain(d, r.signal, r.report);
        return {std::move(s), std::move(r.report)};
    }
    const io::SamplesFile f = io::samples_from_json(j);
    if (o.real) {
        if (f.samples.scheme.kind != SchemeKind::Adjacent12)
            throw Error(ErrorKind::InvalidArgument, "--real needs adjacent12 samples");
        RealRecovery r = sign_propagate(f.samples.abs, f.samples.rel1, o.tol);
        io::Signal s = signal_on_domain(f.domain, to_complex(r.signal), r.report);
        return {std::move(s), std::move(r.report)};
    }
    if (const auto* st = std::get_if<io::StftDomain>(&f.domain)) {
        if (f.samples.scheme.kind != SchemeKind::Adjacent12)
            throw Error(ErrorKind::InvalidArgument, "stft recovery needs adjacent12 samples");
        StftRecovery r = stft_recover(trim_zero_margins(f.samples, o.tol), st->window, st->x0, ro);
        std::ostringstream note;
        note << "deconvolution residual " << r.deconvolution_residual << ", smallest singular value "
             << r.min_singular_value;
        r.report.notes.push_back(note.str());
        return {std::move(r.signal), std::move(r.report)};
    }
    Recovery r = f.samples.scheme.kind == SchemeKind::Adjacent12 ? algorithm1(trim_zero_margins(f.samples, o.tol), ro)
                                                                 : algorithm2(f.samples, ro);
    io::Signal s = signal_on_domain(f.domain, r.signal, r.report);
    return {std::move(s), std::move(r.report)};
}

Comparison compare_signals(const io::Signal& a, const io::Signal& b) {
    const bool bare = std::holds_alternative<io::VectorSignal>(a) || std::holds_alternative<io::VectorSignal>(b);
    if (!bare) {
        if (a.index() != b.index()) throw Error(ErrorKind::GridMismatch, "signals are of different kinds");
        if (const auto* pa = std::get_if<PWSignal>(&a)) {
            const auto& pb = std::get<PWSignal>(b);
            if (std::abs(pa->bandwidth - pb.bandwidth) > 1e-12 * pa->bandwidth ||
                std::abs(pa->x0 - pb.x0) > 1e-12 * std::max(1.0, std::abs(pa->x0)))
                throw Error(ErrorKind::GridMismatch, "signals live on different sampling grids");
        } else if (io::to_json(std::get<SISignal>(a).generator) != io::to_json(std::get<SISignal>(b).generator)) {
            throw Error(ErrorKind::GridMismatch, "signals use different generators");
        }
    }
    const ComplexVector& ca = io::coefficients(a);
    const ComplexVector& cb = io::coefficients(b);
    const Equivalence eq = dist_conj(ca, cb);
    const double scale = std::max(norm(ca), norm(cb));
    return {eq.distance, scale > 0.0 ? eq.distance / scale : eq.distance, eq.branch};
}

io::Json to_json(const Comparison& c) {
    return {{"dist_conj", c.distance},
            {"relative", c.relative},
            {"branch", c.branch.kind == BranchKind::Identity ? "identity" : "conjugation"},
            {"phase", c.branch.phase}};
}

namespace {

Json roundtrip(const Json& j) { return io::parse_json(io::dump(j)); }

bool stft_margins_ok(const io::Signal& s, const Window& w) {
    const StructuredSamples h = stft_structured_samples(std::get<PWSignal>(s), w);
    for (Index n = h.lo(); n + 1 < h.hi(); ++n)
        if (!(noncollinearity_margin(h.abs[n], h.abs[n + 1], h.rel1[n]) > kGenericMargin)) return false;
    return true;
}

TrialOutcome run_trial(const SweepOptions& o, int index, std::uint64_t seed) {
    TrialOutcome t;
    t.trial = index;
    t.seed = seed;
    try {
        std::uint64_t state = seed;
        GenOptions g;
        g.seed = splitmix64(state);
        const Index lo = std::max<Index>(o.min_length, o.scheme == "circulant" ? 5 : 2);
        const Index hi = std::max(lo, o.max_length);
        t.length = lo + static_cast<Index>(splitmix64(state) % static_cast<std::uint64_t>(hi - lo + 1));
        g.length = t.length;
        g.ensure_noncollinear = true;
        RecoverOptions ro;
        ro.tol = o.tol;

        Json measured;
        io::Signal truth;
        if (o.scheme == "adjacent12" || o.scheme == "two-ref") {
            g.kind = o.scheme == "adjacent12" ? "pw" : "si";
            truth = io::signal_from_json(roundtrip(io::to_json(generate(g))));
            measured = measure_signal(truth, o.scheme == "adjacent12" ? "adjacent12" : "two-ref:1,3");
        } else if (o.scheme == "circulant" || o.scheme == "tworef-graph") {
            g.kind = "vector";
            truth = io::signal_from_json(roundtrip(io::to_json(generate(g))));
            const SimpleGraph graph = o.scheme == "circulant" ? build_circulant_graph(t.length, {1, 2}, 0)
                                                              : build_two_reference_graph(t.length, 0, 1, 0);
            measured = measure_on_graph(truth, io::graph_from_json(roundtrip(io::to_json(graph))));
        } else if (o.scheme == "real") {
            g.kind = "vector";
            g.real = true;
            g.ensure_noncollinear = false;
            ro.real = true;
            truth = io::signal_from_json(roundtrip(io::to_json(generate(g))));
            measured = measure_signal(truth, "adjacent12");
        } else if (o.scheme == "stft") {
            g.kind = "pw";
            const Window w = make_window(RealVector(0, {1.0, 0.5}), g.bandwidth);
            for (int attempt = 0;; ++attempt) {
                truth = io::signal_from_json(roundtrip(io::to_json(generate(g))));
                if (stft_margins_ok(truth, w)) break;
                if (attempt >= 1000) throw Error(ErrorKind::InvalidArgument, "no generic stft draw");
                g.seed = splitmix64(state);
            }
            measured = measure_stft(truth, io::window_from_json(roundtrip(io::to_json(w))));
        } else {
            throw Error(ErrorKind::ParseError, "unknown sweep scheme " + o.scheme);
        }
        const RecoverResult r = recover_measurements(roundtrip(measured), ro);
        const io::Signal back = io::signal_from_json(roundtrip(io::to_json(r.signal)));
        t.relative = compare_signals(back, truth).relative;
        t.ok = t.relative <= o.tol;
        if (!t.ok) t.message = "relative distance above tolerance";
    } catch (const Error& e) {
        t.message = std::string(to_string(e.kind())) + ": " + e.what();
    }
    return t;
}

}  // namespace

std::vector<TrialOutcome> run_sweep(const SweepOptions& o) {
    if (o.trials < 0) throw Error(ErrorKind::InvalidArgument, "--trials must be non-negative");
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(o.trials));
    std::uint64_t state = o.seed;
    for (auto& s : seeds) s = splitmix64(state);

    std::vector<TrialOutcome> out(seeds.size());
    unsigned workers = o.threads ? o.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(seeds.size(), 1)));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) out[i] = run_trial(o, static_cast<int>(i), seeds[i]);
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    return out;
}

std::vector<std::vector<double>> evaluate_grid(const io::Signal& s, double from, double to, double step) {
    if (!(step > 0.0) || !(to >= from)) throw Error(ErrorKind::InvalidArgument, "need step > 0 and to >= from");
    std::vector<std::vector<double>> rows;
    const auto count = static_cast<Index>(std::floor((to - from) / step + 1e-9));
    for (Index k = 0; k <= count; ++k) {
        const double x = from + static_cast<double>(k) * step;
        Complex v;
        if (const auto* pw = std::get_if<PWSignal>(&s))
            v = pw_eval(*pw, x);
        else if (const auto* si = std::get_if<SISignal>(&s))
            v = si_eval(*si, x);
        else
            v = io::coefficients(s)[static_cast<Index>(std::lround(x))];
        rows.push_back({x, v.real(), v.imag(), std::abs(v)});
    }
    return rows;
}

namespace {

Json gf_json(const TriangleGraph& gf) {
    Json nodes = Json::array();
    for (const auto& t : gf.nodes) nodes.push_back(t.verts);
    Json links = Json::array();
    for (const auto& l : gf.links) links.push_back({l.a, l.b, {l.shared.first, l.shared.second}});
    return {{"nodes", nodes}, {"links", links}};
}

int demo_counterexample(const fs::path& dir, std::ostream& out) {
    const auto [f, g] = counterexample_pair();
    std::vector<std::vector<double>> rows;
    double worst = 0.0;
    for (int k = 0; k <= 5000; ++k) {
        const double x = -1.0 + 1e-3 * k;
        const double af = std::norm(si_eval(f, x));
        const double ag = std::norm(si_eval(g, x));
        worst = std::max(worst, std::abs(af - ag));
        rows.push_back({x, af, ag});
    }
    io::write_csv(dir / "counterexample.csv", {"x", "abs2_f", "abs2_g"}, rows);
    const Equivalence eq = dist_conj(f.coeffs, g.coeffs);
    out << io::dump({{"demo", "counterexample"},
                     {"max_abs2_difference", worst},
                     {"dist_conj", eq.distance},
                     {"csv", (dir / "counterexample.csv").string()}});
    return kOk;
}

int demo_fig1(const std::string& name, const SimpleGraph& graph, std::uint64_t seed, double tol, const fs::path& dir,
              std::ostream& out) {
    GenOptions go;
    go.kind = "vector";
    go.length = static_cast<Index>(graph.vertex_count());
    go.offset = graph.vertices().front();
    go.seed = seed;
    const io::Signal truth = generate(go);
    const MeasurementSet m = measure(io::coefficients(truth), graph);
    const TriangleGraph gf = build_gf(graph, m, tol);
    const Diagnosis diag = check_hypothesis(graph, gf);

    io::write_json(dir / (name + "_graph.json"), io::to_json(graph));
    io::write_json(dir / (name + "_gf.json"), gf_json(gf));
    io::write_json(dir / (name + "_measurements.json"), io::to_json(m));

    RecoveryOptions ro;
    ro.tol = tol;
    const Recovery r = propagate_recover(graph, m, ro);
    RecoveryReport report = r.report;
    const Equivalence eq = dist_conj(r.signal, io::coefficients(truth));
    report.branch = eq.branch;
    io::write_json(dir / (name + "_report.json"), io::to_json(report));
    const double rel = eq.distance / norm(io::coefficients(truth));
    const bool ok = rel <= tol;
    out << io::dump({{"demo", name},
                     {"triangle_nodes", gf.nodes.size()},
                     {"links", gf.links.size()},
                     {"components", gf.components().size()},
                     {"hypothesis", describe(diag)},
                     {"relative_error", rel},
                     {"recovered", ok}});
    return ok ? kOk : kMismatch;
}

template <typename F>
int guarded(std::ostream& err, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what();
        if (e.index()) err << " [index " << *e.index() << "]";
        err << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kParse;
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    double tol = kDefaultTolerance;
    if (const int rc = guarded(err, [&] {
            tol = default_tolerance();
            return kOk;
        });
        rc != kOk)
        return rc;

    CLI::App app{"Conjugate phase retrieval from structured phaseless samples.\n"
                 "Exit codes: 0 ok, 1 compare/sweep mismatch, 2 parse or usage error, 3 hypothesis or\n"
                 "collinearity failure, 4 infeasible magnitudes, 5 numerical singularity.\n"
                 "CONJPHASE_TOL overrides the default tolerance.",
                 "conjphase"};
    app.require_subcommand(1);
    app.add_option("--tol", tol, "Tolerance for feasibility, collinearity and comparison checks")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    GenOptions gen;
    std::string gen_out = "-";
    auto* cmd_gen = app.add_subcommand("gen", "Generate a random or explicit signal file")->fallthrough();
    cmd_gen->add_option("--kind", gen.kind, "Signal kind")
        ->check(CLI::IsMember({"pw", "si", "vector"}))
        ->capture_default_str();
    cmd_gen->add_option("--len", gen.length, "Number of coefficients (random draw)")->capture_default_str();
    cmd_gen->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
    cmd_gen->add_option("--B", gen.bandwidth, "Bandwidth of a pw signal")->check(CLI::PositiveNumber)->capture_default_str();
    cmd_gen->add_option("--x0", gen.x0, "Grid offset of a pw signal")->capture_default_str();
    cmd_gen->add_option("--offset", gen.offset, "Index of the first coefficient")->capture_default_str();
    cmd_gen->add_option("--generator", gen.generator, "si generator: hat or bspline:<degree>")->capture_default_str();
    cmd_gen->add_option("--coeffs", gen.coeffs, "Explicit coefficients as re or re,im tokens");
    cmd_gen->add_flag("--real", gen.real, "Draw real coefficients");
    cmd_gen->add_flag("--ensure-noncollinear", gen.ensure_noncollinear,
                      "Resample until every adjacent margin exceeds 1e-6");
    cmd_gen->add_option("-o,--output", gen_out, "Output file, - for stdout")->capture_default_str();

    std::string meas_in;
    std::string meas_scheme = "adjacent12";
    std::string meas_out = "-";
    auto* cmd_measure = app.add_subcommand("measure", "Simulate phaseless measurements of a signal")->fallthrough();
    cmd_measure->add_option("signal", meas_in, "Signal file, - for stdin")->required();
    cmd_measure->add_option("--scheme", meas_scheme, "adjacent12 | two-ref:k,l | graph:<file> | stft:<window file>")
        ->capture_default_str();
    cmd_measure->add_option("-o,--output", meas_out, "Output file, - for stdout")->capture_default_str();
    MeasureOptions meas_opts;
    cmd_measure->add_flag("--x0-search", meas_opts.x0_search,
                          "pw + adjacent12: retry up to 16 random grid offsets if an adjacent pair is collinear");
    cmd_measure->add_option("--guard", meas_opts.guard, "Extra grid points on each side when resampling at a new offset; adjacent tail samples turn collinear beyond about (2 tol)^(-1/4) points, ~150 at the default tol")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd_measure->add_option("--seed", meas_opts.seed, "Seed of the offset search")->capture_default_str();

    std::string rec_in;
    std::string rec_out = "-";
    std::string rec_report;
    RecoverOptions rec;
    bool no_polish = false;
    auto* cmd_recover = app.add_subcommand("recover", "Recover a signal from a measurement file")->fallthrough();
    cmd_recover->add_option("measurements", rec_in, "Samples or measurement-set file, - for stdin")->required();
    cmd_recover->add_flag("--real", rec.real, "Real signal: recover signs from adjacent12 samples");
    cmd_recover->add_flag("--no-polish", no_polish, "Plain recursion without the Gauss-Newton polish");
    cmd_recover->add_option("-o,--output", rec_out, "Recovered signal file, - for stdout")->capture_default_str();
    cmd_recover->add_option("--report", rec_report, "Write the recovery report to this file");

    std::string cmp_a;
    std::string cmp_b;
    auto* cmd_compare = app.add_subcommand("compare", "Distance up to unimodular factor and conjugation")->fallthrough();
    cmd_compare->add_option("a", cmp_a, "First signal file")->required();
    cmd_compare->add_option("b", cmp_b, "Second signal file")->required();

    std::string demo_name;
    std::string demo_dir = ".";
    std::uint64_t demo_seed = 1;
    auto* cmd_demo = app.add_subcommand("demo", "Reproduce the hat counterexample or the eight-vertex example graphs")->fallthrough();
    cmd_demo->add_option("name", demo_name, "counterexample | fig1-circulant | fig1-tworef")
        ->required()
        ->check(CLI::IsMember({"counterexample", "fig1-circulant", "fig1-tworef"}));
    cmd_demo->add_option("--out-dir", demo_dir, "Directory for CSV/JSON output")->capture_default_str();
    cmd_demo->add_option("--seed", demo_seed, "Seed of the signal measured on the graph")->capture_default_str();

    std::string eval_in;
    std::string eval_out = "-";
    double eval_from = 0.0;
    double eval_to = 1.0;
    double eval_step = 0.01;
    auto* cmd_eval = app.add_subcommand("eval", "Write (x, Re f, Im f, |f|) on a grid as CSV")->fallthrough();
    cmd_eval->add_option("signal", eval_in, "Signal file, - for stdin")->required();
    cmd_eval->add_option("--from", eval_from, "First grid point")->capture_default_str();
    cmd_eval->add_option("--to", eval_to, "Last grid point")->capture_default_str();
    cmd_eval->add_option("--step", eval_step, "Grid step")->check(CLI::PositiveNumber)->capture_default_str();
    cmd_eval->add_option("-o,--output", eval_out, "CSV file, - for stdout")->capture_default_str();

    SweepOptions sweep;
    auto* cmd_sweep = app.add_subcommand("sweep", "Seeded gen|measure|recover|compare trials")->fallthrough();
    cmd_sweep->add_option("--scheme", sweep.scheme, "Scheme under test")
        ->check(CLI::IsMember({"adjacent12", "two-ref", "circulant", "tworef-graph", "real", "stft"}))
        ->capture_default_str();
    cmd_sweep->add_option("--trials", sweep.trials, "Number of trials")->check(CLI::NonNegativeNumber)->capture_default_str();
    cmd_sweep->add_option("--seed", sweep.seed, "Master seed; trial seeds derive by splitmix64")->capture_default_str();
    cmd_sweep->add_option("--min-len", sweep.min_length, "Shortest signal")->check(CLI::PositiveNumber)->capture_default_str();
    cmd_sweep->add_option("--max-len", sweep.max_length, "Longest signal")->check(CLI::PositiveNumber)->capture_default_str();
    cmd_sweep->add_option("--threads", sweep.threads, "Worker threads, 0 for all cores")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kParse;
    }

    return guarded(err, [&]() -> int {
        if (*cmd_gen) {
            emit(gen_out, io::to_json(generate(gen)), out);
            return kOk;
        }
        if (*cmd_measure) {
            meas_opts.tol = tol;
            emit(meas_out, measure_signal(io::signal_from_json(io::read_json(meas_in)), meas_scheme, meas_opts), out);
            return kOk;
        }
        if (*cmd_eval) {
            const auto rows = evaluate_grid(io::signal_from_json(io::read_json(eval_in)), eval_from, eval_to, eval_step);
            const std::vector<std::string> header{"x", "re", "im", "abs"};
            if (eval_out == "-")
                io::write_csv(out, header, rows);
            else
                io::write_csv(eval_out, header, rows);
            return kOk;
        }
        if (*cmd_recover) {
            rec.tol = tol;
            rec.polish = !no_polish;
            const RecoverResult r = recover_measurements(io::read_json(rec_in), rec);
            if (!rec_report.empty()) io::write_json(rec_report, io::to_json(r.report));
            emit(rec_out, io::to_json(r.signal), out);
            return kOk;
        }
        if (*cmd_compare) {
            const Comparison c =
                compare_signals(io::signal_from_json(io::read_json(cmp_a)), io::signal_from_json(io::read_json(cmp_b)));
            out << io::dump(to_json(c));
            return c.relative <= tol ? kOk : kMismatch;
        }
        if (*cmd_demo) {
            fs::create_directories(demo_dir);
            if (demo_name == "counterexample") return demo_counterexample(demo_dir, out);
            if (demo_name == "fig1-circulant")
                return demo_fig1(demo_name, build_circulant_graph(8, {1, 2}), demo_seed, tol, demo_dir, out);
            return demo_fig1(demo_name, build_two_reference_graph(8, 4, 5), demo_seed, tol, demo_dir, out);
        }
        sweep.tol = tol;
        const auto results = run_sweep(sweep);
        int passed = 0;
        for (const TrialOutcome& t : results) {
            out << "trial " << t.trial << " seed " << t.seed << " len " << t.length << " rel "
                << std::setprecision(3) << std::scientific << t.relative << std::defaultfloat << ' '
                << (t.ok ? "ok" : "FAIL");
            if (!t.message.empty()) out << " (" << t.message << ')';
            out << '\n';
            passed += t.ok ? 1 : 0;
        }
        out << "passed " << passed << '/' << results.size() << '\n';
        return passed == static_cast<int>(results.size()) ? kOk : kMismatch;
    });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("conjphase");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace conjphase::cli
