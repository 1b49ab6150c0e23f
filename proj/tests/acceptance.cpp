// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "conjphase/graphcpr.hpp"
#include "conjphase/spaces.hpp"
#include "conjphase/stft.hpp"
#include "oracles.hpp"

using namespace conjphase;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and limits.
constexpr double kAc1Abs = 1e-12;
constexpr double kAc1Dist = 1e-12;
constexpr double kRoundTripRel = 1e-9;
constexpr double kGenericMargin = 1e-6;
constexpr double kC3Rel = 1e-12;
constexpr double kC3Grid = 1e-8;
constexpr double kAc8Bound = 1e-2;
constexpr double kAc8Regression = 1e-6;  // relative drift allowed against the committed values
constexpr double kAc9Quadrature = 1e-6;
constexpr double kAc9Recovery = 1e-8;
constexpr double kQuadratureHalfWidth = 1000.0;

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(const char* id, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = limit_s <= 0.0 || secs < limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s %s  %s  [%.2fs", pass ? "PASS" : "FAIL", id, o.detail.c_str(), secs);
    if (limit_s > 0.0) std::printf(" < %.0fs%s", limit_s, in_time ? "" : " EXCEEDED");
    std::printf("]\n");
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Index draw_length(std::mt19937_64& rng, Index lo, Index hi) {
    return lo + static_cast<Index>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

Outcome ac1() {
    const auto [f, g] = counterexample_pair();
    double worst = 0.0;
    for (int k = 0; k <= 5000; ++k) {
        const double x = -1.0 + 1e-3 * k;
        worst = std::max(worst, std::abs(std::norm(si_eval(f, x)) - std::norm(si_eval(g, x))));
    }
    const double d = dist_conj(f.coeffs, g.coeffs).distance;
    return {worst <= kAc1Abs && std::abs(d - 2.0) <= kAc1Dist,
            fmt("max||f|^2-|g|^2| = %.3g, dist_conj = %.15g", worst, d)};
}

Outcome ac2() {
    std::mt19937_64 rng(2024);
    const SimpleGraph circ = build_circulant_graph(8, {1, 2});
    const SimpleGraph two = build_two_reference_graph(8, 4, 5);
    const ComplexVector f = oracle::random_generic(rng, 8, kGenericMargin, 1);
    const TriangleGraph gc = build_gf(circ, measure(f, circ));
    const TriangleGraph gt = build_gf(two, measure(f, two));

    bool cycle = gc.components().size() == 1;
    for (const auto& adj : gc.adjacency()) cycle = cycle && adj.size() == 2;
    const bool ok = enumerate_triangles(circ).size() == 8 && gc.nodes.size() == 8 && gc.links.size() == 8 && cycle &&
                    gt.nodes.size() == 6 && gt.links.size() == 15;
    return {ok, fmt("circulant: %zu nodes, %zu links, single cycle %s; two-reference: %zu nodes, %zu links",
                    gc.nodes.size(), gc.links.size(), cycle ? "yes" : "no", gt.nodes.size(), gt.links.size())};
}

Outcome ac3() {
    std::mt19937_64 rng(3);
    int ok = 0;
    double worst = 0.0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        const ComplexVector f = oracle::random_generic(rng, draw_length(rng, 4, 64), kGenericMargin);
        const Recovery r = algorithm1(make_adjacent12_samples(f));
        const double rel = dist_conj(r.signal, f).distance / norm(f);
        worst = std::max(worst, rel);
        ok += rel <= kRoundTripRel ? 1 : 0;
    }
    return {ok == trials, fmt("%d/%d within %.0e relative, worst %.3g", ok, trials, kRoundTripRel, worst)};
}

Outcome ac4() {
    // hat samples on the half-integer grid; references at x = 1 and x = 2
    std::mt19937_64 rng(4);
    int ok = 0;
    double worst = 0.0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        const SISignal s{HatShifted{}, oracle::random_generic(rng, draw_length(rng, 4, 64), kGenericMargin)};
        const SamplingSet x = half_integer_grid(s);
        const ComplexVector v = sample(s, x);
        const Recovery r = si_recover_two_reference(make_two_reference_samples(v, 1, 3));
        const CoefficientFit fit = si_refit_coefficients(s.generator, x, r.signal, s.coeffs.lo(), s.coeffs.hi());
        const double rel = std::max(dist_conj(r.signal, v).distance / norm(v),
                                    dist_conj(fit.coeffs, s.coeffs).distance / norm(s.coeffs));
        worst = std::max(worst, rel);
        ok += rel <= kRoundTripRel ? 1 : 0;
    }
    return {ok == trials, fmt("%d/%d within %.0e relative (samples and refit coefficients), worst %.3g", ok, trials,
                              kRoundTripRel, worst)};
}

Outcome ac5() {
    std::mt19937_64 rng(5);
    int ok = 0;
    double worst = 0.0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const Index n = draw_length(rng, 5, 64);
        const ComplexVector f = oracle::random_generic(rng, n, kGenericMargin);
        ComplexVector graph_sol;
        ComplexVector closed;
        if (t % 2 == 0) {
            const SimpleGraph g = build_circulant_graph(n, {1, 2}, 0);
            graph_sol = propagate_recover(g, measure(f, g)).signal;
            closed = algorithm1(make_adjacent12_samples(f)).signal;
        } else {
            const Index k = static_cast<Index>(rng() % static_cast<std::uint64_t>(n - 1));
            const SimpleGraph g = build_two_reference_graph(n, k, k + 1, 0);
            const MeasurementSet m = measure(f, g);
            graph_sol = propagate_recover(g, m).signal;
            closed = algorithm2(make_two_reference_samples(f, k, k + 1)).signal;
        }
        const double rel = dist_conj(graph_sol, closed).distance / norm(f);
        worst = std::max(worst, rel);
        ok += rel <= kRoundTripRel ? 1 : 0;
    }
    return {ok == trials, fmt("%d/%d circulant/two-reference pairs within %.0e, worst %.3g", ok, trials,
                              kRoundTripRel, worst)};
}

Outcome ac6() {
    std::mt19937_64 rng(6);
    const int trials = 10000;
    int mags_ok = 0;
    int class_ok = 0;
    double worst_mag = 0.0;
    double worst_grid = 0.0;
    for (int t = 0; t < trials; ++t) {
        const ComplexVector x = oracle::random_complex(rng, 3);
        const std::array<double, 3> abs{std::abs(x[0]), std::abs(x[1]), std::abs(x[2])};
        const std::array<double, 3> rels{std::abs(x[0] - x[1]), std::abs(x[0] - x[2]), std::abs(x[1] - x[2])};
        const ComplexVector y = solve_c3(abs, rels);
        const double scale = std::max({abs[0], abs[1], abs[2]});
        const std::array<double, 6> back{std::abs(y[0]),        std::abs(y[1]),        std::abs(y[2]),
                                         std::abs(y[0] - y[1]), std::abs(y[0] - y[2]), std::abs(y[1] - y[2])};
        const std::array<double, 6> want{abs[0], abs[1], abs[2], rels[0], rels[1], rels[2]};
        double err = 0.0;
        for (int i = 0; i < 6; ++i) err = std::max(err, std::abs(back[i] - want[i]));
        worst_mag = std::max(worst_mag, err / scale);
        mags_ok += err <= kC3Rel * scale ? 1 : 0;
        const double grid = oracle::grid_phase_distance(y, x);
        worst_grid = std::max(worst_grid, grid / norm(x));
        class_ok += grid <= kC3Grid * norm(x) ? 1 : 0;
    }
    return {mags_ok == trials && class_ok == trials,
            fmt("magnitudes %d/%d (worst %.3g), grid-search class %d/%d (worst %.3g)", mags_ok, trials, worst_mag,
                class_ok, trials, worst_grid)};
}

Outcome ac7() {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal(0.0, 1.0);
    int ok = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        const Index n = draw_length(rng, 2, 64);
        Eigen::VectorXd v(n);
        for (Index i = 0; i < n; ++i) {
            double a = 0.0;
            while (std::abs(a) < 1e-3) a = normal(rng);
            v[i] = a;
        }
        const RealVector f(0, v);
        RealVector abs(0, v.cwiseAbs());
        Eigen::VectorXd d(n - 1);
        for (Index i = 0; i + 1 < n; ++i) d[i] = std::abs(v[i + 1] - v[i]);
        const RealRecovery r = sign_propagate(abs, RealVector(0, d));
        // signs as integers, normalized so the first entry is positive
        const int flip_truth = v[0] > 0 ? 1 : -1;
        const int flip_rec = r.signal[0] > 0 ? 1 : -1;
        bool same = r.signal.size() == n;
        for (Index i = 0; same && i < n; ++i) {
            const int st = (v[i] > 0 ? 1 : -1) * flip_truth;
            const int sr = (r.signal[i] > 0 ? 1 : -1) * flip_rec;
            same = st == sr;
        }
        ok += same ? 1 : 0;
    }
    return {ok == trials, fmt("%d/%d sign patterns equal up to global sign", ok, trials)};
}

std::vector<double> ac8_values() {
    std::mt19937_64 rng(8);
    std::vector<double> out;
    for (int t = 0; t < 50; ++t) {
        const PWSignal s = make_pw_signal(0.5, 0.0, oracle::random_complex(rng, 8));
        double peak = 0.0;
        const double dev = pw_magnitude_interp_check(s, 0.01, 128, &peak);
        out.push_back(dev / peak);
    }
    return out;
}

Outcome ac8(const fs::path& data) {
    const std::vector<double> rel = ac8_values();
    std::ifstream in(data);
    if (!in) return {false, "missing " + data.string()};
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> committed;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        committed.push_back(std::stod(line.substr(comma + 1)));
    }
    if (committed.size() != rel.size()) return {false, "committed values have the wrong length"};
    double worst = 0.0;
    double drift = 0.0;
    for (std::size_t i = 0; i < rel.size(); ++i) {
        worst = std::max(worst, rel[i]);
        drift = std::max(drift, std::abs(rel[i] - committed[i]) / committed[i]);
    }
    return {worst <= kAc8Bound && drift <= kAc8Regression,
            fmt("worst deviation/peak %.3g (bound %.0e), drift vs committed %.2g", worst, kAc8Bound, drift)};
}

void write_ac8(const fs::path& data) {
    const std::vector<double> rel = ac8_values();
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < rel.size(); ++i) rows.push_back({static_cast<double>(i), rel[i]});
    io::write_csv(data, {"trial", "deviation_over_peak"}, rows);
}

Window ac9_window(std::mt19937_64& rng, int t) {
    if (t % 2 == 0) return make_window(RealVector(0, {1.0, 0.5}), 0.5);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const Index len = 2 + static_cast<Index>(rng() % 3);
    Eigen::VectorXd d(len);
    d[0] = 1.0;
    for (Index m = 1; m < len; ++m) d[m] = u(rng);
    return make_window(RealVector(0, d), 0.5);
}

bool correlation_generic(const ComplexVector& h) {
    for (Index n = h.lo(); n + 1 < h.hi(); ++n)
        if (!(noncollinearity_margin(std::abs(h[n]), std::abs(h[n + 1]), std::abs(h[n + 1] - h[n])) > kGenericMargin))
            return false;
    return true;
}

Outcome ac9() {
    std::mt19937_64 rng(9);
    double worst_q = 0.0;
    for (int t = 0; t < 20; ++t) {
        const PWSignal s = make_pw_signal(0.5, 0.0, oracle::random_complex(rng, draw_length(rng, 4, 10)));
        const Window w = ac9_window(rng, t);
        const ComplexVector h = stft0_measure(s, w);
        for (Index n = h.lo(); n < h.hi(); ++n)
            worst_q = std::max(worst_q,
                               std::abs(oracle::stft_quadrature(s, w, s.grid_point(n), kQuadratureHalfWidth) - h[n]));
    }
    int ok = 0;
    double worst = 0.0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const Window w = ac9_window(rng, t);
        const Index len = draw_length(rng, 4, 32);
        ComplexVector c;
        for (;;) {
            c = oracle::random_complex(rng, len);
            if (correlation_generic(stft0_measure(make_pw_signal(0.5, 0.0, c), w))) break;
        }
        const PWSignal s = make_pw_signal(0.5, 0.0, c);
        const StftRecovery r = stft_recover(stft_structured_samples(s, w), w, 0.0);
        const double rel = dist_conj(r.signal.coeffs, c).distance / norm(c);
        worst = std::max(worst, rel);
        ok += rel <= kAc9Recovery ? 1 : 0;
    }
    return {worst_q <= kAc9Quadrature && ok == trials,
            fmt("quadrature worst %.3g (bound %.0e); recovery %d/%d within %.0e, worst %.3g", worst_q,
                kAc9Quadrature, ok, trials, kAc9Recovery, worst)};
}

int cli_code(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    return cli::run(args, out, err);
}

Outcome ac10() {
    std::vector<std::string> fails;
    const fs::path dir = fs::temp_directory_path() / ("conjphase_ac10_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string sig = (dir / "real.json").string();
    const std::string meas = (dir / "m.json").string();

    // real signals under adjacent12, through the CLI
    int real_ok = 0;
    for (int seed = 0; seed < 20; ++seed) {
        const bool made = cli_code({"gen", "--kind", "pw", "--real", "--len", std::to_string(2 + seed),
                                    "--seed", std::to_string(seed), "-o", sig}) == 0 &&
                          cli_code({"measure", sig, "-o", meas}) == 0;
        real_ok += made && cli_code({"recover", meas}) == cli::kHypothesis ? 1 : 0;
    }
    if (real_ok != 20) fails.push_back(fmt("real adjacent12 %d/20", real_ok));

    // triangle-free graph: uncovered vertices reported
    SimpleGraph path;
    for (Index v = 0; v < 4; ++v) path.add_edge(v, v + 1);
    const ComplexVector f{Complex(1.0), Complex(0, 1), Complex(1, 1), Complex(2, -1), Complex(-1, 0.5)};
    const MeasurementSet pm = measure(f, path);
    const Diagnosis d = check_hypothesis(path, build_gf(path, pm));
    const auto* unc = std::get_if<UncoveredVertices>(&d);
    if (!unc || unc->vertices != std::set<Index>{0, 1, 2, 3, 4}) fails.push_back("uncovered vertices not reported");
    try {
        (void)propagate_recover(path, pm);
        fails.push_back("triangle-free graph recovered");
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::HypothesisFailed) fails.push_back("triangle-free graph: wrong error kind");
    }

    // triangle-inequality violations beyond 1e-6
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    int rejected = 0;
    for (int t = 0; t < 1000; ++t) {
        const double a = u(rng);
        const double b = u(rng);
        const double over = 1.01e-6 * std::max(1.0, a + b);
        const double dist = t % 2 ? a + b + over : std::abs(a - b) - over;
        if (dist < 0.0) {
            ++rejected;  // negative magnitudes are rejected by construction
            continue;
        }
        try {
            check_feasible(a, b, dist);
        } catch (const Error& e) {
            rejected += e.kind() == ErrorKind::InfeasibleMagnitudes ? 1 : 0;
        }
    }
    if (rejected != 1000) fails.push_back(fmt("infeasible triples rejected %d/1000", rejected));
    std::ofstream(dir / "bad.json") << R"({"vertices": {"0": 1, "1": 1, "2": 1},
        "edges": [["0", "1", 1.0], ["1", "2", 1.0], ["0", "2", 2.00001]]})";
    if (cli_code({"recover", (dir / "bad.json").string()}) != cli::kInfeasible) fails.push_back("cli infeasible code");
    fs::remove_all(dir);

    std::string detail = "real adjacent12 -> exit 3, uncovered vertices {0..4}, violations > 1e-6 rejected (exit 4)";
    if (!fails.empty()) {
        detail = "failed:";
        for (const auto& s : fails) detail += " " + s + ";";
    }
    return {fails.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks AC1-AC10"};
    std::string data_dir = "tests/data";
    bool write = false;
    app.add_option("--data-dir", data_dir, "Directory with committed reference values")->capture_default_str();
    app.add_flag("--write-ac8", write, "Regenerate the committed AC8 deviations and exit");
    CLI11_PARSE(app, argc, argv);
    const fs::path ac8_file = fs::path(data_dir) / "ac8_deviations.csv";
    if (write) {
        write_ac8(ac8_file);
        std::printf("wrote %s\n", ac8_file.string().c_str());
        return 0;
    }

    report("AC1", 1.0, ac1);
    report("AC2", 1.0, ac2);
    report("AC3", 10.0, ac3);
    report("AC4", 10.0, ac4);
    report("AC5", 10.0, ac5);
    report("AC6", 30.0, ac6);
    report("AC7", 5.0, ac7);
    report("AC8", 0.0, [&] { return ac8(ac8_file); });
    report("AC9", 30.0, ac9);
    report("AC10", 0.0, ac10);
    std::printf("%s: %d failure(s)\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
