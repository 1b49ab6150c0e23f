#ifndef CONJPHASE_TOOLS_COMMANDS_HPP
#define CONJPHASE_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "conjphase/io.hpp"

namespace conjphase::cli {

enum ExitCode : int {
    kOk = 0,
    kMismatch = 1,
    kParse = 2,
    kHypothesis = 3,
    kInfeasible = 4,
    kSingular = 5,
};

int exit_code(ErrorKind kind);

/// CONJPHASE_TOL if set (must parse as a positive number), else kDefaultTolerance.
double default_tolerance();

std::uint64_t splitmix64(std::uint64_t& state);

struct GenOptions {
    std::string kind = "pw";
    Index length = 16;
    std::uint64_t seed = 0;
    double bandwidth = 0.5;
    double x0 = 0.0;
    Index offset = 0;
    std::string generator = "hat";
    std::vector<std::string> coeffs;
    bool real = false;
    /// Adjacent coefficient pairs; for hat signals these are the samples at
    /// consecutive integers.
    bool ensure_noncollinear = false;
};

io::Signal generate(const GenOptions& o);

/// The vector every scheme measures: coefficients for vector and PW signals
/// (the latter are samples on the Nyquist grid), samples on the half-integer
/// grid for shift-invariant signals.
ComplexVector measurable_vector(const io::Signal& s);

struct MeasureOptions {
    /// For pw signals under adjacent12: if some adjacent pair on the native
    /// grid is collinear, retry up to `attempts` offsets x0 + u/(2B), u uniform
    /// in [0, 1), resampling the signal over its support widened by `guard`.
    bool x0_search = false;
    int attempts = 16;
    Index guard = 64;
    std::uint64_t seed = 0;
    double tol = kDefaultTolerance;
};

/// Samples of f on the grid x1 + n/(2B) for n in the support of s widened by
/// `guard`; exact on the widened window, truncated outside it.
PWSignal resample_pw(const PWSignal& s, double x1, Index guard);

/// `spec` is adjacent12 | two-ref:k,l | graph:<file> | stft:<window file>.
io::Json measure_signal(const io::Signal& s, const std::string& spec, const MeasureOptions& o = {});
io::Json measure_on_graph(const io::Signal& s, const SimpleGraph& g);
io::Json measure_stft(const io::Signal& s, const Window& w);

struct RecoverOptions {
    double tol = kDefaultTolerance;
    bool real = false;
    bool polish = true;
};

struct RecoverResult {
    io::Signal signal;
    RecoveryReport report;
};

RecoverResult recover_measurements(const io::Json& measurements, const RecoverOptions& o);

struct Comparison {
    double distance = 0.0;
    double relative = 0.0;
    EquivalenceBranch branch;
};

/// Throws GridMismatch for signals of different kinds or grids; a bare vector
/// compares against any kind by coefficients.
Comparison compare_signals(const io::Signal& a, const io::Signal& b);
io::Json to_json(const Comparison& c);

struct SweepOptions {
    std::string scheme = "adjacent12";
    int trials = 100;
    std::uint64_t seed = 0;
    Index min_length = 4;
    Index max_length = 64;
    double tol = kDefaultTolerance;
    unsigned threads = 0;
};

struct TrialOutcome {
    int trial = 0;
    std::uint64_t seed = 0;
    Index length = 0;
    double relative = 0.0;
    bool ok = false;
    std::string message;
};

/// Each trial runs gen | measure | recover | compare through the JSON
/// formats with its own seed; results come back in trial order.
std::vector<TrialOutcome> run_sweep(const SweepOptions& o);

/// Rows (x, Re f, Im f, |f|) on [from, to] with the given step.
std::vector<std::vector<double>> evaluate_grid(const io::Signal& s, double from, double to, double step);

/// Full command line entry; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conjphase::cli

#endif  // CONJPHASE_TOOLS_COMMANDS_HPP
