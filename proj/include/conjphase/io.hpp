#ifndef CONJPHASE_IO_HPP
#define CONJPHASE_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "conjphase/core.hpp"
#include "conjphase/graph.hpp"
#include "conjphase/measure.hpp"
#include "conjphase/recon.hpp"
#include "conjphase/spaces.hpp"
#include "conjphase/stft.hpp"

namespace conjphase::io {

using Json = nlohmann::json;

/// Bare coefficient vector, written with kind "vector".
struct VectorSignal {
    ComplexVector coeffs;
};
using Signal = std::variant<VectorSignal, PWSignal, SISignal>;

const ComplexVector& coefficients(const Signal& s);
ComplexVector& coefficients(Signal& s);
std::string kind_name(const Signal& s);

/// Grid information carried next to structured samples so a recovered sample
/// vector can be turned back into a signal of the original kind.
struct VectorDomain {};
struct PWDomain {
    double bandwidth = 0.5;
    double x0 = 0.0;
};
struct SIDomain {
    Generator generator;
    SamplingSet points;
    Index coeff_lo = 0;
    Index coeff_hi = 0;
};
struct StftDomain {
    Window window;
    double x0 = 0.0;
};
using Domain = std::variant<VectorDomain, PWDomain, SIDomain, StftDomain>;

struct SamplesFile {
    StructuredSamples samples;
    Domain domain;
};

Json to_json(const ComplexVector& v);
Json to_json(const RealVector& v);
Json to_json(const Generator& g);
Json to_json(const Signal& s);
Json to_json(const Window& w);
Json to_json(const SimpleGraph& g);
Json to_json(const MeasurementSet& m);
Json to_json(const SamplesFile& s);
Json to_json(const RecoveryReport& r);
Json to_json(const Domain& d);

/// Each parser throws Error(ParseError) on malformed input.
ComplexVector complex_vector_from_json(const Json& j, Index index_offset = 0);
RealVector real_vector_from_json(const Json& j, Index index_offset = 0);
Generator generator_from_json(const Json& j);
Signal signal_from_json(const Json& j);
Window window_from_json(const Json& j);
SimpleGraph graph_from_json(const Json& j);
MeasurementSet measurement_set_from_json(const Json& j);
SamplesFile samples_from_json(const Json& j);
Domain domain_from_json(const Json& j);

bool is_measurement_set(const Json& j);

Json read_json(const std::filesystem::path& path);
Json parse_json(const std::string& text);
/// Two-space indented JSON followed by a newline; "-" writes to stdout.
void write_json(const std::filesystem::path& path, const Json& j);
std::string dump(const Json& j);

/// Comma-separated rows with 17 significant digits.
void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace conjphase::io

#endif  // CONJPHASE_IO_HPP
