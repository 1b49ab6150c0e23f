#ifndef CONJPHASE_ERROR_HPP
#define CONJPHASE_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace conjphase {

enum class ErrorKind {
    InvalidArgument,
    ParseError,
    InfeasibleMagnitudes,
    HypothesisFailed,
    NumericallySingular,
    ReferenceCollinear,
    AdjacentCollinear,
    ZeroSample,
    BadReference,
    BandwidthMismatch,
    IllConditionedWindow,
    InconsistentMeasurements,
    GridMismatch,
};

const char* to_string(ErrorKind kind) noexcept;

/// Library exception. `index` names the offending sample/vertex where one
/// exists (AdjacentCollinear(n), ZeroSample(n), NumericallySingular(n)).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what,
          std::optional<std::ptrdiff_t> index = std::nullopt,
          std::optional<double> value = std::nullopt)
        : std::runtime_error(what), kind_(kind), index_(index), value_(value) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::ptrdiff_t> index() const noexcept { return index_; }
    std::optional<double> value() const noexcept { return value_; }

private:
    ErrorKind kind_;
    std::optional<std::ptrdiff_t> index_;
    std::optional<double> value_;
};

}  // namespace conjphase

#endif  // CONJPHASE_ERROR_HPP
