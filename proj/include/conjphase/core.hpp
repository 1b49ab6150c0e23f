#ifndef CONJPHASE_CORE_HPP
#define CONJPHASE_CORE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <type_traits>

#include <Eigen/Core>

#include "conjphase/error.hpp"

namespace conjphase {

using Index = std::ptrdiff_t;
using Complex = std::complex<double>;

inline constexpr double kDefaultTolerance = 1e-9;

namespace detail {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename Scalar>
bool is_finite(const Scalar& v) {
    if constexpr (is_complex<Scalar>::value)
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    else
        return std::isfinite(v);
}

}  // namespace detail

/// Finitely supported sequence indexed by integers. Logical index n lives at
/// values()[n - offset()]; anything outside [lo(), hi()) reads as zero.
template <typename Scalar>
class IndexedVector {
public:
    using scalar_type = Scalar;
    using Storage = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    IndexedVector() = default;

    IndexedVector(Index offset, Storage values) : offset_(offset), values_(std::move(values)) {
        for (Index i = 0; i < values_.size(); ++i)
            if (!detail::is_finite(values_[i]))
                throw Error(ErrorKind::InvalidArgument, "non-finite vector entry", offset_ + i);
    }

    IndexedVector(Index offset, std::initializer_list<Scalar> values)
        : IndexedVector(offset, from_list(values)) {}

    IndexedVector(std::initializer_list<Scalar> values) : IndexedVector(0, values) {}

    static IndexedVector zeros(Index offset, Index size) {
        return IndexedVector(offset, Storage::Zero(size));
    }

    Index offset() const noexcept { return offset_; }
    Index lo() const noexcept { return offset_; }
    Index hi() const noexcept { return offset_ + values_.size(); }
    Index size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.size() == 0; }
    bool contains(Index n) const noexcept { return n >= lo() && n < hi(); }

    Scalar operator[](Index n) const { return contains(n) ? values_[n - offset_] : Scalar(0); }

    Scalar& at(Index n) {
        if (!contains(n)) throw Error(ErrorKind::InvalidArgument, "index outside vector support", n);
        return values_[n - offset_];
    }

    const Storage& values() const noexcept { return values_; }
    Storage& values() noexcept { return values_; }

private:
    static Storage from_list(std::initializer_list<Scalar> list) {
        Storage s(static_cast<Index>(list.size()));
        std::copy(list.begin(), list.end(), s.data());
        return s;
    }

    Index offset_ = 0;
    Storage values_;
};

using ComplexVector = IndexedVector<Complex>;
using RealVector = IndexedVector<double>;

template <typename Scalar>
bool operator==(const IndexedVector<Scalar>& a, const IndexedVector<Scalar>& b) {
    return a.offset() == b.offset() && a.values() == b.values();
}

/// Hermitian inner product sum_n a_n conj(b_n) over the union of supports.
template <typename Scalar>
Scalar inner(const IndexedVector<Scalar>& a, const IndexedVector<Scalar>& b) {
    const Index lo = std::max(a.lo(), b.lo());
    const Index hi = std::min(a.hi(), b.hi());
    Scalar s(0);
    for (Index n = lo; n < hi; ++n) {
        if constexpr (detail::is_complex<Scalar>::value)
            s += a[n] * std::conj(b[n]);
        else
            s += a[n] * b[n];
    }
    return s;
}

template <typename Scalar>
double squared_norm(const IndexedVector<Scalar>& a) {
    return a.values().squaredNorm();
}

template <typename Scalar>
double norm(const IndexedVector<Scalar>& a) {
    return a.values().norm();
}

template <typename Scalar>
IndexedVector<Scalar> conj(const IndexedVector<Scalar>& a) {
    return IndexedVector<Scalar>(a.offset(), a.values().conjugate());
}

template <typename Scalar, typename Factor>
IndexedVector<Scalar> scaled(const IndexedVector<Scalar>& a, const Factor& factor) {
    return IndexedVector<Scalar>(a.offset(), a.values() * Scalar(factor));
}

/// Re-index `a` onto [lo, hi) with implicit zeros.
template <typename Scalar>
IndexedVector<Scalar> restrict_to(const IndexedVector<Scalar>& a, Index lo, Index hi) {
    auto out = IndexedVector<Scalar>::zeros(lo, std::max<Index>(0, hi - lo));
    for (Index n = std::max(lo, a.lo()); n < std::min(hi, a.hi()); ++n) out.at(n) = a[n];
    return out;
}

template <typename Scalar>
IndexedVector<Scalar> operator-(const IndexedVector<Scalar>& a, const IndexedVector<Scalar>& b) {
    if (a.empty()) return scaled(b, Scalar(-1));
    if (b.empty()) return a;
    const Index lo = std::min(a.lo(), b.lo());
    const Index hi = std::max(a.hi(), b.hi());
    auto out = IndexedVector<Scalar>::zeros(lo, hi - lo);
    for (Index n = lo; n < hi; ++n) out.at(n) = a[n] - b[n];
    return out;
}

inline ComplexVector to_complex(const RealVector& v) {
    return ComplexVector(v.offset(), v.values().cast<Complex>());
}

enum class BranchKind { Identity, Conjugation };

/// Which member of the equivalence class {e^{ia} b, e^{ia} conj(b)} is
/// closest to a reference, and the rotation a in [0, 2pi).
struct EquivalenceBranch {
    BranchKind kind = BranchKind::Identity;
    double phase = 0.0;
};

struct Equivalence {
    double distance = 0.0;
    EquivalenceBranch branch;
};

/// min over real a of ||a - e^{ia} b||.
double dist_unimodular(const ComplexVector& a, const ComplexVector& b);

/// min(dist_unimodular(a, b), dist_unimodular(a, conj(b))); ties go to Identity.
Equivalence dist_conj(const ComplexVector& a, const ComplexVector& b);

/// Wraps an angle into [0, 2pi).
double wrap_phase(double angle);

}  // namespace conjphase

#endif  // CONJPHASE_CORE_HPP
