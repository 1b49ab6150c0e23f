#include "conjphase/recon.hpp"

#include <map>
#include <string>

namespace conjphase {

namespace {

void require_range(const RealVector& v, Index lo, Index size, const char* name) {
    if (v.lo() != lo || v.size() != size)
        throw Error(ErrorKind::InvalidArgument, std::string("inconsistent index range for ") + name);
}

void require_nonnegative(const RealVector& v, const char* name) {
    for (Index n = v.lo(); n < v.hi(); ++n)
        if (!(v[n] >= 0.0))
            throw Error(ErrorKind::InvalidArgument, std::string("negative magnitude in ") + name, n);
}

double max_abs(const RealVector& v) { return v.empty() ? 0.0 : v.values().cwiseAbs().maxCoeff(); }

std::map<Index, Complex> to_map(const ComplexVector& g) {
    std::map<Index, Complex> m;
    for (Index n = g.lo(); n < g.hi(); ++n) m.emplace_hint(m.end(), n, g[n]);
    return m;
}

void from_map(const std::map<Index, Complex>& m, ComplexVector& g) {
    for (const auto& [n, v] : m) g.at(n) = v;
}

// Runs the windowed polish after every `every` recovered vertices.
class SequentialPolisher {
public:
    SequentialPolisher(const StructuredSamples& s, const RecoveryOptions& opt)
        : enabled_(opt.polish), opt_(opt.polish_options) {
        if (enabled_) {
            graph_ = s.graph();
            data_ = s.to_measurement_set();
        }
    }

    void after_step(ComplexVector& g, const std::vector<Index>& order) {
        if (!enabled_ || opt_.every <= 0) return;
        if (++since_ < opt_.every) return;
        since_ = 0;
        const auto w = std::min<std::size_t>(order.size(), static_cast<std::size_t>(std::max(opt_.window, 1)));
        std::map<Index, Complex> values;
        for (Index n : order) values.emplace(n, g[n]);
        std::vector<Index> free(order.end() - static_cast<std::ptrdiff_t>(w), order.end());
        polish(graph_, data_, values, free, opt_.max_iterations);
        for (Index n : free) g.at(n) = values.at(n);
    }

    void finish(ComplexVector& g, const std::vector<Index>& order) {
        if (!enabled_) return;
        auto values = to_map(g);
        polish(graph_, data_, values, order, opt_.max_iterations);
        from_map(values, g);
    }

private:
    bool enabled_;
    PolishOptions opt_;
    SimpleGraph graph_;
    MeasurementSet data_;
    int since_ = 0;
};

}  // namespace

void StructuredSamples::validate(double tol) const {
    const Index lo = abs.lo();
    const Index len = abs.size();
    require_nonnegative(abs, "abs");
    require_nonnegative(rel1, "rel1");
    require_nonnegative(rel2, "rel2");
    if (scheme.kind == SchemeKind::Adjacent12) {
        require_range(rel1, lo, std::max<Index>(0, len - 1), "rel1");
        require_range(rel2, lo, std::max<Index>(0, len - 2), "rel2");
        for (Index n = lo; n + 1 < hi(); ++n) check_feasible(abs[n], abs[n + 1], rel1[n], tol);
        for (Index n = lo; n + 2 < hi(); ++n) check_feasible(abs[n], abs[n + 2], rel2[n], tol);
    } else {
        const Index k = scheme.ref_k;
        const Index l = scheme.ref_l;
        if (k == l) throw Error(ErrorKind::BadReference, "reference indices must differ", k);
        if (!abs.contains(k) || !abs.contains(l))
            throw Error(ErrorKind::BadReference, "reference index outside the sample window");
        require_range(rel1, lo, len, "rel1");
        require_range(rel2, lo, len, "rel2");
        for (Index n = lo; n < hi(); ++n) {
            check_feasible(abs[n], abs[k], rel1[n], tol);
            check_feasible(abs[n], abs[l], rel2[n], tol);
        }
        if (std::abs(rel1[l] - rel2[k]) > tol * std::max(1.0, abs[k] + abs[l]))
            throw Error(ErrorKind::InfeasibleMagnitudes, "|f_l - f_k| and |f_k - f_l| disagree");
    }
}

SimpleGraph StructuredSamples::graph() const {
    SimpleGraph g;
    for (Index n = lo(); n < hi(); ++n) g.add_vertex(n);
    if (scheme.kind == SchemeKind::Adjacent12) {
        for (Index n = lo(); n + 1 < hi(); ++n) g.add_edge(n, n + 1);
        for (Index n = lo(); n + 2 < hi(); ++n) g.add_edge(n, n + 2);
    } else {
        for (Index n = lo(); n < hi(); ++n) {
            if (n != scheme.ref_k) g.add_edge(n, scheme.ref_k);
            if (n != scheme.ref_l) g.add_edge(n, scheme.ref_l);
        }
    }
    return g;
}

MeasurementSet StructuredSamples::to_measurement_set() const {
    MeasurementSet m;
    for (Index n = lo(); n < hi(); ++n) m.vertex_mags[n] = abs[n];
    if (scheme.kind == SchemeKind::Adjacent12) {
        for (Index n = lo(); n + 1 < hi(); ++n) m.edge_mags[Edge(n, n + 1)] = rel1[n];
        for (Index n = lo(); n + 2 < hi(); ++n) m.edge_mags[Edge(n, n + 2)] = rel2[n];
    } else {
        for (Index n = lo(); n < hi(); ++n) {
            if (n != scheme.ref_k) m.edge_mags[Edge(n, scheme.ref_k)] = rel1[n];
            if (n != scheme.ref_l && n != scheme.ref_k) m.edge_mags[Edge(n, scheme.ref_l)] = rel2[n];
        }
    }
    return m;
}

StructuredSamples make_adjacent12_samples(const ComplexVector& f) {
    const Index lo = f.lo();
    const Index len = f.size();
    StructuredSamples s;
    s.scheme = Scheme::adjacent12();
    s.abs = RealVector(lo, f.values().cwiseAbs());
    s.rel1 = RealVector::zeros(lo, std::max<Index>(0, len - 1));
    s.rel2 = RealVector::zeros(lo, std::max<Index>(0, len - 2));
    for (Index n = lo; n + 1 < f.hi(); ++n) s.rel1.at(n) = std::abs(f[n + 1] - f[n]);
    for (Index n = lo; n + 2 < f.hi(); ++n) s.rel2.at(n) = std::abs(f[n + 2] - f[n]);
    return s;
}

StructuredSamples make_two_reference_samples(const ComplexVector& f, Index k, Index l) {
    if (k == l) throw Error(ErrorKind::BadReference, "reference indices must differ", k);
    if (!f.contains(k) || !f.contains(l))
        throw Error(ErrorKind::BadReference, "reference index outside the signal window");
    StructuredSamples s;
    s.scheme = Scheme::two_reference(k, l);
    s.abs = RealVector(f.lo(), f.values().cwiseAbs());
    s.rel1 = RealVector::zeros(f.lo(), f.size());
    s.rel2 = RealVector::zeros(f.lo(), f.size());
    for (Index n = f.lo(); n < f.hi(); ++n) {
        s.rel1.at(n) = std::abs(f[n] - f[k]);
        s.rel2.at(n) = std::abs(f[n] - f[l]);
    }
    return s;
}

StructuredSamples trim_zero_margins(const StructuredSamples& s, double tol) {
    if (s.scheme.kind != SchemeKind::Adjacent12)
        throw Error(ErrorKind::InvalidArgument, "zero-margin trimming applies to adjacent12 samples");
    const double cut = tol * max_abs(s.abs);
    Index lo = s.lo();
    Index hi = s.hi();
    while (lo < hi && s.abs[lo] <= cut) ++lo;
    while (hi > lo && s.abs[hi - 1] <= cut) --hi;
    if (lo == s.lo() && hi == s.hi()) return s;
    StructuredSamples t;
    t.scheme = s.scheme;
    t.abs = restrict_to(s.abs, lo, hi);
    t.rel1 = restrict_to(s.rel1, lo, std::max(lo, hi - 1));
    t.rel2 = restrict_to(s.rel2, lo, std::max(lo, hi - 2));
    return t;
}

Complex solve_from_pair(const Complex& a, double ra, const Complex& b, double rb, double& det) {
    det = a.real() * b.imag() - a.imag() * b.real();
    return {(ra * b.imag() - rb * a.imag()) / det, (a.real() * rb - b.real() * ra) / det};
}

std::pair<Complex, Complex> initial_pair(double abs_first, double abs_second, double rel, double tol) {
    const double re = rel_real_inner(abs_first, abs_second, rel, tol) / abs_first;
    const double radicand = abs_second * abs_second - re * re;
    const double scale = std::max(1.0, abs_second * abs_second);
    if (radicand < -tol * scale)
        throw Error(ErrorKind::InfeasibleMagnitudes, "negative radicand in the initializer", std::nullopt, radicand);
    return {Complex(abs_first, 0.0), Complex(re, std::sqrt(std::max(0.0, radicand)))};
}

void normalize_branch(ComplexVector& g, Index anchor, Index second) {
    const Complex a = g[anchor];
    const double m = std::abs(a);
    if (m > 0.0) {
        g.values() *= std::conj(a) / m;
        g.at(anchor) = Complex(m, 0.0);
    }
    if (g[second].imag() < 0.0) g.values() = g.values().conjugate().eval();
}

ComplexVector solve_c3(const std::array<double, 3>& abs, const std::array<double, 3>& rels, double tol) {
    // rels index the pairs (0,1), (0,2), (1,2).
    constexpr std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    auto rel_of = [&](int i, int j) {
        if (i > j) std::swap(i, j);
        return rels[i == 0 ? (j == 1 ? 0 : 1) : 2];
    };
    for (int p = 0; p < 3; ++p) {
        if (!(abs[p] >= 0.0) || !(rels[p] >= 0.0))
            throw Error(ErrorKind::InvalidArgument, "negative magnitude");
        check_feasible(abs[pairs[p].first], abs[pairs[p].second], rels[p], tol);
    }

    ComplexVector x = ComplexVector::zeros(0, 3);
    const double scale = std::max({abs[0], abs[1], abs[2]});
    if (scale == 0.0) return x;

    int best = -1;
    double best_gap = 0.0;
    for (int p = 0; p < 3; ++p) {
        const auto [i, j] = pairs[p];
        if (!is_noncollinear(abs[i], abs[j], rels[p], tol)) continue;
        const double gap = noncollinearity_margin(abs[i], abs[j], rels[p]) / (abs[i] * abs[j]);
        if (gap > best_gap) {
            best_gap = gap;
            best = p;
        }
    }

    if (best < 0) {
        // Collinear: the real representative, positive at the first nonzero entry.
        int first = 0;
        while (abs[first] <= tol * scale) ++first;
        x.at(first) = abs[first];
        for (int j = 0; j < 3; ++j) {
            if (j == first) continue;
            const double r = 0.5 * (abs[first] * abs[first] + abs[j] * abs[j] - rel_of(first, j) * rel_of(first, j));
            x.at(j) = std::copysign(abs[j], r);
        }
        return x;
    }

    const auto [p, q] = pairs[best];
    const int t = 3 - p - q;
    const auto [gp, gq] = initial_pair(abs[p], abs[q], rels[best], tol);
    double det = 0.0;
    x.at(p) = gp;
    x.at(q) = gq;
    x.at(t) = solve_from_pair(gp, rel_real_inner(abs[t], abs[p], rel_of(t, p), tol), gq,
                              rel_real_inner(abs[t], abs[q], rel_of(t, q), tol), det);
    return x;
}

Recovery algorithm1(const StructuredSamples& s, const RecoveryOptions& options) {
    if (s.scheme.kind != SchemeKind::Adjacent12)
        throw Error(ErrorKind::InvalidArgument, "algorithm1 needs adjacent12 samples");
    const double tol = options.tol;
    s.validate(tol);
    const Index lo = s.lo();
    const Index hi = s.hi();
    if (hi - lo < 1) throw Error(ErrorKind::InvalidArgument, "empty sample window");

    Recovery out;
    auto& report = out.report;
    ComplexVector g = ComplexVector::zeros(lo, hi - lo);

    if (hi - lo == 1) {
        if (!(s.abs[lo] > tol)) throw Error(ErrorKind::ZeroSample, "anchor sample vanishes", lo);
        g.at(lo) = s.abs[lo];
        report.order = {lo};
        out.signal = std::move(g);
        return out;
    }

    for (Index n = lo; n + 1 < hi; ++n)
        if (!is_noncollinear(s.abs[n], s.abs[n + 1], s.rel1[n], tol))
            throw Error(ErrorKind::AdjacentCollinear,
                        "samples " + std::to_string(n) + " and " + std::to_string(n + 1) + " are collinear", n);

    const Index anchor = std::clamp<Index>(0, lo, hi - 2);
    auto r = [&](Index n, Index m) {  // Re(f_n conj f_m) for |n - m| in {1, 2}
        const Index a = std::min(n, m);
        const double d = (std::max(n, m) - a == 1) ? s.rel1[a] : s.rel2[a];
        return rel_real_inner(s.abs[n], s.abs[m], d, tol);
    };

    const auto [g0, g1] = initial_pair(s.abs[anchor], s.abs[anchor + 1], s.rel1[anchor], tol);
    g.at(anchor) = g0;
    g.at(anchor + 1) = g1;
    report.seed = std::make_pair(anchor, anchor + 1);
    report.order = {anchor, anchor + 1};
    report.min_determinant = std::abs(g1.imag()) / std::abs(g1);

    SequentialPolisher polisher(s, options);
    auto step = [&](Index n, Index a, Index b) {
        double det = 0.0;
        const Complex v = solve_from_pair(g[a], r(n, a), g[b], r(n, b), det);
        const double normalized = std::abs(det) / (std::abs(g[a]) * std::abs(g[b]));
        if (!(normalized >= tol) || !std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(ErrorKind::NumericallySingular,
                        "2x2 system for sample " + std::to_string(n) + " is singular", n, det);
        report.min_determinant = std::min(report.min_determinant, normalized);
        g.at(n) = v;
        report.order.push_back(n);
        polisher.after_step(g, report.order);
    };
    for (Index n = anchor + 2; n < hi; ++n) step(n, n - 1, n - 2);
    for (Index n = anchor - 1; n >= lo; --n) step(n, n + 1, n + 2);
    polisher.finish(g, report.order);

    normalize_branch(g, anchor, anchor + 1);
    report.residual = measurement_residual(s.to_measurement_set(), g);
    if (options.polish) report.notes.emplace_back("recursion polished by windowed Gauss-Newton");
    out.signal = std::move(g);
    return out;
}

Recovery algorithm2(const StructuredSamples& s, const RecoveryOptions& options) {
    if (s.scheme.kind != SchemeKind::TwoReference)
        throw Error(ErrorKind::InvalidArgument, "algorithm2 needs two-reference samples");
    const double tol = options.tol;
    s.validate(tol);
    const Index k = s.scheme.ref_k;
    const Index l = s.scheme.ref_l;
    const double fk = s.abs[k];
    const double fl = s.abs[l];
    const double dkl = s.rel1[l];

    if (!(fk > tol) || !is_noncollinear(fk, fl, dkl, tol))
        throw Error(ErrorKind::ReferenceCollinear, "reference samples are collinear", k,
                    noncollinearity_margin(fk, fl, dkl));

    Recovery out;
    auto& report = out.report;
    ComplexVector g = ComplexVector::zeros(s.lo(), s.hi() - s.lo());
    const auto [gk, gl] = initial_pair(fk, fl, dkl, tol);
    if (!(gl.imag() > 0.0))
        throw Error(ErrorKind::ReferenceCollinear, "reference initializer is real", l);
    g.at(k) = gk;
    g.at(l) = gl;
    report.seed = std::make_pair(k, l);
    report.order = {k, l};
    report.min_determinant = gl.imag() / std::abs(gl);

    const double gk_re = gk.real();
    for (Index n = s.lo(); n < s.hi(); ++n) {
        if (n == k || n == l) continue;
        const double an = s.abs[n];
        check_feasible(an, fk, s.rel1[n], tol);
        check_feasible(an, fl, s.rel2[n], tol);
        const double to_l = s.rel2[n] * s.rel2[n] - an * an - fl * fl;
        const double to_k = s.rel1[n] * s.rel1[n] - an * an - fk * fk;
        // (Re, Im) = -1/2 [[0, 1/g_k], [1/Im g_l, -Re g_l / (g_k Im g_l)]] (to_l, to_k)
        const double re = -0.5 * (to_k / gk_re);
        const double im = -0.5 * (to_l / gl.imag() - gl.real() / (gk_re * gl.imag()) * to_k);
        g.at(n) = Complex(re, im);
        report.order.push_back(n);
    }

    report.residual = measurement_residual(s.to_measurement_set(), g);
    out.signal = std::move(g);
    return out;
}

RealRecovery sign_propagate(const RealVector& abs, const RealVector& rel1, double tol) {
    const Index lo = abs.lo();
    const Index hi = abs.hi();
    if (hi - lo < 1) throw Error(ErrorKind::InvalidArgument, "empty sample window");
    require_range(rel1, lo, hi - lo - 1, "rel1");
    require_nonnegative(abs, "abs");
    require_nonnegative(rel1, "rel1");

    const double cut = tol * max_abs(abs);
    for (Index n = lo; n < hi; ++n)
        if (!(abs[n] > cut) || abs[n] == 0.0)
            throw Error(ErrorKind::ZeroSample, "sample " + std::to_string(n) + " vanishes", n);

    RealRecovery out;
    RealVector g = RealVector::zeros(lo, hi - lo);
    const Index anchor = std::clamp<Index>(0, lo, hi - 1);
    g.at(anchor) = abs[anchor];
    out.report.order = {anchor};
    for (Index n = anchor + 1; n < hi; ++n) {
        const double product = rel_real_inner(abs[n - 1], abs[n], rel1[n - 1], tol);
        g.at(n) = std::copysign(abs[n], product) * (g[n - 1] < 0 ? -1.0 : 1.0);
        out.report.order.push_back(n);
    }
    for (Index n = anchor - 1; n >= lo; --n) {
        const double product = rel_real_inner(abs[n], abs[n + 1], rel1[n], tol);
        g.at(n) = std::copysign(abs[n], product) * (g[n + 1] < 0 ? -1.0 : 1.0);
        out.report.order.push_back(n);
    }

    double worst = 0.0;
    for (Index n = lo; n + 1 < hi; ++n) worst = std::max(worst, std::abs(std::abs(g[n + 1] - g[n]) - rel1[n]));
    out.report.residual = worst;
    out.signal = std::move(g);
    return out;
}

}  // namespace conjphase
