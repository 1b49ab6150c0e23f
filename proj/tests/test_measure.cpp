#include <doctest.h>

#include "conjphase/graphcpr.hpp"
#include "conjphase/measure.hpp"
#include "conjphase/spaces.hpp"
#include "oracles.hpp"

using namespace conjphase;

namespace {
const Complex I(0.0, 1.0);
const double kSqrt2 = std::sqrt(2.0);
}

TEST_CASE("measure examples") {
    SimpleGraph g;
    g.add_edge(0, 1);
    {
        const MeasurementSet m = measure(ComplexVector{Complex(1.0), I}, g);
        CHECK(m.vertex(0) == 1.0);
        CHECK(m.vertex(1) == 1.0);
        CHECK(m.edge(0, 1) == doctest::Approx(kSqrt2));
        CHECK(m.edge(1, 0) == m.edge(0, 1));
    }
    {
        const MeasurementSet m = measure(ComplexVector{Complex(0.0), Complex(0.0)}, g);
        CHECK(m.vertex(0) == 0.0);
        CHECK(m.edge(0, 1) == 0.0);
    }
    {
        const MeasurementSet m = measure(ComplexVector{Complex(1.0), I, Complex(1.0)}, complete_graph(3));
        CHECK(m.vertex(0) == 1.0);
        CHECK(m.vertex(1) == 1.0);
        CHECK(m.vertex(2) == 1.0);
        CHECK(m.edge(0, 1) == doctest::Approx(kSqrt2));
        CHECK(m.edge(1, 2) == doctest::Approx(kSqrt2));
        CHECK(m.edge(0, 2) == 0.0);
    }
}

TEST_CASE("measure reads out-of-range vertices as zero") {
    SimpleGraph g;
    g.add_edge(0, 7);
    const MeasurementSet m = measure(ComplexVector{Complex(3.0)}, g);
    CHECK(m.vertex(7) == 0.0);
    CHECK(m.edge(0, 7) == 3.0);
}

TEST_CASE("missing data throws") {
    const MeasurementSet m;
    CHECK_THROWS_AS((void)m.vertex(0), Error);
    CHECK_THROWS_AS((void)m.edge(0, 1), Error);
}

TEST_CASE("rel_real_inner examples") {
    CHECK(rel_real_inner(1, 1, 0) == doctest::Approx(1.0));
    CHECK(std::abs(rel_real_inner(1, 1, kSqrt2)) < 1e-15);
    CHECK(rel_real_inner(2, 1, std::sqrt(3.0)) == doctest::Approx(1.0));
}

TEST_CASE("triangle inequality is enforced") {
    CHECK_THROWS_AS(rel_real_inner(1, 1, 2.1), Error);
    CHECK_THROWS_AS(rel_real_inner(3, 1, 1.0), Error);
    try {
        check_feasible(1.0, 1.0, 2.0 + 2e-6);
        FAIL("expected InfeasibleMagnitudes");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InfeasibleMagnitudes);
    }
    CHECK_NOTHROW(check_feasible(1.0, 1.0, 2.0 + 1e-12));
    CHECK_NOTHROW(check_feasible(1.0, 1.0, 2.0));
}

TEST_CASE("MeasurementSet::validate") {
    MeasurementSet m;
    m.vertex_mags = {{0, 1.0}, {1, 1.0}};
    m.edge_mags = {{Edge(0, 1), 3.0}};
    CHECK_THROWS_AS(m.validate(), Error);
    m.edge_mags = {{Edge(0, 2), 1.0}};
    CHECK_THROWS_AS(m.validate(), Error);
    m.edge_mags = {{Edge(0, 1), 1.0}};
    m.vertex_mags[1] = -1.0;
    CHECK_THROWS_AS(m.validate(), Error);
    m.vertex_mags[1] = 1.0;
    CHECK_NOTHROW(m.validate());
}

TEST_CASE("is_noncollinear examples") {
    CHECK(is_noncollinear(1, 1, kSqrt2));
    CHECK_FALSE(is_noncollinear(1, 2, 1));
    CHECK_FALSE(is_noncollinear(1, 0, 1));
}

TEST_CASE("polarization round trip on random graphs") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 100; ++t) {
        const Index n = 3 + static_cast<Index>(rng() % 10);
        const ComplexVector f = oracle::random_complex(rng, n);
        SimpleGraph g;
        for (Index v = 0; v < n; ++v) g.add_vertex(v);
        for (Index a = 0; a < n; ++a)
            for (Index b = a + 1; b < n; ++b)
                if (rng() % 2) g.add_edge(a, b);
        const MeasurementSet m = measure(f, g);
        for (const Edge& e : g.edges()) {
            const double exact = (f[e.first] * std::conj(f[e.second])).real();
            const double scale = std::abs(f[e.first]) * std::abs(f[e.second]);
            CHECK(std::abs(rel_real_inner(m.vertex(e.first), m.vertex(e.second), m.edge(e.first, e.second)) - exact) <=
                  1e-12 * std::max(scale, 1e-300));
        }
    }
}

TEST_CASE("is_noncollinear agrees with the direct cross product") {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> pick(0, 3);
    int agree = 0;
    const int trials = 2000;
    for (int t = 0; t < trials; ++t) {
        Complex a = oracle::random_complex(rng, 1)[0];
        Complex b = oracle::random_complex(rng, 1)[0];
        switch (pick(rng)) {
            case 0: b = a * 1.7; break;                        // collinear, same direction
            case 1: b = -0.4 * a; break;                       // collinear, opposite
            case 2: b = a * Complex(1.0, 1e-14); break;        // below tolerance
            default: break;                                    // generic
        }
        const double scale = std::abs(a) * std::abs(b);
        // gap / (|a||b|) = 1 - |cos| ~ sin^2 / 2, so the data-side cut sits at sin = sqrt(2 tol)
        const bool direct = oracle::cross(a, b) > std::sqrt(2.0 * kDefaultTolerance) * scale;
        const bool data = is_noncollinear(std::abs(a), std::abs(b), std::abs(a - b));
        agree += direct == data ? 1 : 0;
    }
    CHECK(agree == trials);
}

TEST_CASE("vertex-only data cannot separate the counterexample pair") {
    const auto [f, g] = counterexample_pair();
    const SamplingSet x({0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0});
    const ComplexVector fs = sample(f, x);
    const ComplexVector gs = sample(g, x);
    SimpleGraph vertices_only;
    for (Index n = 0; n < static_cast<Index>(x.size()); ++n) vertices_only.add_vertex(n);
    CHECK(measure(fs, vertices_only) == measure(gs, vertices_only));
    CHECK(dist_conj(fs, gs).distance > 0.1);
}
