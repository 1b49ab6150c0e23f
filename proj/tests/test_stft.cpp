#include <doctest.h>

#include "conjphase/stft.hpp"
#include "oracles.hpp"

using namespace conjphase;

namespace {

const Complex I(0.0, 1.0);

Window delta_window(double b) { return make_window(RealVector{1.0}, b); }

Window random_window(std::mt19937_64& rng, Index len) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    Eigen::VectorXd d(len);
    d[0] = 1.0;
    for (Index m = 1; m < len; ++m) d[m] = u(rng);
    return make_window(RealVector(-static_cast<Index>(rng() % 3), d), 0.5);
}

}  // namespace

TEST_CASE("windows") {
    CHECK_THROWS_AS(make_window(RealVector{0.0, 0.0}, 0.5), Error);
    CHECK_THROWS_AS(make_window(RealVector{1.0}, -1.0), Error);
    const Window w = make_window(RealVector(-2, {0.0, 1.0, 0.5, 0.0}), 0.5);
    CHECK(w.coeffs.lo() == -1);
    CHECK(w.coeffs.size() == 2);
    CHECK(window_eval(w, -1.0) == doctest::Approx(1.0));
}

TEST_CASE("stft0_measure examples") {
    const ComplexVector c{Complex(1.0), I, Complex(2, -1)};
    {
        const ComplexVector h = stft0_measure(make_pw_signal(0.5, 0.0, c), delta_window(0.5));
        CHECK(h == c);
    }
    {
        const ComplexVector h = stft0_measure(make_pw_signal(1.0, 0.0, c), delta_window(1.0));
        CHECK(h == scaled(c, 0.5));
    }
    {
        const ComplexVector h =
            stft0_measure(make_pw_signal(0.5, 0.0, ComplexVector{Complex(1.0), I}), make_window(RealVector{1.0, 1.0}, 0.5));
        // h_n = c_n + c_{n+1} on n = -1, 0, 1
        CHECK(h.lo() == -1);
        CHECK(h.size() == 3);
        CHECK(h[-1] == Complex(1.0));
        CHECK(h[0] == Complex(1.0, 1.0));
        CHECK(h[1] == I);
    }
    CHECK_THROWS_AS(stft0_measure(make_pw_signal(1.0, 0.0, c), delta_window(0.5)), Error);
}

TEST_CASE("cross-correlation formula against quadrature") {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 5; ++t) {
        const PWSignal s = make_pw_signal(0.5, 0.0, oracle::random_complex(rng, 5 + static_cast<Index>(rng() % 4)));
        const Window w = random_window(rng, 2 + static_cast<Index>(rng() % 3));
        const ComplexVector h = stft0_measure(s, w);
        for (Index n = h.lo() - 1; n <= h.hi(); ++n)
            CHECK(std::abs(oracle::stft_quadrature(s, w, s.grid_point(n), 1000.0) - h[n]) <= 1e-6);
    }
}

TEST_CASE("linearity and conjugation equivariance") {
    std::mt19937_64 rng(11);
    const Window w = random_window(rng, 3);
    const PWSignal f = make_pw_signal(0.5, 0.0, oracle::random_complex(rng, 8));
    const PWSignal g = make_pw_signal(0.5, 0.0, oracle::random_complex(rng, 8));
    const Complex alpha(0.7, -1.3);
    const PWSignal comb = make_pw_signal(0.5, 0.0, ComplexVector(0, alpha * f.coeffs.values() + g.coeffs.values()));
    const ComplexVector lhs = stft0_measure(comb, w);
    const ComplexVector hf = stft0_measure(f, w);
    const ComplexVector hg = stft0_measure(g, w);
    for (Index n = lhs.lo(); n < lhs.hi(); ++n) CHECK(std::abs(lhs[n] - (alpha * hf[n] + hg[n])) <= 1e-14);
    const ComplexVector hc = stft0_measure(make_pw_signal(0.5, 0.0, conj(f.coeffs)), w);
    CHECK(hc == conj(hf));
}

TEST_CASE("shifted window measurements") {
    const PWSignal s = make_pw_signal(0.5, 0.0, ComplexVector{Complex(1.0), I});
    const ComplexVector d1 = shifted_window_measure(s, delta_window(0.5), 1);
    CHECK(d1[0] == I - 1.0);
    CHECK_THROWS_AS(shifted_window_measure(s, delta_window(0.5), 3), Error);

    std::mt19937_64 rng(12);
    const PWSignal r = make_pw_signal(0.5, 0.0, oracle::random_complex(rng, 7));
    const Window w = random_window(rng, 3);
    const ComplexVector h = stft0_measure(r, w);
    const ComplexVector d = shifted_window_measure(r, w, 1);
    Complex telescoped(0.0);
    for (Index n = d.lo(); n < d.hi(); ++n) telescoped += d[n];
    CHECK(std::abs(telescoped) <= 1e-14);  // h vanishes on both ends of the sum
    Complex partial(0.0);
    for (Index n = h.lo(); n < h.hi(); ++n) partial += d[n];
    CHECK(std::abs(partial + h[h.lo()]) <= 1e-14);  // h(hi) - h(lo) = -h(lo)

    const PWSignal zero = make_pw_signal(0.5, 0.0, ComplexVector::zeros(0, 4));
    const ComplexVector dz = shifted_window_measure(zero, w, 2);
    CHECK(norm(dz) == 0.0);
}

TEST_CASE("stft identity window reduces to the adjacent recursion") {
    std::mt19937_64 rng(13);
    const ComplexVector c = oracle::random_generic(rng, 16);
    const PWSignal s = make_pw_signal(0.5, 0.0, c);
    const StftRecovery r = stft_recover(stft_structured_samples(s, delta_window(0.5)), delta_window(0.5), 0.0);
    const PWSignal direct = pw_recover_adjacent(make_adjacent12_samples(c), 0.5, 0.0);
    CHECK(dist_conj(r.signal.coeffs, direct.coeffs).distance <= 1e-12 * norm(c));
    CHECK(r.deconvolution_residual <= 1e-12);
}

TEST_CASE("stft end-to-end with window (1, 0.5)") {
    std::mt19937_64 rng(14);
    const Window w = make_window(RealVector{1.0, 0.5}, 0.5);
    int done = 0;
    while (done < 40) {
        const ComplexVector c = oracle::random_complex(rng, 16);
        const PWSignal s = make_pw_signal(0.5, 0.0, c);
        const ComplexVector h = stft0_measure(s, w);
        bool generic = true;
        for (Index n = h.lo(); generic && n + 1 < h.hi(); ++n)
            generic = std::abs(h[n]) * std::abs(h[n + 1]) - std::abs((h[n] * std::conj(h[n + 1])).real()) > 1e-6;
        if (!generic) continue;
        const StftRecovery r = stft_recover(stft_structured_samples(s, w), w, 0.0);
        CHECK(dist_conj(r.signal.coeffs, c).distance <= 1e-8 * norm(c));
        CHECK(r.signal.bandwidth == 0.5);
        ++done;
    }
}

TEST_CASE("stft recovery reports a collinear correlation pair") {
    // d = (1, -1): h_n = c_n - c_{n+1}. Choose c so h_1 and h_2 are both real.
    // With c_0 = 1, c_1 = i, c_4 = 2 - i free, picking c_2 = c_1 - 3 and
    // c_3 = c_2 - 5 gives h_1 = 3 and h_2 = 5.
    const Complex c0(1.0);
    const Complex c1 = I;
    const Complex c2 = c1 - 3.0;
    const Complex c3 = c2 - 5.0;
    const Complex c4(2.0, -1.0);
    const PWSignal s = make_pw_signal(0.5, 0.0, ComplexVector{c0, c1, c2, c3, c4});
    const Window w = make_window(RealVector{1.0, -1.0}, 0.5);
    const ComplexVector h = stft0_measure(s, w);
    REQUIRE(std::abs(h[1].imag()) < 1e-15);
    REQUIRE(std::abs(h[2].imag()) < 1e-15);
    try {
        (void)stft_recover(stft_structured_samples(s, w), w, 0.0);
        FAIL("expected AdjacentCollinear");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::AdjacentCollinear);
        CHECK(e.index() == 1);
    }
}

TEST_CASE("ill-conditioned deconvolution is rejected") {
    // binomial window (1 + z)^16: the zero of order 16 at z = -1 pushes
    // sigma_min / sigma_max of the 56 x 40 correlation matrix to about 8e-11
    Eigen::VectorXd binom = Eigen::VectorXd::Ones(17);
    for (Index k = 1; k <= 16; ++k) binom[k] = binom[k - 1] * static_cast<double>(17 - k) / static_cast<double>(k);
    const Window w = make_window(RealVector(0, binom), 0.5);
    const Window mild = make_window(RealVector{1.0, 0.5}, 0.5);
    std::mt19937_64 rng(15);
    int checked = 0;
    for (int attempt = 0; attempt < 100 && checked < 3; ++attempt) {
        const ComplexVector c = oracle::random_complex(rng, 40);
        const PWSignal s = make_pw_signal(0.5, 0.0, c);
        try {
            (void)stft_recover(stft_structured_samples(s, w), w, 0.0);
            FAIL("expected IllConditionedWindow");
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::AdjacentCollinear) continue;
            CHECK(e.kind() == ErrorKind::IllConditionedWindow);
            REQUIRE(e.value().has_value());
            CHECK(*e.value() > 0.0);
            ++checked;
        }
    }
    CHECK(checked == 3);
    // the same signal length with a well-conditioned window is fine
    const ComplexVector c = oracle::random_generic(rng, 40);
    CHECK(stft_recover(stft_structured_samples(make_pw_signal(0.5, 0.0, c), mild), mild, 0.0).min_singular_value > 0.1);
}
