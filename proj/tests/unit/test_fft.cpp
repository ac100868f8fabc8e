#include <doctest.h>

#include "quadprop/fft.hpp"
#include "quadprop/grid.hpp"

#include <cmath>
#include <random>

using namespace quadprop;

TEST_CASE("fft roundtrip and Parseval") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<cdouble> a(256);
    for (auto& v : a) v = cdouble(d(rng), d(rng));
    auto b = a;
    fft_pow2(b, -1);
    double pa = 0.0, pb = 0.0;
    for (const auto& v : a) pa += std::norm(v);
    for (const auto& v : b) pb += std::norm(v);
    CHECK(pb == doctest::Approx(pa * 256.0).epsilon(1e-12));
    fft_pow2(b, +1);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(std::abs(b[i] / 256.0 - a[i]) < 1e-12);
}

TEST_CASE("czt reproduces the plain DFT") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> d(0.0, 1.0);
    const std::size_t n = 128;
    std::vector<cdouble> a(n);
    for (auto& v : a) v = cdouble(d(rng), d(rng));
    auto ref = a;
    fft_pow2(ref, -1);
    auto out = czt(a, n, -2.0 * M_PI / static_cast<double>(n), 0.0);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(out[k] - ref[k]) < 1e-10);
}

TEST_CASE("czt against a direct sum on an incommensurate frequency step") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> d(0.0, 1.0);
    const std::size_t n = 64, m = 48;
    std::vector<cdouble> a(n);
    for (auto& v : a) v = cdouble(d(rng), d(rng));
    const double tw = 0.0371, ta = -0.211;
    auto out = czt(a, m, tw, ta);
    for (std::size_t k = 0; k < m; k += 7) {
        cdouble ref(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = ta * static_cast<double>(j) +
                               tw * static_cast<double>(j) * static_cast<double>(k);
            ref += a[j] * cdouble(std::cos(ang), std::sin(ang));
        }
        CHECK(std::abs(out[k] - ref) < 1e-10);
    }
}

TEST_CASE("band-limited resample hits analytic Gaussian values") {
    auto src = make_grid(256, 0.0, 16.0 / 256.0);
    auto state = make_state(src, gaussian_profile(src.axes[0], 0.3, 1.0, 0.8));
    // finer grid, shifted center
    auto dst = make_grid(512, 0.25, 12.0 / 512.0);
    auto re = resample(state, dst);
    for (std::size_t i = 0; i < dst.axes[0].n; i += 13) {
        const double x = dst.axes[0].point(i);
        const double u = (x - 0.3);
        const cdouble expect = std::pow(M_PI, -0.25) * std::exp(-0.5 * u * u) *
                               cdouble(std::cos(0.8 * x), std::sin(0.8 * x));
        CHECK(std::abs(re.values[i] - expect) < 1e-10);
    }
    // same-grid resample is the identity path
    auto same = resample(state, src);
    for (std::size_t i = 0; i < src.axes[0].n; i += 17)
        CHECK(std::abs(same.values[i] - state.values[i]) < 1e-14);
}

TEST_CASE("resample preserves mass of well-resolved states") {
    auto src = make_grid(256, 0.0, 20.0 / 256.0);
    auto state = make_state(src, hermite_profile(src.axes[0], 4));
    auto dst = make_grid(256, 0.0, 20.0 / 256.0 * 0.98);
    auto re = resample(state, dst);
    CHECK(mass(re) == doctest::Approx(mass(state)).epsilon(1e-10));
}
