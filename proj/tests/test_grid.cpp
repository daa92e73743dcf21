#include <doctest.h>

#include <cmath>

#include "sapsim/errors.hpp"
#include "sapsim/grid.hpp"

using namespace sapsim;

TEST_CASE("gaussian construction is normalized") {
    SpatialGrid g(1024, -20.0, 20.0);
    Wavefunction psi = make_gaussian(g, 0.0, 1.0);
    CHECK(norm(psi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("off-center gaussian is fully localized on its side") {
    SpatialGrid g(1024, -20.0, 20.0);
    Wavefunction psi = make_gaussian(g, -8.0, 1.0);
    double left = 0.0;
    for (int i = 0; i < g.n(); ++i)
        if (g.x(i) < 0.0) left += std::norm(psi.amp[i]);
    left *= g.dx();
    CHECK(left == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("displaced gaussian overlap matches the closed form") {
    // <g0|g6> = exp(-Delta^2 / (4 w^2)) = exp(-9) for Delta = 6, w = 1
    SpatialGrid g(2048, -20.0, 20.0);
    Wavefunction a = make_gaussian(g, 0.0, 1.0);
    Wavefunction b = make_gaussian(g, 6.0, 1.0);
    const double expected = std::exp(-9.0);
    CHECK(std::abs(overlap(a, b)) == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("overlap is conjugate symmetric") {
    SpatialGrid g(512, -15.0, 15.0);
    Wavefunction a = make_gaussian(g, -2.0, 1.0);
    Wavefunction b = make_gaussian(g, 1.0, 1.3);
    for (int i = 0; i < g.n(); ++i) b.amp[i] *= cplx{0.6, 0.8};
    const cplx ab = overlap(a, b);
    const cplx ba = overlap(b, a);
    CHECK(ab.real() == doctest::Approx(ba.real()).epsilon(1e-12));
    CHECK(ab.imag() == doctest::Approx(-ba.imag()).epsilon(1e-12));
}

TEST_CASE("even and odd functions are orthogonal") {
    SpatialGrid g(1024, -12.0, 12.0);
    Wavefunction even(g), odd(g);
    for (int i = 0; i < g.n(); ++i) {
        const double x = g.x(i);
        even.amp[i] = std::exp(-0.5 * x * x);
        odd.amp[i] = x * std::exp(-0.5 * x * x);
    }
    normalize(even);
    normalize(odd);
    CHECK(std::abs(overlap(even, odd)) < 1e-12);
}

TEST_CASE("norm of two disjoint scaled halves") {
    SpatialGrid g(1024, -20.0, 20.0);
    Wavefunction a = make_gaussian(g, -8.0, 1.0);
    Wavefunction b = make_gaussian(g, 8.0, 1.0);
    Wavefunction sum(g);
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < g.n(); ++i) sum.amp[i] = s * (a.amp[i] + b.amp[i]);
    CHECK(norm(sum) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("zero field has zero norm") {
    SpatialGrid g(256, -5.0, 5.0);
    Wavefunction z(g);
    CHECK(norm(z) == 0.0);
}

TEST_CASE("unresolvable width and off-grid center are rejected") {
    SpatialGrid g(128, -10.0, 10.0);
    CHECK_THROWS_AS(make_gaussian(g, 0.0, 0.1), ConfigError);
    CHECK_THROWS_AS(make_gaussian(g, 9.0, 1.0), ConfigError);
}

TEST_CASE("overlap rejects mismatched grids") {
    SpatialGrid g1(256, -10.0, 10.0), g2(256, -12.0, 12.0);
    Wavefunction a = make_gaussian(g1, 0.0, 1.0);
    Wavefunction b = make_gaussian(g2, 0.0, 1.0);
    CHECK_THROWS_AS(overlap(a, b), ConfigError);
}

TEST_CASE("momentum grid is the discrete Fourier conjugate") {
    SpatialGrid g(256, -10.0, 10.0);
    CHECK(g.k(0) == 0.0);
    CHECK(g.k(1) == doctest::Approx(2.0 * M_PI / 20.0));
    CHECK(g.k(g.n() - 1) == doctest::Approx(-2.0 * M_PI / 20.0));
    CHECK(g.dx() == doctest::Approx(20.0 / 256));
}
