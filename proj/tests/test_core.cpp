#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "nsdm/core.hpp"

using namespace nsdm;

TEST_CASE("dot products") {
  CHECK(dot(Vector{1, 2, 2}, Vector{1, 2, 2}) == 9.0);
  CHECK(dot(Vector{1, 0}, Vector{0, 1}) == 0.0);
  CHECK(dot(Vector{-1, -2, -2}, Vector{1, 2, 2}) == -9.0);
  CHECK_THROWS_AS(dot(Vector{1, 2}, Vector{1, 2, 3}), DimensionError);
}

TEST_CASE("norms") {
  CHECK(norm(Vector{0, 0, 0}) == 0.0);
  CHECK(norm(Vector{1, 2, 2}) == 3.0);
  CHECK(norm(Vector{3, 4}) == 5.0);
  CHECK(norm(Vector{1e-200}) > 0.0);
}

TEST_CASE("axpy") {
  const Vector step = axpy(3.0, Vector{1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0}, Vector{0, 0, 0});
  CHECK(std::abs(step[0] - 1.0) <= 1e-14);
  CHECK(std::abs(step[1] - 2.0) <= 1e-14);
  CHECK(std::abs(step[2] - 2.0) <= 1e-14);

  const Vector y{4.0, -2.5};
  CHECK(axpy(0.0, Vector{9.0, 9.0}, y) == y);
  CHECK(axpy(1.0, Vector{1, 1}, Vector{-1, -1}) == Vector{0, 0});
  CHECK_THROWS_AS(axpy(1.0, Vector{1}, Vector{1, 2}), DimensionError);
}

TEST_CASE("vector construction rejects bad input") {
  CHECK_THROWS_AS(Vector(std::vector<double>{}), DimensionError);
  CHECK_THROWS_AS((Vector{1.0, std::nan("")}), NonFiniteError);
  CHECK_THROWS_AS((Vector{std::numeric_limits<double>::infinity()}), NonFiniteError);
}

TEST_CASE("Cauchy-Schwarz on random inputs") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> unif(-10.0, 10.0);
  std::uniform_int_distribution<std::size_t> dims(1, 8);
  for (int k = 0; k < 300; ++k) {
    const std::size_t d = dims(rng);
    std::vector<double> a(d), b(d);
    for (std::size_t i = 0; i < d; ++i) {
      a[i] = unif(rng);
      b[i] = unif(rng);
    }
    const Vector va(a), vb(b);
    CHECK(std::abs(dot(va, vb)) <= norm(va) * norm(vb) * (1.0 + 1e-12));
  }
}

TEST_CASE("axpy step length along a unit direction") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> u(4), x(4);
    for (std::size_t i = 0; i < 4; ++i) {
      u[i] = unif(rng);
      x[i] = unif(rng);
    }
    Vector vu(u);
    if (norm(vu) == 0.0) continue;
    vu = normalized(vu);
    const Vector vx(x);
    const double t = unif(rng);
    const double moved = norm(subtract(axpy(t, vu, vx), vx));
    CHECK(moved == doctest::Approx(std::abs(t) * norm(vu)).epsilon(1e-12));
  }
}

TEST_CASE("status names round-trip") {
  for (IterStatus s : {IterStatus::Continued, IterStatus::TerminatedZeroSubgradient,
                       IterStatus::TerminatedTolerance, IterStatus::LineSearchStall,
                       IterStatus::MaxIterations}) {
    CHECK(iter_status_from_name(iter_status_name(s)) == s);
    CHECK(is_terminal(s) == (s != IterStatus::Continued));
  }
  CHECK_THROWS_AS(iter_status_from_name("bogus"), ConfigError);
}
