#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nsdm/linalg.hpp"
#include "nsdm/linesearch.hpp"

using namespace nsdm;

namespace {

std::function<double(double)> counted(const std::function<double(double)>& phi,
                                      std::size_t* count) {
  return [phi, count](double t) {
    ++(*count);
    return phi(t);
  };
}

}  // namespace

TEST_CASE("bracket_minimum") {
  auto quad = [](double t) { return (t - 3.0) * (t - 3.0); };
  const Bracket b = bracket_minimum(quad, 100.0);
  CHECK(b.lo <= 3.0);
  CHECK(b.hi >= 3.0);
  CHECK_FALSE(b.hit_cap);

  auto rising = [](double t) { return t * t + t; };
  const Bracket r = bracket_minimum(rising, 100.0);
  CHECK(r.lo == 0.0);
  CHECK(r.hi > 0.0);
  CHECK_FALSE(r.hit_cap);

  auto falling = [](double t) { return -t; };
  const Bracket f = bracket_minimum(falling, 100.0);
  CHECK(f.hi == 100.0);
  CHECK(f.lo < f.hi);
  CHECK(f.hit_cap);

  auto nonfinite = [](double t) { return t > 1.5 ? std::nan("") : -t; };
  CHECK_THROWS_AS(bracket_minimum(nonfinite, 100.0), NonFiniteValueError);
}

TEST_CASE("golden_section on the reference profiles") {
  auto quad = [](double t) { return (t - 3.0) * (t - 3.0); };
  CHECK(golden_section(quad, 0.0, 10.0, 1e-8) == doctest::Approx(3.0).epsilon(1e-8));

  auto kink = [](double t) { return std::abs(t - 2.0); };
  CHECK(golden_section(kink, 0.0, 10.0, 1e-8) == doctest::Approx(2.0).epsilon(1e-8));

  auto flat = [](double) { return 7.0; };
  const double t = golden_section(flat, 1.0, 4.0, 1e-8);
  CHECK(t >= 1.0);
  CHECK(t <= 4.0);
  CHECK(flat(t) == 7.0);

  CHECK_THROWS_AS(golden_section(quad, 2.0, 2.0, 1e-8), ConfigError);
}

TEST_CASE("golden_section evaluation budget") {
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    std::size_t count = 0;
    auto quad = counted([](double t) { return (t - 3.0) * (t - 3.0); }, &count);
    golden_section(quad, 0.0, 10.0, tol);
    const double bound = std::ceil(std::log(10.0 / tol) / std::log(1.0 / 0.618)) + 2.0;
    CHECK(static_cast<double>(count) <= bound);
  }
}

TEST_CASE("exact_line_search closed-form cases") {
  // phi(t) = t^2/2 - 3 t + 3 along u = y/||y|| from the origin
  const ConvexQuadraticOracle l2q("l2q", Matrix::identity(3), Vector{1, 2, 2}, 3.0);
  const Vector u = normalized(Vector{1, 2, 2});
  const LineSearchResult r = exact_line_search(l2q, Vector{0, 0, 0}, u, 100.0, 1e-8);
  CHECK(std::abs(r.t_star - 3.0) <= 1e-8);
  CHECK(r.f_at_t_star == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(r.status == LineSearchStatus::Interior);

  // piecewise-linear V with the vertex at 2
  const MaxAffineOracle vee("abs", {{Vector{1.0}, 0.0}, {Vector{-1.0}, 0.0}}, 0.0);
  const LineSearchResult v = exact_line_search(vee, Vector{2.0}, Vector{-1.0}, 100.0, 1e-8);
  CHECK(std::abs(v.t_star - 2.0) <= 1e-8);
  CHECK(std::abs(v.f_at_t_star) <= 1e-8);

  // ascent direction: minimum at the boundary t = 0
  const LineSearchResult a = exact_line_search(vee, Vector{2.0}, Vector{1.0}, 100.0, 1e-8);
  CHECK(a.t_star == 0.0);
  CHECK(a.f_at_t_star == 2.0);
  CHECK(a.status == LineSearchStatus::AtZero);
}

TEST_CASE("exact_line_search validates input") {
  const ConvexQuadraticOracle q("q", Matrix::identity(2), Vector{0, 0}, 0.0);
  CHECK_THROWS_AS(exact_line_search(q, Vector{0, 0}, Vector{1.0, 1.0}, 10.0, 1e-8),
                  NonUnitDirectionError);
  CHECK_THROWS_AS(exact_line_search(q, Vector{0, 0}, Vector{1, 0}, -1.0, 1e-8), ConfigError);
  CHECK_THROWS_AS(exact_line_search(q, Vector{0}, Vector{1, 0}, 10.0, 1e-8), DimensionError);

  // oracle goes non-finite along the ray
  const SmoothOracle sq(
      "sqrt", 1, [](const Vector& x) { return std::sqrt(1.0 - x[0]); },
      [](const Vector& x) { return Vector{-0.5 / std::sqrt(1.0 - x[0])}; }, false);
  CHECK_THROWS_AS(exact_line_search(sq, Vector{0.0}, Vector{1.0}, 10.0, 1e-8),
                  NonFiniteValueError);
}

TEST_CASE("unbounded ray reports the bracket cap") {
  const SmoothOracle lin(
      "linear", 1, [](const Vector& x) { return -x[0]; },
      [](const Vector&) { return Vector{-1.0}; }, true);
  const LineSearchResult r = exact_line_search(lin, Vector{0.0}, Vector{1.0}, 1000.0, 1e-8);
  CHECK(r.status == LineSearchStatus::AtBracketCap);
  CHECK(r.t_star == doctest::Approx(1000.0).epsilon(1e-6));
}

TEST_CASE("descent guarantee on random quadratic rays") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  std::uniform_real_distribution<double> diag(0.2, 5.0);
  for (int k = 0; k < 30; ++k) {
    const Matrix A = Matrix::diagonal({diag(rng), diag(rng), diag(rng)});
    const ConvexQuadraticOracle q("q", A, Vector{unif(rng), unif(rng), unif(rng)}, unif(rng));
    const Vector x{unif(rng), unif(rng), unif(rng)};
    Vector u{unif(rng), unif(rng), unif(rng)};
    if (norm(u) == 0.0) continue;
    u = normalized(u);
    const double f0 = q.eval(x);
    const LineSearchResult r = exact_line_search(q, x, u, 1e3, 1e-10);
    CHECK(r.f_at_t_star <= f0 + 1e-12 * (1.0 + std::abs(f0)));
    CHECK(r.t_star >= 0.0);
    CHECK(r.t_star <= 1e3);
  }
}

TEST_CASE("exactness on quadratic profiles") {
  // phi(t) = a t^2 / 2 - b t + c exactly; vertex recovered to high accuracy
  // even with a large constant offset drowning the descent in rounding.
  struct Case {
    double a, b, c;
  };
  for (const Case cs : {Case{1.0, 3.0, 3.0}, Case{0.5, 1.0, 1000.0}, Case{4.0, 0.4, -7.0}}) {
    const ConvexQuadraticOracle q("q", Matrix::diagonal({cs.a}), Vector{cs.b}, cs.c);
    const LineSearchResult r = exact_line_search(q, Vector{0.0}, Vector{1.0}, 1e3, 1e-10);
    CHECK(std::abs(r.t_star - cs.b / cs.a) <= 1e-9);
  }
}

TEST_CASE("nonconvex pre-scan finds the far valley") {
  // two valleys; the deeper one sits beyond a local barrier at t ~ 1
  auto f = [](const Vector& x) {
    const double t = x[0];
    return std::cos(t) + 0.02 * (t - 9.0) * (t - 9.0) - 1.0;
  };
  auto g = [](const Vector& x) {
    const double t = x[0];
    return Vector{-std::sin(t) + 0.04 * (t - 9.0)};
  };
  const SmoothOracle wavy("wavy", 1, f, g, false);
  const LineSearchResult r = exact_line_search(wavy, Vector{0.0}, Vector{1.0}, 50.0, 1e-10);
  // the global ray minimum is near t ~ 9.4 (cos trough shifted by the quadratic)
  CHECK(r.t_star > 8.0);
  CHECK(r.t_star < 11.0);
  CHECK(r.f_at_t_star < -1.5);
}
