#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nsdm/core.hpp"
#include "nsdm/linalg.hpp"

namespace nsdm {

enum class FunctionClass { Smooth, ConvexQuadratic, MaxOfSmooth, L1Composite };

enum class SelectionRule { MinNorm, FirstGenerator };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Finite representation of a proximal subdifferential at one point:
///   Singleton   -- a gradient,
///   FiniteHull  -- convex hull of the active-piece gradients,
///   BoxProduct  -- smooth part plus a per-coordinate interval product,
///                  the shape the l1 term contributes.
class SubdifferentialDescriptor {
 public:
  enum class Form { Singleton, FiniteHull, BoxProduct };

  static SubdifferentialDescriptor singleton(Vector g);
  static SubdifferentialDescriptor finite_hull(std::vector<Vector> generators);
  static SubdifferentialDescriptor box_product(Vector smooth_part,
                                               std::vector<Interval> intervals);

  Form form() const noexcept { return form_; }
  std::size_t dim() const noexcept { return vecs_.front().dim(); }

  const Vector& singleton_value() const;
  const std::vector<Vector>& generators() const;
  const Vector& smooth_part() const;
  const std::vector<Interval>& intervals() const;

 private:
  SubdifferentialDescriptor(Form f, std::vector<Vector> vecs,
                            std::vector<Interval> intervals);

  Form form_;
  std::vector<Vector> vecs_;
  std::vector<Interval> intervals_;
};

/// Objective with an exactly computable proximal-subdifferential descriptor.
/// Oracles are immutable and their two operations are pure, so one oracle can
/// serve concurrent runs.
class ObjectiveOracle {
 public:
  virtual ~ObjectiveOracle() = default;

  const std::string& id() const noexcept { return id_; }
  std::size_t dim() const noexcept { return dim_; }
  FunctionClass function_class() const noexcept { return class_; }
  bool convex() const noexcept { return convex_; }

  double eval(const Vector& x) const;
  SubdifferentialDescriptor prox_subdifferential(const Vector& x) const;

 protected:
  ObjectiveOracle(std::string id, std::size_t dim, FunctionClass cls, bool convex);

  virtual double eval_impl(const Vector& x) const = 0;
  virtual SubdifferentialDescriptor subdiff_impl(const Vector& x) const = 0;

 private:
  std::string id_;
  std::size_t dim_;
  FunctionClass class_;
  bool convex_;
};

/// Smooth objective given by callables for the value and the gradient.
class SmoothOracle final : public ObjectiveOracle {
 public:
  using Eval = std::function<double(const Vector&)>;
  using Gradient = std::function<Vector(const Vector&)>;

  SmoothOracle(std::string id, std::size_t dim, Eval f, Gradient g, bool convex);

 private:
  double eval_impl(const Vector& x) const override;
  SubdifferentialDescriptor subdiff_impl(const Vector& x) const override;

  Eval f_;
  Gradient g_;
};

/// f(x) = 1/2 x^T A x - <b, x> + c with symmetric A. The descriptor is the
/// exact gradient A x - b.
class ConvexQuadraticOracle final : public ObjectiveOracle {
 public:
  ConvexQuadraticOracle(std::string id, Matrix A, Vector b, double c);

  const Matrix& matrix() const noexcept { return A_; }
  const Vector& linear_term() const noexcept { return b_; }
  double constant_term() const noexcept { return c_; }

 private:
  double eval_impl(const Vector& x) const override;
  SubdifferentialDescriptor subdiff_impl(const Vector& x) const override;

  Matrix A_;
  Vector b_;
  double c_;
  bool diagonal_;
};

/// f(x) = max_i (<a_i, x> + b_i) + (w/2) ||x||^2. A piece is active when its
/// value is within a relative tolerance of the max; exact ties never occur in
/// floating point, so the kink set is detected through that tolerance.
class MaxAffineOracle final : public ObjectiveOracle {
 public:
  struct Piece {
    Vector a;
    double b = 0.0;
  };

  MaxAffineOracle(std::string id, std::vector<Piece> pieces, double quadratic_weight);

  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  double quadratic_weight() const noexcept { return weight_; }

  static constexpr double kActivityTol = 1e-10;

 private:
  double eval_impl(const Vector& x) const override;
  SubdifferentialDescriptor subdiff_impl(const Vector& x) const override;

  std::vector<Piece> pieces_;
  double weight_;
};

/// f(x) = lambda ||x||_1 + 1/2 x^T A x - <b, x>. The descriptor is the exact
/// gradient of the quadratic part plus per-coordinate intervals: [-lambda,
/// lambda] at kinked coordinates, the degenerate {lambda sign(x_i)} elsewhere.
class L1CompositeOracle final : public ObjectiveOracle {
 public:
  L1CompositeOracle(std::string id, double lambda, Matrix A, Vector b);

  double lambda() const noexcept { return lambda_; }
  const Matrix& matrix() const noexcept { return A_; }
  const Vector& linear_term() const noexcept { return b_; }

  // Kink detection mirrors the max-affine activity tolerance.
  static constexpr double kKinkTol = 1e-10;

 private:
  double eval_impl(const Vector& x) const override;
  SubdifferentialDescriptor subdiff_impl(const Vector& x) const override;

  double lambda_;
  Matrix A_;
  Vector b_;
};

/// Picks one element of the set a descriptor represents. MinNorm returns the
/// minimum-norm element, whose negative is the steepest-descent direction for
/// convex objectives; FirstGenerator is kept for ablation and takes the first
/// hull generator (upper interval endpoints for a box product).
Vector select_subgradient(const SubdifferentialDescriptor& d, SelectionRule rule);

/// Projection of the origin onto conv(generators), computed by pairwise
/// Frank-Wolfe steps with closed-form step sizes. Terminates when the Wolfe
/// optimality gap max_j (<p, p> - <p, g_j>) falls below tol, so the returned
/// p satisfies ||p||^2 <= <p, q> + tol for every q in the hull.
Vector min_norm_in_hull(const std::vector<Vector>& generators, double tol = 1e-10);

}  // namespace nsdm
