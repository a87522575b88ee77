#pragma once

#include <functional>

#include "stereowave/sphere_geometry.hpp"

namespace stereowave {

//! Smooth cutoff s with supp s in [-delta, inf) and s^2(t) + s^2(-t) = 1.
class CutoffFunction {
 public:
  explicit CutoffFunction(double delta);

  double delta() const { return delta_; }
  double operator()(double t) const;

 private:
  double delta_;
};

//! Pointwise mixing weights of the orthogonal projection pair at height z:
//!   E^- g (u) = own[Minus] * g(u) + mir[Minus] * g(mirror u)
//!   E^+ g (u) = own[Plus]  * g(u) + mir[Plus]  * g(mirror u)
//! The three bands are z < -sin(delta) (E^- identity, E^+ zero), the overlap
//! band |z| <= sin(delta), and z > sin(delta) (E^- zero, E^+ identity).
struct BlendWeights {
  double own[2];
  double mir[2];

  double own_of(Hemisphere h) const { return own[h == Hemisphere::Minus ? 0 : 1]; }
  double mir_of(Hemisphere h) const { return mir[h == Hemisphere::Minus ? 0 : 1]; }
};

BlendWeights blend_weights(const CutoffFunction& s, double z);

using SphereFunction = std::function<double(const SpherePoint&)>;

//! Which algebraic form evaluates the projection: the Cartesian arcsin-z
//! branches or the polar form in theta = acos(z). They agree to rounding.
enum class ProjectionForm { Cartesian, Theta };

//! E^- g or E^+ g at one point. E^+ is evaluated as g - E^- g, so the
//! partition E^+ g + E^- g = g holds to the rounding of that single
//! subtraction (bitwise outside the overlap band).
double apply_E(Hemisphere sign, const CutoffFunction& s, const SphereFunction& g,
               const SpherePoint& x, ProjectionForm form = ProjectionForm::Cartesian);

}  // namespace stereowave
