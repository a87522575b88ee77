#include "stereowave/aww.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stereowave {

using std::numbers::pi;

CutoffFunction::CutoffFunction(double delta) : delta_(delta) {
  if (!(delta > 0.0 && delta < pi / 2.0)) {
    throw std::invalid_argument("CutoffFunction: delta must lie in (0, pi/2)");
  }
}

double CutoffFunction::operator()(double t) const {
  if (t <= -delta_) return 0.0;
  if (t >= delta_) return 1.0;
  // s(t) = exp((t-d)/(t+d)) / sqrt(exp(2(t-d)/(t+d)) + exp(2(-t-d)/(-t+d)))
  // Both exponents are <= 0 on (-delta, delta), so nothing overflows.
  const double ea = std::exp((t - delta_) / (t + delta_));
  const double eb = std::exp((-t - delta_) / (-t + delta_));
  return ea / std::sqrt(ea * ea + eb * eb);
}

BlendWeights blend_weights(const CutoffFunction& s, double z) {
  const double sd = std::sin(s.delta());
  if (z < -sd) return {{1.0, 0.0}, {0.0, 0.0}};
  if (z > sd) return {{0.0, 1.0}, {0.0, 0.0}};
  const double t = std::asin(z);
  const double a = s(-t) * s(-t);        // s^2(theta - pi/2)
  const double b = s(-t) * s(t);
  return {{a, 1.0 - a}, {b, -b}};
}

namespace {

double apply_E_minus_cartesian(const CutoffFunction& s, const SphereFunction& g,
                               const SpherePoint& x) {
  const BlendWeights w = blend_weights(s, x.z());
  const double own = w.own_of(Hemisphere::Minus);
  const double mir = w.mir_of(Hemisphere::Minus);
  double value = 0.0;
  if (own != 0.0) value += own * g(x);
  if (mir != 0.0) value += mir * g(x.mirror());
  return value;
}

double apply_E_minus_theta(const CutoffFunction& s, const SphereFunction& g,
                           const SpherePoint& x) {
  const double theta = std::acos(std::clamp(x.z(), -1.0, 1.0));
  if (theta > pi / 2.0 + s.delta()) return g(x);
  if (theta < pi / 2.0 - s.delta()) return 0.0;
  const auto xi = parametrize_inverse(x).second;  // strictly inside the band, not a pole
  const double a = s(theta - pi / 2.0);
  const double b = s(pi / 2.0 - theta);
  return a * a * g(x) + a * b * g(parametrize(pi - theta, xi));
}

}  // namespace

double apply_E(Hemisphere sign, const CutoffFunction& s, const SphereFunction& g,
               const SpherePoint& x, ProjectionForm form) {
  const double em = form == ProjectionForm::Cartesian ? apply_E_minus_cartesian(s, g, x)
                                                      : apply_E_minus_theta(s, g, x);
  if (sign == Hemisphere::Minus) return em;
  return g(x) - em;  // E^+ = Id - E
}

}  // namespace stereowave
