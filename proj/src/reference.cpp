#include "nonholorec/reference.hpp"

#include <cmath>
#include <limits>

#include "nonholorec/error.hpp"

namespace nonholorec::reference {

namespace {

// Root of the quadratic recurrence on the branch where d/ds > 0.
double next_point(double r_prev, double r) {
  auto f = [&](double s) { return s - 2.0 * r + r_prev + 0.5 * r * (s * s - 2.0 * r * r + r_prev * r_prev); };
  const double guess = 2.0 * r - r_prev;
  const double vertex = r != 0.0 ? -1.0 / r : 0.0;

  double lo = guess;
  double hi = guess;
  bool bracketed = false;
  for (double width = 1e-3 * (1.0 + std::abs(guess)); width < 1e12; width *= 2.0) {
    lo = guess - width;
    hi = guess + width;
    if (r > 0.0) lo = std::max(lo, vertex);
    if (r < 0.0) hi = std::min(hi, vertex);
    if (f(lo) <= 0.0 && f(hi) >= 0.0) {
      bracketed = true;
      break;
    }
  }
  if (!bracketed) throw NumericalError("recurrence has no root on the physical branch");

  for (int i = 0; i < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(lo)); ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  double s = 0.5 * (lo + hi);
  for (int i = 0; i < 4 && std::abs(f(s)) > 1e-14; ++i) s -= f(s) / (1.0 + r * s);
  return s;
}

// (sin(k d + p) - sin p) / (2 sin(d/2)) and its cosine partner, with the d -> 0 limit.
double sine_quotient(int k, double d, double p) {
  double denom = 2.0 * std::sin(0.5 * d);
  if (denom == 0.0) return k * std::cos(p);
  return (std::sin(k * d + p) - std::sin(p)) / denom;
}

double cosine_quotient(int k, double d, double p) {
  double denom = 2.0 * std::sin(0.5 * d);
  if (denom == 0.0) return k * std::sin(p);
  return (std::cos(p) - std::cos(k * d + p)) / denom;
}

}  // namespace

std::vector<double> particle_recurrence(double r0, double r1, int steps) {
  if (steps < 1) throw DimensionError("recurrence needs at least one step");
  std::vector<double> r{r0, r1};
  r.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 1; k < steps; ++k) r.push_back(next_point(r[r.size() - 2], r.back()));
  return r;
}

DiscreteCurve particle_2d(const BundleSpec& bundle, const BundlePoint& q0, const BundlePoint& q1, int steps) {
  const double x0 = q0.base[0];
  const double y0 = q0.fiber.coords[0];
  DiscreteCurve out;
  for (double x : particle_recurrence(x0, q1.base[0], steps)) {
    out.push_back(bundle.point(Vec::Constant(1, x), Vec::Constant(1, y0 + 0.5 * (x * x - x0 * x0))));
  }
  return out;
}

DiscreteCurve particle_3d(const BundleSpec& bundle, const BundlePoint& q0, const BundlePoint& q1, int steps) {
  const double x0 = q0.base[0];
  const double y0 = q0.base[1];
  const double z0 = q0.fiber.coords[0];
  const double dz = q1.fiber.coords[0] - z0;
  DiscreteCurve out;
  int k = 0;
  for (double x : particle_recurrence(x0, q1.base[0], steps)) {
    out.push_back(bundle.point(Vec{{x, y0 + 0.5 * (x * x - x0 * x0)}}, Vec::Constant(1, z0 + k * dz)));
    ++k;
  }
  return out;
}

DiscreteCurve rolling_disk(const BundleSpec& bundle, double radius, const BundlePoint& q0, const BundlePoint& q1,
                           int steps) {
  const double phi0 = q0.base[0];
  const double dphi = angle_difference(phi0, q1.base[0]);
  const double dtheta = angle_difference(q0.fiber.coords[2], q1.fiber.coords[2]);
  DiscreteCurve out;
  for (int k = 0; k <= steps; ++k) {
    Vec fiber{{q0.fiber.coords[0] + radius * dtheta * sine_quotient(k, dphi, phi0),
               q0.fiber.coords[1] + radius * dtheta * cosine_quotient(k, dphi, phi0),
               q0.fiber.coords[2] + k * dtheta}};
    out.push_back(bundle.point(Vec::Constant(1, phi0 + k * dphi), fiber));
  }
  return out;
}

Vec rolling_disk_theta(double radius, const BundlePoint& q0, const BundlePoint& q1, int k) {
  const double phi0 = q0.base[0];
  const double dphi = angle_difference(phi0, q1.base[0]);
  const double dtheta = angle_difference(q0.fiber.coords[2], q1.fiber.coords[2]);
  const double angle = k * dphi + phi0 + 0.5 * dphi;
  return Vec{{radius * dtheta * std::cos(angle), radius * dtheta * std::sin(angle), dtheta}};
}

}  // namespace nonholorec::reference
