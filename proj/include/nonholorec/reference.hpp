#pragma once

#include <vector>

#include "nonholorec/system.hpp"

// Closed-form and scalar-root references, independent of the DLA and reduced steppers.
namespace nonholorec::reference {

// r_0, ..., r_steps solving
//   (r_{k+1} - r_k) - (r_k - r_{k-1}) + r_k ((r_{k+1}^2 - r_k^2) - (r_k^2 - r_{k-1}^2))/2 = 0
// on the branch continuous with the linear case, by bisection and a Newton polish.
std::vector<double> particle_recurrence(double r0, double r1, int steps);

// (x_k | y_k) = (r_k | y0 + (r_k^2 - r0^2)/2).
DiscreteCurve particle_2d(const BundleSpec& bundle, const BundlePoint& q0, const BundlePoint& q1, int steps);

// (x_k, y_k | z_k) = (r_k, y0 + (r_k^2 - r0^2)/2 | z0 + k (z1 - z0)).
DiscreteCurve particle_3d(const BundleSpec& bundle, const BundlePoint& q0, const BundlePoint& q1, int steps);

// Rolling disk in (phi | x, y, theta) coordinates:
//   phi_k = phi0 + k dphi, theta_k = theta0 + k dtheta,
//   x_k = x0 + A dtheta (sin(k dphi + phi0) - sin(phi0)) / (2 sin(dphi/2)),
//   y_k = y0 + A dtheta (cos(phi0) - cos(k dphi + phi0)) / (2 sin(dphi/2)).
DiscreteCurve rolling_disk(const BundleSpec& bundle, double radius, const BundlePoint& q0, const BundlePoint& q1,
                           int steps);

// Reduced disk velocities theta_k = (x, y, theta increments):
//   (A dtheta cos(k dphi + phi0 + dphi/2), A dtheta sin(k dphi + phi0 + dphi/2), dtheta).
Vec rolling_disk_theta(double radius, const BundlePoint& q0, const BundlePoint& q1, int k);

}  // namespace nonholorec::reference
