#pragma once

namespace soam {

/// One explicit step of dh/dt = (alpha * (max - h) - 1) / tau.
/// Decays from `max` toward the fixed point max - 1/alpha.
inline double habituate(double h, double max, double alpha, double tau, double dt = 1.0) {
  return h + dt * (alpha * (max - h) - 1.0) / tau;
}

/// One explicit step of dh/dt = (alpha / tau) * (max - h). Recovers toward `max`.
inline double dishabituate(double h, double max, double alpha, double tau, double dt = 1.0) {
  return h + dt * (alpha / tau) * (max - h);
}

}  // namespace soam
