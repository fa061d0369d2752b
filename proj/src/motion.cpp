#include "cogradar/motion.hpp"

#include <cmath>
#include <stdexcept>

namespace cogradar {

double TargetState::range() const { return std::hypot(x, y); }

Mat transition_matrix(double T) {
  if (T < 0.0) throw std::invalid_argument("transition_matrix: negative interval");
  Mat f = Mat::identity(4);
  f(0, 2) = T;
  f(1, 3) = T;
  return f;
}

Mat process_noise_cov(double T, double sigma_w2) {
  if (T < 0.0 || sigma_w2 < 0.0) throw std::invalid_argument("process_noise_cov: negative argument");
  const double q11 = T * T * T * T / 4.0 * sigma_w2;
  const double q13 = T * T * T / 2.0 * sigma_w2;
  const double q33 = T * T * sigma_w2;
  Mat q(4, 4);
  q(0, 0) = q11;
  q(1, 1) = q11;
  q(0, 2) = q(2, 0) = q13;
  q(1, 3) = q(3, 1) = q13;
  q(2, 2) = q33;
  q(3, 3) = q33;
  return q;
}

TargetState step_target(const TargetState& s, const MotionParams& p, RngStream& rng) {
  const Mat f = transition_matrix(p.revisit_interval);
  const Vec mean = mat_vec(f, s.kinematics());
  const Vec next = sample_gaussian(mean, process_noise_cov(p.revisit_interval, p.sigma_w2), rng);
  TargetState out = s;
  out.x = next[0];
  out.y = next[1];
  out.vx = next[2];
  out.vy = next[3];
  out.age = s.age + 1;
  return out;
}

}  // namespace cogradar
