// Copyright 2026 The kerrzz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kerrzz/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kerrzz/error.hpp"
#include "kerrzz/units.hpp"

namespace kerrzz {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// The integrands are analytic on each half of the schedule; a 31-point rule
// with a few bisections reaches round-off (depth 5 already agrees with depth 10
// to 2e-16). Deeper recursion only chases noise and costs 30x the evaluations.
constexpr double kQuadratureTolerance = 1e-12;
constexpr unsigned kQuadratureDepth = 6;

// x/T - sin(2 pi x / T) / (2 pi)
double smooth_step(double x, double period) {
  return x / period - std::sin(kTwoPi * x / period) / kTwoPi;
}

template <class F>
double integrate(F&& f, double a, double b) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, kQuadratureDepth,
                                                                      kQuadratureTolerance, &err);
}

}  // namespace

void DetuningSchedule::validate() const {
  if (!(alpha_min > 0.0) || !(alpha_max >= alpha_min) || !(alpha_max < 1.0)) {
    std::ostringstream os;
    os << "need 0 < alpha_min <= alpha_max < 1, got alpha_min=" << alpha_min
       << ", alpha_max=" << alpha_max;
    throw Error(ErrorKind::invalid_argument, os.str());
  }
  if (!(t_f > 0.0)) throw Error(ErrorKind::invalid_argument, "gate time must be positive");
  if (!(g > 0.0) || !(alpha > 0.0)) throw Error(ErrorKind::invalid_argument, "g and alpha must be positive");
}

DetuningSchedule table1_schedule(double t_f, double alpha_max) {
  DetuningSchedule s;
  s.alpha_min = 0.04;
  s.alpha_max = alpha_max;
  s.t_f = t_f;
  s.g = units::mhz(10.0);
  s.alpha = 2.0;
  return s;
}

double lambda_profile(double x, const DetuningSchedule& s) {
  const double period = s.period();
  const double slack = 1e-12 * period;
  if (x < -slack || x > 2.0 * period + slack) {
    std::ostringstream os;
    os << "lambda evaluated at x=" << x << " outside [0, 2T] with T=" << period;
    throw Error(ErrorKind::out_of_range, os.str());
  }
  x = std::clamp(x, 0.0, 2.0 * period);
  const double span = s.alpha_max - s.alpha_min;
  if (x <= period) return s.alpha_min + span * smooth_step(x, period);
  return 2.0 * s.alpha_max - s.alpha_min - span * smooth_step(x, period);
}

double lambda_derivative(double x, const DetuningSchedule& s) {
  const double period = s.period();
  const double span = s.alpha_max - s.alpha_min;
  const double slope = span * (1.0 - std::cos(kTwoPi * x / period)) / period;
  return x <= period ? slope : -slope;
}

double lambda_integral(double u, const DetuningSchedule& s) {
  const double period = s.period();
  const double span = s.alpha_max - s.alpha_min;
  const double wobble = period / (kTwoPi * kTwoPi) * (1.0 - std::cos(kTwoPi * u / period));
  if (u <= period) {
    return s.alpha_min * u + span * (u * u / (2.0 * period) - wobble);
  }
  return (2.0 * s.alpha_max - s.alpha_min) * u - span * (u * u / (2.0 * period) + period - wobble);
}

double solve_u(double t, const DetuningSchedule& s) {
  const double slack = 1e-12 * s.t_f;
  if (t < -slack || t > s.t_f + slack) {
    std::ostringstream os;
    os << "time " << t << " outside [0, t_f=" << s.t_f << "]";
    throw Error(ErrorKind::out_of_range, os.str());
  }
  t = std::clamp(t, 0.0, s.t_f);
  const double period = s.period();
  double lo = 0.0;
  double hi = 2.0 * period;
  const double tol = 1e-13 * period;
  int iterations = 0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (lambda_integral(mid, s) < t) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (++iterations > 200) {
      throw Error(ErrorKind::no_convergence, "bisection for u(t) did not converge");
    }
  }
  double u = 0.5 * (lo + hi);
  // d/du lambda_integral = lambda(u) >= alpha_min > 0
  u -= (lambda_integral(u, s) - t) / lambda_profile(u, s);
  return std::clamp(u, 0.0, 2.0 * period);
}

double delta1_of_t(double t, const DetuningSchedule& s) {
  return 2.0 * s.g * s.alpha / lambda_profile(solve_u(t, s), s);
}

double theta_of_schedule(const DetuningSchedule& s) {
  s.validate();
  const auto excess = [&s](double t) { return lambda_profile(solve_u(t, s), s) - s.alpha_min; };
  const double half = 0.5 * s.t_f;
  const double area = integrate(excess, 0.0, half) + integrate(excess, half, s.t_f);
  return -2.0 * s.g * s.alpha * area;
}

double theta_direct(const DetuningSchedule& s) {
  s.validate();
  const double delta2 = s.delta2();
  const auto integrand = [&](double t) { return 1.0 / delta1_of_t(t, s) + 1.0 / delta2; };
  const double half = 0.5 * s.t_f;
  const double area = integrate(integrand, 0.0, half) + integrate(integrand, half, s.t_f);
  return -4.0 * s.g * s.g * s.alpha * s.alpha * area;
}

double theta_substituted(const DetuningSchedule& s) {
  s.validate();
  const auto sq = [&s](double u) {
    const double l = lambda_profile(u, s);
    return l * l;
  };
  const double period = s.period();
  const double area = integrate(sq, 0.0, period) + integrate(sq, period, 2.0 * period);
  return -2.0 * s.g * s.alpha * (area - s.alpha_min * s.t_f);
}

double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                               double tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

double find_alpha_max(double target_theta, const DetuningSchedule& base, SearchMode mode,
                      const std::function<double(double)>& infidelity,
                      const AlphaMaxSearch& search) {
  const double lower = std::max(search.lower, base.alpha_min);
  const double upper = search.upper;
  const auto theta_at = [&base](double amax) {
    DetuningSchedule s = base;
    s.alpha_max = amax;
    return theta_of_schedule(s);
  };

  // Theta decreases monotonically with alpha_max.
  double seed = std::numeric_limits<double>::quiet_NaN();
  const double theta_hi = theta_at(upper);
  if (theta_hi <= target_theta && theta_at(lower) >= target_theta) {
    double lo = lower;
    double hi = upper;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      if (theta_at(mid) > target_theta) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    seed = 0.5 * (lo + hi);
  }

  if (mode == SearchMode::coarse) {
    if (std::isnan(seed)) {
      std::ostringstream os;
      os << "Theta=" << target_theta << " is out of reach for t_f=" << base.t_f
         << " (alpha_max=" << upper << " gives " << theta_hi << ")";
      throw Error(ErrorKind::infeasible_schedule, os.str());
    }
    return seed;
  }

  if (!infidelity) {
    throw Error(ErrorKind::invalid_argument, "refined alpha_max search needs an infidelity objective");
  }
  // Memoize: golden-section and the scan share grid points.
  std::map<double, double> cache;
  const auto objective = [&](double amax) {
    auto it = cache.find(amax);
    if (it != cache.end()) return it->second;
    const double v = infidelity(amax);
    cache.emplace(amax, v);
    return v;
  };

  double scan_lo = lower + search.scan_step;
  double scan_hi = upper - search.scan_step;
  if (!std::isnan(seed)) {
    scan_lo = std::max(scan_lo, seed - search.scan_half_width);
    scan_hi = std::min(scan_hi, seed + search.scan_half_width);
  }
  double best_x = scan_lo;
  double best_f = std::numeric_limits<double>::infinity();
  const int n = std::max(1, static_cast<int>(std::floor((scan_hi - scan_lo) / search.scan_step + 1e-9)));
  for (int i = 0; i <= n; ++i) {
    const double x = scan_lo + i * search.scan_step;
    const double f = objective(x);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  const double a = std::max(lower, best_x - search.scan_step);
  const double b = std::min(upper, best_x + search.scan_step);
  const double x = golden_section_minimize(objective, a, b, search.resolution);
  return objective(x) <= best_f ? x : best_x;
}

}  // namespace kerrzz
