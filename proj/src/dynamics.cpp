#include "voigt/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "voigt/diagnostics.hpp"
#include "voigt/errors.hpp"

namespace voigt {

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
    m = std::max(m, std::abs(x));
  }
  return m;
}

// Schedule of times at which something is written: every `every` time units
// and at t_end.
class EventClock {
 public:
  EventClock(std::optional<double> every, double t_end) : every_(every), t_end_(t_end) {}

  double next() const {
    if (!every_ || done_) return std::numeric_limits<double>::infinity();
    const double t = static_cast<double>(count_) * *every_;
    if (t >= t_end_ || std::abs(t - t_end_) <= 1e-9 * t_end_) return t_end_;
    return t;
  }
  void advance() {
    if (next() == t_end_) done_ = true;
    ++count_;
  }

 private:
  std::optional<double> every_;
  double t_end_;
  long count_ = 0;
  bool done_ = false;
};

}  // namespace

void SolverConfig::validate() const {
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(record_every > 0.0)) throw std::invalid_argument("record_every must be positive");
  if (snapshot_every && !(*snapshot_every > 0.0)) {
    throw std::invalid_argument("snapshot_every must be positive");
  }
  if (const auto* fixed = std::get_if<FixedStep>(&step); fixed && !(fixed->dt > 0.0)) {
    throw std::invalid_argument("fixed dt must be positive");
  }
  if (const auto* cfl = std::get_if<CflStep>(&step);
      cfl && !(cfl->courant > 0.0 && cfl->courant <= 1.0)) {
    throw std::invalid_argument("courant number must lie in (0, 1]");
  }
}

SpectralField euler_rhs(const SpectralField& omega) {
  const GridSpec& grid = omega.grid();
  const VelocityPair u = biot_savart(omega);
  const std::vector<double> u1 = inverse_transform(u.u1);
  const std::vector<double> u2 = inverse_transform(u.u2);
  const std::vector<double> w1 = inverse_transform(derivative(omega, Axis::x1));
  const std::vector<double> w2 = inverse_transform(derivative(omega, Axis::x2));

  std::vector<double> advection(grid.real_count());
  for (std::size_t i = 0; i < advection.size(); ++i) {
    advection[i] = -(u1[i] * w1[i] + u2[i] * w2[i]);
  }
  SpectralField rhs = dealias(forward_transform(advection, grid));
  rhs.zero_mean();
  if (!rhs.all_finite()) throw std::domain_error("euler_rhs: non-finite values");
  return rhs;
}

SpectralField voigt_rhs(const SpectralField& omega, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("voigt_rhs: alpha must be positive");
  return helmholtz_filter(euler_rhs(omega), alpha);
}

SpectralField vorticity_rhs(const SpectralField& omega, double alpha) {
  return alpha == 0.0 ? euler_rhs(omega) : voigt_rhs(omega, alpha);
}

SpectralField step_rk4(const SpectralField& omega, double dt, double alpha) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be positive");
  const SpectralField k1 = vorticity_rhs(omega, alpha);
  const SpectralField k2 = vorticity_rhs(omega + (0.5 * dt) * k1, alpha);
  const SpectralField k3 = vorticity_rhs(omega + (0.5 * dt) * k2, alpha);
  const SpectralField k4 = vorticity_rhs(omega + dt * k3, alpha);

  SpectralField next = omega;
  auto out = next.coeffs();
  const auto a = k1.coeffs();
  const auto b = k2.coeffs();
  const auto c = k3.coeffs();
  const auto d = k4.coeffs();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] += (dt / 6.0) * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
  }
  next = dealias(next);
  next.zero_mean();
  if (!next.all_finite()) throw std::domain_error("step_rk4: non-finite values");
  return next;
}

double cfl_dt(const VelocityPair& u, const GridSpec& grid, double courant) {
  if (!(courant > 0.0 && courant <= 1.0)) {
    throw std::invalid_argument("cfl_dt: courant number must lie in (0, 1]");
  }
  const double speed = std::max(max_abs(inverse_transform(u.u1)), max_abs(inverse_transform(u.u2)));
  if (std::isnan(speed)) throw std::domain_error("cfl_dt: non-finite velocity");
  return courant * grid.spacing() / std::max(speed, 1e-12);
}

TrajectoryRecord integrate(const SpectralField& omega0, const SolverConfig& config) {
  config.validate();
  if (!(omega0.grid() == config.grid)) {
    throw std::invalid_argument("integrate: initial field lives on a different grid");
  }

  TrajectoryRecord record;
  record.grid = config.grid;
  record.alpha = config.alpha;

  EventClock records(config.record_every, config.t_end);
  EventClock snapshots(config.snapshot_every, config.t_end);

  SpectralField omega = omega0;
  double t = 0.0;
  auto emit = [&] {
    if (t == records.next()) {
      record.samples.push_back(sample_state(omega, config.alpha, t, config.sobolev_orders));
      records.advance();
    }
    if (t == snapshots.next()) {
      record.snapshots.push_back({t, omega});
      snapshots.advance();
    }
  };
  emit();

  while (t < config.t_end) {
    const double target = std::min(records.next(), snapshots.next());
    double dt = 0.0;
    if (const auto* fixed = std::get_if<FixedStep>(&config.step)) {
      dt = fixed->dt;
    } else {
      try {
        dt = cfl_dt(biot_savart(omega), config.grid, std::get<CflStep>(config.step).courant);
      } catch (const std::domain_error&) {
        throw BlowUpError("non-finite velocity at t = " + std::to_string(t), t);
      }
    }

    const bool lands = t + dt >= target - 1e-12 * config.t_end;
    if (lands) dt = target - t;
    try {
      omega = step_rk4(omega, dt, config.alpha);
    } catch (const std::domain_error&) {
      std::ostringstream msg;
      msg << "integration blew up in the step starting at t = " << t;
      throw BlowUpError(msg.str(), t + dt);
    }
    t = lands ? target : t + dt;
    emit();
  }
  return record;
}

}  // namespace voigt
