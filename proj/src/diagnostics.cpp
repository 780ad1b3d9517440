#include "voigt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace voigt {

namespace {

template <class Weight>
double weighted_sum(const SpectralField& f, Weight&& weight) {
  double sum = 0.0;
  f.for_each_mode([&](int k1, int k2, double w, const Complex& c) {
    sum += w * weight(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2) * std::norm(c);
  });
  return kTorusArea * sum;
}

// Real-space samples used for Lp quadrature, with the matching cell area.
struct Samples {
  std::vector<double> values;
  double cell_area;
};

Samples quadrature_samples(const SpectralField& f, bool oversample) {
  if (!oversample) {
    const double h = f.grid().spacing();
    return {inverse_transform(f), h * h};
  }
  const GridSpec fine(2 * f.grid().size());
  const double h = fine.spacing();
  return {inverse_transform(resample(f, fine)), h * h};
}

double lp_from_magnitudes(const std::vector<double>& mag, double cell_area, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : mag) m = std::max(m, v);
    return m;
  }
  double sum = 0.0;
  for (double v : mag) sum += std::pow(v, p);
  return std::pow(sum * cell_area, 1.0 / p);
}

void require_exponent(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: exponent must be >= 1");
}

}  // namespace

double sobolev_norm(const SpectralField& f, double s) {
  return std::sqrt(weighted_sum(f, [s](double ksq) { return std::pow(1.0 + ksq, s); }));
}

double l2_norm(const SpectralField& f) { return sobolev_norm(f, 0.0); }

double sobolev_norm(const VelocityPair& u, double s) {
  const double a = sobolev_norm(u.u1, s);
  const double b = sobolev_norm(u.u2, s);
  return std::sqrt(a * a + b * b);
}

double homogeneous_sobolev_norm(const SpectralField& f, double s) {
  return std::sqrt(
      weighted_sum(f, [s](double ksq) { return ksq == 0.0 ? 0.0 : std::pow(ksq, s); }));
}

double homogeneous_sobolev_norm(const VelocityPair& u, double s) {
  const double a = homogeneous_sobolev_norm(u.u1, s);
  const double b = homogeneous_sobolev_norm(u.u2, s);
  return std::sqrt(a * a + b * b);
}

double lp_norm(const SpectralField& f, double p) {
  require_exponent(p);
  const bool oversample = !(p == 2.0 || std::isinf(p));
  Samples s = quadrature_samples(f, oversample);
  for (double& v : s.values) v = std::abs(v);
  return lp_from_magnitudes(s.values, s.cell_area, p);
}

double lp_norm(std::span<const SpectralField> components, double p) {
  require_exponent(p);
  if (components.empty()) throw std::invalid_argument("lp_norm: no components");
  const bool oversample = !(p == 2.0 || std::isinf(p));
  std::vector<double> mag;
  double cell_area = 0.0;
  for (const SpectralField& c : components) {
    Samples s = quadrature_samples(c, oversample);
    if (mag.empty()) mag.assign(s.values.size(), 0.0);
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] += s.values[i] * s.values[i];
    cell_area = s.cell_area;
  }
  for (double& v : mag) v = std::sqrt(v);
  return lp_from_magnitudes(mag, cell_area, p);
}

double energy(const VelocityPair& u) {
  const double n = sobolev_norm(u, 0.0);
  return n * n;
}

double enstrophy(const SpectralField& omega) {
  const double n = l2_norm(omega);
  return n * n;
}

double voigt_energy(const VelocityPair& u, double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("voigt_energy: alpha must be >= 0");
  auto weight = [alpha](double ksq) { return 1.0 + alpha * ksq; };
  return weighted_sum(u.u1, weight) + weighted_sum(u.u2, weight);
}

double voigt_enstrophy(const SpectralField& omega, double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("voigt_enstrophy: alpha must be >= 0");
  return weighted_sum(omega, [alpha](double ksq) { return 1.0 + alpha * ksq; });
}

DiagnosticSample sample_state(const SpectralField& omega, double alpha, double time,
                              std::span<const double> sobolev_orders) {
  const VelocityPair u = biot_savart(omega);
  DiagnosticSample s;
  s.time = time;
  s.energy = energy(u);
  s.enstrophy = enstrophy(omega);
  s.voigt_energy = voigt_energy(u, alpha);
  s.voigt_enstrophy = voigt_enstrophy(omega, alpha);
  for (double order : sobolev_orders) s.hs_norms[order] = sobolev_norm(u, order);
  return s;
}

double cz_ratio(const SpectralField& omega, double p) {
  if (!(p > 2.0)) throw std::invalid_argument("cz_ratio: p must exceed 2");
  const double omega_sup = lp_norm(omega, kInfinity);
  if (omega_sup == 0.0) throw std::invalid_argument("cz_ratio: vorticity vanishes");
  const VelocityPair u = biot_savart(omega);
  const SpectralField grad[] = {derivative(u.u1, Axis::x1), derivative(u.u1, Axis::x2),
                                derivative(u.u2, Axis::x1), derivative(u.u2, Axis::x2)};
  return lp_norm(grad, p) / (p * omega_sup);
}

double gagliardo_ratio(const SpectralField& f, double p) {
  if (!(p >= 2.0)) throw std::invalid_argument("gagliardo_ratio: p must be >= 2");
  const double f_l2 = l2_norm(f);
  if (f_l2 == 0.0) throw std::invalid_argument("gagliardo_ratio: zero field");
  if (std::abs(f.mean()) > 1e-12 * f.max_abs_coeff()) {
    throw std::invalid_argument("gagliardo_ratio: field must have zero mean");
  }
  const double grad_l2 = homogeneous_sobolev_norm(f, 1.0);
  const double q = 2.0 * p / (p - 1.0);
  return lp_norm(f, q) / (std::pow(f_l2, 1.0 - 1.0 / p) * std::pow(grad_l2, 1.0 / p));
}

ErrorNorms error_norms(const TrajectoryRecord& a, const TrajectoryRecord& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("error_norms: grid mismatch");
  if (a.snapshots.empty()) throw std::invalid_argument("error_norms: records carry no snapshots");
  if (a.snapshots.size() != b.snapshots.size()) {
    throw std::invalid_argument("error_norms: time grids differ in length");
  }
  ErrorNorms e;
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    if (a.snapshots[i].time != b.snapshots[i].time) {
      throw std::invalid_argument("error_norms: time grids differ at index " + std::to_string(i));
    }
    const SpectralField diff = a.snapshots[i].omega - b.snapshots[i].omega;
    const VelocityPair du = biot_savart(diff);
    e.sup_omega_l2 = std::max(e.sup_omega_l2, l2_norm(diff));
    e.sup_u_l2 = std::max(e.sup_u_l2, sobolev_norm(du, 0.0));
    e.sup_u_h1 = std::max(e.sup_u_h1, sobolev_norm(du, 1.0));
  }
  return e;
}

std::vector<std::pair<double, double>> growth_monitor(const TrajectoryRecord& record, double s) {
  if (record.snapshots.empty()) throw std::invalid_argument("growth_monitor: no snapshots");
  std::vector<std::pair<double, double>> series;
  series.reserve(record.snapshots.size());
  for (const Snapshot& snap : record.snapshots) {
    series.emplace_back(snap.time, sobolev_norm(biot_savart(snap.omega), s));
  }
  return series;
}

}  // namespace voigt
