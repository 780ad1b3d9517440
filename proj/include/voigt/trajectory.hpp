#pragma once

#include <map>
#include <vector>

#include "voigt/spectral.hpp"

namespace voigt {

/// Conserved and monitored quantities at one instant.
struct DiagnosticSample {
  double time = 0.0;
  double energy = 0.0;           // ||u||_2^2
  double enstrophy = 0.0;        // ||omega||_2^2
  double voigt_energy = 0.0;     // ||u||_2^2 + alpha ||grad u||_2^2
  double voigt_enstrophy = 0.0;  // ||omega||_2^2 + alpha ||grad omega||_2^2
  std::map<double, double> hs_norms;  // s -> ||u||_{s,2}

  bool operator==(const DiagnosticSample&) const = default;
};

struct Snapshot {
  double time = 0.0;
  SpectralField omega;

  bool operator==(const Snapshot&) const = default;
};

/// Output of one integration run.
struct TrajectoryRecord {
  GridSpec grid{8};
  double alpha = 0.0;
  std::vector<DiagnosticSample> samples;
  std::vector<Snapshot> snapshots;

  std::vector<double> times() const {
    std::vector<double> t;
    t.reserve(samples.size());
    for (const auto& s : samples) t.push_back(s.time);
    return t;
  }

  bool operator==(const TrajectoryRecord&) const = default;
};

}  // namespace voigt
