#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "elastic/core.hpp"

namespace elastic {

/// Raw sensor samples with their timestamps (seconds).
///
/// Timestamps must be strictly increasing and every value finite. The
/// ingestion layer additionally enforces its own minimum sample count.
class RawRecording {
 public:
  RawRecording(std::vector<double> timestamps, std::vector<double> samples,
               std::optional<double> rate_hint = std::nullopt);

  const std::vector<double>& timestamps() const { return timestamps_; }
  const std::vector<double>& samples() const { return samples_; }
  std::optional<double> rate_hint() const { return rate_hint_; }
  std::size_t size() const { return samples_.size(); }

 private:
  std::vector<double> timestamps_;
  std::vector<double> samples_;
  std::optional<double> rate_hint_;
};

/// Linear interpolation of the recording onto a uniform n-point grid spanning
/// its first to last timestamp, reported on normalized time [0, 1].
Trajectory resample(const RawRecording& rec, std::size_t n, TrajectoryMeta meta = {});

/// Digital IIR filter in transfer-function form, a[0] == 1.
struct FilterCoefficients {
  std::vector<double> b;
  std::vector<double> a;
};

/// Butterworth low-pass design via analog prototype and bilinear transform.
/// `cutoff_ratio` is the -3 dB frequency as a fraction of Nyquist.
FilterCoefficients design_butterworth_lowpass(int order, double cutoff_ratio);

/// Zero-phase (forward-backward) Butterworth low-pass with odd-reflection
/// padding of 3*order samples at each end.
Trajectory butterworth_lowpass(const Trajectory& traj, int order = 3, double cutoff_ratio = 0.1);

/// d/dt of the trajectory with respect to normalized time.
Trajectory derivative(const Trajectory& traj);

}  // namespace elastic
