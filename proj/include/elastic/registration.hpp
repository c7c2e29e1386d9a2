#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "elastic/core.hpp"

namespace elastic {

/// Scalar SRVF: q = sign(β̇) sqrt(|β̇|), with q = 0 where β̇ = 0.
SrvfCurve to_srvf(const Trajectory& traj);

/// Inverse of to_srvf: β(t) = beta0 + ∫₀ᵗ q|q| ds (cumulative trapezoid).
Trajectory from_srvf(const SrvfCurve& q, double beta0, TrajectoryMeta meta = {});

/// (q ∘ γ) sqrt(γ̇), the isometric action of a warping on an SRVF.
SrvfCurve group_action(const SrvfCurve& q, const Warping& w);

/// β ∘ γ, resampled on the same grid.
Trajectory compose(const Trajectory& traj, const Warping& w);

constexpr int kDefaultMaxSlope = 7;

/// A node on the n×n warping lattice: reference index, moving index.
using LatticePoint = std::pair<std::size_t, std::size_t>;

/// Raw output of the dynamic-programming warp search.
struct WarpSearch {
  Warping warp;
  /// Corner points of the optimal piecewise-linear path, (0,0) to (n-1,n-1).
  std::vector<LatticePoint> path;
  /// Discretized cost ∫ (q_ref - (q_mov∘γ) sqrt(γ̇))² of `path`.
  double cost;
};

/// Lattice steps (Δi, Δj) with 1 <= Δi, Δj <= max_slope and gcd(Δi, Δj) = 1.
std::vector<LatticePoint> lattice_steps(int max_slope);

/// Cost of the straight lattice segment (k,l) → (i,j) for aligning q_mov to
/// q_ref: trapezoid rule over reference samples k..i, with q_mov linearly
/// interpolated along the segment and scaled by sqrt of its slope.
double segment_cost(std::span<const double> q_ref, std::span<const double> q_mov, LatticePoint from,
                    LatticePoint to);

/// Dynamic-programming search for the warp γ minimizing the discretized
/// ‖q_ref − (q_mov∘γ) sqrt(γ̇)‖² over piecewise-linear lattice paths.
/// Ties resolve toward the diagonal.
WarpSearch dp_warp_search(const SrvfCurve& q_ref, const SrvfCurve& q_mov, int max_slope = kDefaultMaxSlope);

/// Optimal warping of q_mov onto q_ref. If discretization makes the DP warp
/// score worse than the identity under group_action, the identity is returned.
Warping optimal_warping(const SrvfCurve& q_ref, const SrvfCurve& q_mov, int max_slope = kDefaultMaxSlope);

/// Elastic amplitude distance: ‖q₁ − group_action(q₂, γ*)‖.
double amplitude_distance(const Trajectory& b1, const Trajectory& b2, int max_slope = kDefaultMaxSlope);

/// arccos⟨1, sqrt(γ̇)⟩, the arc length from γ to the identity on the sphere of
/// square-root warp derivatives.
double phase_distance(const Warping& w);

/// 1 − ⟨b1, b2⟩ / (‖b1‖ ‖b2‖), clamped to [0, 2]. Throws
/// DegenerateInputError if either input has zero norm.
double cosine_distance(const Trajectory& b1, const Trajectory& b2);
double cosine_distance(std::span<const double> b1, std::span<const double> b2, const TimeGrid& grid);

/// Karcher mean of warps computed on the sphere of sqrt(γ̇).
Warping karcher_mean_warp(std::span<const Warping> warps, int max_iter = 50, double tol = 1e-8);

struct RegistrationResult {
  Trajectory mean;
  SrvfCurve mean_srvf;
  std::vector<Warping> warps;
  std::vector<Trajectory> aligned;
  int iterations = 0;
  bool converged = false;
};

struct ElasticMeanOptions {
  int max_iter = 20;
  double tol = 1e-4;
  int max_slope = kDefaultMaxSlope;
};

/// Phase-amplitude separation: alternates DP alignment of every SRVF to the
/// current template with pointwise template averaging, starting from the
/// medoid, until the relative change of the summed squared distances drops
/// to `tol`. Warps are then centered so their Karcher mean is the identity.
RegistrationResult phase_amplitude_separation(std::span<const Trajectory> curves,
                                              const ElasticMeanOptions& options = {});

/// One-pass alignment of every curve to a fixed reference; `mean` is the reference.
RegistrationResult align_to_reference(std::span<const Trajectory> curves, const Trajectory& reference,
                                      int max_slope = kDefaultMaxSlope);

}  // namespace elastic
