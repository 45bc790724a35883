#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "sparsecut/graph.hpp"
#include "sparsecut/relaxations.hpp"

namespace sparsecut {

struct MixParams {
  double eps = 0.0;
  double delta = 0.0;

  /// Throws InputError unless 0 < eps <= delta <= 1.
  void validate() const;
};

/// G' = Gbar, H' = (1 - eps/delta) Gbar + (eps/delta) Hbar.
InstancePair mix_instance(const InstancePair& pair, const MixParams& p);

struct UnmixReport {
  double mixed_sigma = kInfiniteSparsity;     ///< sigma(G', H'; T)
  double original_sigma = kInfiniteSparsity;  ///< sigma(G, H; T)
  double threshold = 0.0;                     ///< eps / delta
  bool antecedent = false;                    ///< mixed_sigma <= 1/2
  bool holds = true;                          ///< antecedent implies original_sigma <= threshold
};

/// Checks sigma(G',H';T) <= 1/2  =>  sigma(G,H;T) <= eps/delta for one cut.
UnmixReport unmix_cut_check(const InstancePair& pair, const MixParams& p, const Cut& cut,
                            double tol = 1e-9);

struct SdpGapReport {
  MixParams params;
  double original_opt = 0.0;
  double original_sdp = 0.0;
  double mixed_opt = 0.0;
  double mixed_sdp = 0.0;
};

/// Mixes with the given parameters and measures oracle and Goemans-Linial
/// values on both instances.
std::pair<InstancePair, SdpGapReport> sdp_gap_mix(const InstancePair& pair, const MixParams& p,
                                                  const RelaxationOptions& options = {});

/// Second smallest eigenvalue of I - D^{-1/2} W D^{-1/2}.
double normalized_spectral_gap(const WeightedGraph& g);

inline constexpr double kMinSpectralGap = 0.1;

/// Simple connected d-regular graph from the configuration model, resampled
/// until its normalized spectral gap is at least kMinSpectralGap.
WeightedGraph random_regular_graph(int n, int d, std::uint64_t seed);

struct Lollipop {
  InstancePair pair;
  int k = 0;
  /// x_j = j/k along the path 0..k, 1 on the expander.
  Eigen::VectorXd witness;
};

/// 2k vertices: a unit path 0..k attached at k to an expander on k..2k-1
/// (complete for k <= 8, random 3-regular otherwise, 4-regular for odd k).
/// H is the all-ones clique with self-loops on {0, k, ..., 2k-1}.
Lollipop gen_lollipop(int k, std::uint64_t seed);

/// Random d-regular expander against the all-ones clique with self-loops.
InstancePair gen_expander_clique(int n, int d, std::uint64_t seed);

struct RandomSpec {
  int n = 8;
  double density = 0.5;
  bool rank1 = false;
  std::uint64_t seed = 0;
};

/// Connected G: random spanning tree plus each other pair with probability
/// `density`, weights uniform in [0.5, 2]. H is f f' for random f with some
/// zeros when rank1, otherwise random edges like G.
InstancePair gen_random(const RandomSpec& spec);

}  // namespace sparsecut
