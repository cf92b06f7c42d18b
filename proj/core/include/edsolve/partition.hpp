#pragma once
// Adaptive bottom-up pair clustering: combines patches ordered by condition
// factor and connection strength until the prescribed error factor and
// delta*eps^2 bound hold for every patch.

#include "edsolve/measure.hpp"

#include <unordered_map>

namespace eds {

// Sum over elements touching both patches of sum_{u in Pj, v in Pj'} |u^T E v|.
double connection(const EnergyDecomposition& dec, const std::vector<int>& Pj,
                  const std::vector<int>& Pj2);

struct ClusterState {
  const EnergyDecomposition* dec = nullptr;
  int q = 1;
  std::vector<std::vector<int>> patch_vertices;  // empty slot = absorbed
  std::vector<char> active;
  std::vector<char> operated;
  std::vector<double> delta;
  std::vector<double> eps;                        // cached eps(P_j, q)
  std::vector<std::vector<Vec>> phi;              // cached interior eigenvectors
  std::vector<std::unordered_map<int, double>> con;

  static ClusterState init(const EnergyDecomposition& dec, int q);
  bool alive(int j) const { return !patch_vertices[j].empty(); }
};

// Tests the single best-connected active unoperated neighbor; merges on
// success (union kept at slot j) and returns true, otherwise leaves the
// state unchanged and returns false.
bool find_match(ClusterState& state, int j, double eps, double c);

struct ClusterReport {
  int sweeps = 0;
  int merges = 0;
  int frozen_mergeable = 0;  // inactive patches that still pass both predicates
                             // with some neighbor (possible better partition)
  PartitionMeasurements measurements;
};

struct ClusterOptions {
  int q = 1;
  bool size_weighted_sort = false;  // weight delta by patch size in the sweep order
  bool report_frozen = false;
};

Partition pair_cluster(const EnergyDecomposition& dec, double eps, double c,
                       const ClusterOptions& opts = {}, ClusterReport* report = nullptr);

struct LocalityProfile {
  std::vector<double> mean_ball_size;  // index k-1 for k = 1..k_max
  double dimension_estimate = 0.0;
  bool non_local = false;  // ball saturates immediately
};

LocalityProfile locality_profile(const EnergyDecomposition& dec, int k_max = 12,
                                 int sample_count = 32);

}  // namespace eds
