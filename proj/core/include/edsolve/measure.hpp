#pragma once
// Local quality measurements: error factor eps(P,q), condition factor
// delta(P,q), and the decay factor alpha(P).

#include "edsolve/energy.hpp"

#include <limits>
#include <string>

namespace eds {

constexpr double kInfFactor = std::numeric_limits<double>::infinity();

struct PatchMeasurement {
  int patch_id = -1;
  int size = 0;
  int q = 0;
  Vec lambda_interior;  // first min(q+1, |P|) interior eigenvalues
  double eps = 0.0;     // error factor
  double delta = 0.0;   // condition factor
  double alpha = 1.0;   // decay factor (optional; 1 when not computed)
};

Vec interior_spectrum(const EnergyDecomposition& dec, const std::vector<int>& P, int count);

// 1/sqrt(lambda_{q+1}); 0 when q >= |P|; +inf when lambda_{q+1} <= 1e-12.
double error_factor(const EnergyDecomposition& dec, const std::vector<int>& P, int q);

// ||(Phi^T closed^{-1} Phi)^{-1}||_2. phi given as columns over P-local coords.
double condition_factor(const EnergyDecomposition& dec, const std::vector<int>& P,
                        const std::vector<Vec>& phi_columns);

// max_{x in U} x^T closed x / x^T interior x; >= 1, inf on singular pencil.
double alpha_factor(const EnergyDecomposition& dec, const std::vector<int>& P,
                    const HouseholderFrame& frame);

struct PartitionMeasurements {
  double eps = 0.0;    // max_j eps(P_j,q)
  double delta = 0.0;  // max_j delta(P_j,q)
  double alpha = 1.0;  // max_j alpha(P_j) if computed
  std::vector<PatchMeasurement> per_patch;
};

PartitionMeasurements partition_measurements(const EnergyDecomposition& dec,
                                             const Partition& part, int q,
                                             bool with_alpha = false);

// CSV: patch_id,size,lambda_1..lambda_{q+1},eps,delta,alpha (fixed order).
void write_measurement_csv(const std::string& path, const PartitionMeasurements& m, int q);

}  // namespace eds
