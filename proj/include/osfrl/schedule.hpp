#pragma once

#include <cstdint>
#include <vector>

namespace osfrl {

enum class RadiusMode { theory, experiment };

// Horizon bookkeeping shared by all learners. T must equal H*K.
struct RateParams {
  int H = 1;
  int A = 1;
  long K = 1;
  long long T = 1;
  RadiusMode mode = RadiusMode::experiment;

  void validate() const;  // throws std::invalid_argument
};

// Learning rate alpha_k = (H+1)/(H+k).
double alpha(long k, int H);

// Backward weight profile (w_0, ..., w_t) with
// w_0 = prod_{j=1..t}(1 - alpha_j), w_i = alpha_i * prod_{j=i+1..t}(1 - alpha_j).
std::vector<double> weight_profile(long t, int H);

// Elimination threshold after k-1 completed updates.
// theory mode: 8*sqrt(H^5 * 9*ln(A*T)) / sqrt(k-1), +inf at k = 1.
// experiment mode: sqrt(H * ln(H*K*A) / k).
double confidence_radius(long k, const RateParams& params);

// Incremental running sums over the weight profile. Advancing from t-1
// to t rescales every existing weight by (1 - alpha_t) and appends
// alpha_t, so sums, squared sums, the max weight and the 1/sqrt(i)
// weighted sum all update in O(1).
struct WeightSums {
  long t = 0;
  double sum = 0.0;       // sum_i w_i, i >= 1
  double sum_sq = 0.0;    // sum_i w_i^2
  double max_w = 0.0;     // max_i w_i
  double sum_inv_sqrt = 0.0;  // sum_i w_i / sqrt(i)
  double w0 = 1.0;        // weight of the optimistic init

  void advance(int H);
};

}  // namespace osfrl
