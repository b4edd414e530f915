#include "osfrl/schedule.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace osfrl {

void RateParams::validate() const {
  if (H < 1 || A < 1 || K < 1) {
    throw std::invalid_argument("RateParams: H, A, K must be >= 1");
  }
  if (T != static_cast<long long>(H) * K) {
    throw std::invalid_argument("RateParams: T must equal H*K");
  }
}

double alpha(long k, int H) {
  if (k < 1 || H < 1) {
    throw std::invalid_argument("alpha: k and H must be >= 1");
  }
  return static_cast<double>(H + 1) / static_cast<double>(H + k);
}

std::vector<double> weight_profile(long t, int H) {
  if (t < 0 || H < 1) {
    throw std::invalid_argument("weight_profile: t >= 0, H >= 1 required");
  }
  std::vector<double> w(static_cast<std::size_t>(t) + 1, 0.0);
  w[0] = 1.0;
  for (long j = 1; j <= t; ++j) {
    const double aj = alpha(j, H);
    for (long i = 0; i < j; ++i) {
      w[static_cast<std::size_t>(i)] *= 1.0 - aj;
    }
    w[static_cast<std::size_t>(j)] = aj;
  }
  return w;
}

double confidence_radius(long k, const RateParams& params) {
  params.validate();
  if (k < 1) {
    throw std::invalid_argument("confidence_radius: k must be >= 1");
  }
  const double H = static_cast<double>(params.H);
  if (params.mode == RadiusMode::theory) {
    if (k == 1) return std::numeric_limits<double>::infinity();
    const double iota = 9.0 * std::log(static_cast<double>(params.A) *
                                       static_cast<double>(params.T));
    return 8.0 * std::sqrt(std::pow(H, 5) * iota) /
           std::sqrt(static_cast<double>(k - 1));
  }
  const double logterm = std::log(H * static_cast<double>(params.K) *
                                  static_cast<double>(params.A));
  return std::sqrt(H * logterm / static_cast<double>(k));
}

void WeightSums::advance(int H) {
  ++t;
  const double a = alpha(t, H);
  const double keep = 1.0 - a;
  sum = keep * sum + a;
  sum_sq = keep * keep * sum_sq + a * a;
  max_w = std::max(keep * max_w, a);
  sum_inv_sqrt = keep * sum_inv_sqrt + a / std::sqrt(static_cast<double>(t));
  w0 *= keep;
}

}  // namespace osfrl
