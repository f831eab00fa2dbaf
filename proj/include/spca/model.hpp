#pragma once

#include <optional>
#include <vector>

#include "spca/frame.hpp"
#include "spca/matrix.hpp"
#include "spca/rng.hpp"

namespace spca {

// Sigma = V Lambda V' + sigma^2 I_p with lambda_1 >= ... >= lambda_r > 0.
class SpikedModel {
 public:
  SpikedModel(OrthonormalFrame frame, std::vector<double> spikes, double noise_sd = 1.0);

  const OrthonormalFrame& frame() const { return frame_; }
  const std::vector<double>& spikes() const { return spikes_; }
  double noise_sd() const { return noise_sd_; }
  Index p() const { return frame_.p(); }
  Index r() const { return frame_.r(); }

  // lambda_1 / lambda_r
  double condition_ratio() const { return spikes_.front() / spikes_.back(); }

  // diag(lambda_i^{1/2})
  Matrix spike_scale() const;

 private:
  OrthonormalFrame frame_;
  std::vector<double> spikes_;
  double noise_sd_;
};

struct Dataset {
  Matrix x;
  std::optional<Matrix> latent_u;
  std::optional<Matrix> latent_z;
  Seed seed = 0;
};

Matrix covariance_of(const SpikedModel& model);

// X = U D V' + sigma Z with U (n x r) and Z (n x p) standard normal. U is
// drawn first, then Z, each in column-major order from one mt19937_64 stream
// seeded with `seed`.
Dataset generate(const SpikedModel& model, Index n, Seed seed, bool retain_latents = false);

}  // namespace spca
