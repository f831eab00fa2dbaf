#include "spca/model.hpp"

#include <cmath>
#include <string>

#include "spca/error.hpp"

namespace spca {

OrthonormalFrame::OrthonormalFrame(Matrix basis, double tolerance) : basis_(std::move(basis)) {
  require_finite(basis_, "OrthonormalFrame");
  if (basis_.cols() > basis_.rows()) {
    throw Error(ErrorKind::invalid_argument, "OrthonormalFrame: more columns than rows");
  }
  const Matrix gram = basis_.transpose() * basis_;
  const double dev = (gram - Matrix::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff();
  if (dev > tolerance) {
    throw Error(ErrorKind::invalid_argument,
                "OrthonormalFrame: columns not orthonormal (max deviation " + std::to_string(dev) +
                    ")");
  }
}

void normalize_column_signs(Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (std::abs(m(i, j)) > 1e-12) {
        if (m(i, j) < 0) m.col(j) *= -1.0;
        break;
      }
    }
  }
}

SpikedModel::SpikedModel(OrthonormalFrame frame, std::vector<double> spikes, double noise_sd)
    : frame_(std::move(frame)), spikes_(std::move(spikes)), noise_sd_(noise_sd) {
  if (spikes_.empty()) throw Error(ErrorKind::invalid_argument, "SpikedModel: no spikes");
  if (static_cast<Index>(spikes_.size()) != frame_.r()) {
    throw Error(ErrorKind::dimension_mismatch, "SpikedModel: spike count differs from frame rank");
  }
  for (std::size_t i = 0; i < spikes_.size(); ++i) {
    if (!(spikes_[i] > 0.0) || !std::isfinite(spikes_[i])) {
      throw Error(ErrorKind::invalid_argument, "SpikedModel: spikes must be positive and finite");
    }
    if (i > 0 && spikes_[i] > spikes_[i - 1]) {
      throw Error(ErrorKind::invalid_argument, "SpikedModel: spikes must be non-increasing");
    }
  }
  if (!(noise_sd_ >= 0.0) || !std::isfinite(noise_sd_)) {
    throw Error(ErrorKind::invalid_argument, "SpikedModel: noise_sd must be finite and non-negative");
  }
}

Matrix SpikedModel::spike_scale() const {
  Vector d(r());
  for (Index i = 0; i < r(); ++i) d(i) = std::sqrt(spikes_[i]);
  return d.asDiagonal();
}

Matrix covariance_of(const SpikedModel& model) {
  const Matrix& v = model.frame().basis();
  Vector lambda(model.r());
  for (Index i = 0; i < model.r(); ++i) lambda(i) = model.spikes()[i];
  Matrix sigma = v * lambda.asDiagonal() * v.transpose();
  sigma.diagonal().array() += model.noise_sd() * model.noise_sd();
  // Exact symmetry; the triple product can differ in the last bit.
  return (sigma + sigma.transpose()) / 2.0;
}

Dataset generate(const SpikedModel& model, Index n, Seed seed, bool retain_latents) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "generate: n must be at least 1");
  Rng rng(seed);
  Matrix u = rng.normal_matrix(n, model.r());
  Matrix z = rng.normal_matrix(n, model.p());

  Dataset out;
  out.seed = seed;
  out.x = (u * model.spike_scale()) * model.frame().basis().transpose();
  out.x.noalias() += model.noise_sd() * z;
  if (retain_latents) {
    out.latent_u = std::move(u);
    out.latent_z = std::move(z);
  }
  return out;
}

}  // namespace spca
