#include "svcache/content_model.hpp"

#include <cmath>

namespace svcache {

ContentLibrary::ContentLibrary(std::size_t file_count, std::size_t layer_count,
                               double layer_size_bits, double skewness, double plateau)
    : ContentLibrary(LayerMatrix(file_count, layer_count, layer_size_bits), skewness,
                     plateau) {}

ContentLibrary::ContentLibrary(LayerMatrix layer_sizes, double skewness, double plateau)
    : sizes_(std::move(layer_sizes)), skewness_(skewness), plateau_(plateau) {
  build();
}

void ContentLibrary::build() {
  const std::size_t F = sizes_.files();
  const std::size_t L = sizes_.layers();
  if (F < 2) throw ConfigError("content.file_count", "need at least 2 files");
  // The quality preference divides by L-1.
  if (L < 2) throw ConfigError("content.layer_count", "need at least 2 layers");
  if (!(skewness_ >= 0.0) || !std::isfinite(skewness_))
    throw ConfigError("content.skewness", "must be finite and >= 0");
  if (!(plateau_ >= 0.0) || !std::isfinite(plateau_))
    throw ConfigError("content.plateau", "must be finite and >= 0");
  for (double s : sizes_.values())
    if (!(s > 0.0) || !std::isfinite(s))
      throw ConfigError("content.layer_size", "layer sizes must be positive");

  file_prob_.resize(F);
  double norm = 0.0;
  for (std::size_t f = 1; f <= F; ++f) {
    file_prob_[f - 1] = std::pow(static_cast<double>(f) + plateau_, -skewness_);
    norm += file_prob_[f - 1];
  }
  for (double& p : file_prob_) p /= norm;

  cumulative_ = LayerMatrix(F, L);
  preference_ = LayerMatrix(F, L);
  total_bits_ = 0.0;
  const double fm1 = static_cast<double>(F - 1);
  const double lm1 = static_cast<double>(L - 1);
  for (std::size_t f = 1; f <= F; ++f) {
    double running = 0.0;
    for (std::size_t l = 1; l <= L; ++l) {
      running += sizes_(f, l);
      cumulative_(f, l) = running;
      total_bits_ += running;
    }
    const double pf = file_prob_[f - 1];
    const double fd = static_cast<double>(f);
    preference_(f, 1) = pf * (fd - 1.0) / fm1;
    const double hd = pf * (static_cast<double>(F) - fd) / (fm1 * lm1);
    for (std::size_t l = 2; l <= L; ++l) preference_(f, l) = hd;
  }
}

double ContentLibrary::request_probability(std::size_t f) const {
  if (f < 1 || f > file_prob_.size())
    throw std::out_of_range("file index " + std::to_string(f) + " outside 1.." +
                            std::to_string(file_prob_.size()));
  return file_prob_[f - 1];
}

double ContentLibrary::quality_preference(std::size_t f, std::size_t l) const {
  return preference_(f, l);
}

double ContentLibrary::super_layer_size(std::size_t f, std::size_t l) const {
  return cumulative_(f, l);
}

}  // namespace svcache
