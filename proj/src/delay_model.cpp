#include "svcache/delay_model.hpp"

namespace svcache {

DelayModel::DelayModel(const ContentLibrary& lib, const NetworkGeometry& geoms,
                       const RadioConfig& radio)
    : lib_(&lib),
      d2d_(geoms.d2d, radio.sir_threshold),
      sbs_(geoms.sbs, radio.sir_threshold),
      mbs_success_(stp_mbs(geoms.mbs.pathloss(), radio.sir_threshold)) {
  const double se = radio.spectral_efficiency();
  d2d_spb_ = 1.0 / (radio.bandwidth_d2d * se);
  sbs_spb_ = 1.0 / (radio.bandwidth_sbs * se);
  mbs_spb_ = 1.0 / radio.backhaul_rate + mbs_success_ / (radio.bandwidth_mbs * se);
}

double DelayModel::cell_delay_from_hits(double bits, double hit_d, double hit_s) const {
  const double miss_d = 1.0 - hit_d;
  return bits * (hit_d * d2d_spb_ + miss_d * hit_s * sbs_spb_ +
                 miss_d * (1.0 - hit_s) * mbs_spb_);
}

double DelayModel::cell_delay(std::size_t f, std::size_t l, double p_d, double p_s) const {
  return cell_delay_from_hits(lib_->super_layer_size(f, l), d2d_.hit_term(p_d),
                              sbs_.hit_term(p_s));
}

void DelayModel::check_shape(const CachingPolicy& policy) const {
  const auto& sizes = lib_->super_layer_sizes();
  if (!policy.d2d.same_shape(sizes) || !policy.sbs.same_shape(sizes))
    throw ConfigError("policy", "matrices must be " + std::to_string(sizes.files()) + "x" +
                                    std::to_string(sizes.layers()));
}

DelayBreakdown DelayModel::breakdown(const CachingPolicy& policy) const {
  check_shape(policy);
  const std::size_t F = lib_->file_count();
  const std::size_t L = lib_->layer_count();
  DelayBreakdown out{LayerMatrix(F, L), LayerMatrix(F, L), LayerMatrix(F, L), 0.0};
  for (std::size_t f = 1; f <= F; ++f) {
    for (std::size_t l = 1; l <= L; ++l) {
      const double c = lib_->super_layer_size(f, l);
      const double hd = d2d_.hit_term(policy.d2d(f, l));
      const double hs = sbs_.hit_term(policy.sbs(f, l));
      out.d2d(f, l) = hd * c * d2d_spb_;
      out.sbs(f, l) = (1.0 - hd) * hs * c * sbs_spb_;
      out.mbs(f, l) = (1.0 - hd) * (1.0 - hs) * c * mbs_spb_;
      out.total += lib_->quality_preference(f, l) *
                   (out.d2d(f, l) + out.sbs(f, l) + out.mbs(f, l));
    }
  }
  return out;
}

double DelayModel::total(const CachingPolicy& policy) const {
  check_shape(policy);
  double sum = 0.0;
  for (std::size_t f = 1; f <= lib_->file_count(); ++f)
    for (std::size_t l = 1; l <= lib_->layer_count(); ++l)
      sum += lib_->quality_preference(f, l) *
             cell_delay(f, l, policy.d2d(f, l), policy.sbs(f, l));
  return sum;
}

double DelayModel::all_miss_delay() const {
  double sum = 0.0;
  for (std::size_t f = 1; f <= lib_->file_count(); ++f)
    for (std::size_t l = 1; l <= lib_->layer_count(); ++l)
      sum += lib_->quality_preference(f, l) * lib_->super_layer_size(f, l);
  return sum * mbs_spb_;
}

double partial_delay_d2d(std::size_t f, std::size_t l, double p_d, const ContentLibrary& lib,
                         const TierGeometry& geom_d, const RadioConfig& radio) {
  const double c = lib.super_layer_size(f, l);
  return hit_term(p_d, geom_d, radio.sir_threshold) * c /
         (radio.bandwidth_d2d * radio.spectral_efficiency());
}

double partial_delay_sbs(std::size_t f, std::size_t l, double p_d, double p_s,
                         const ContentLibrary& lib, const TierGeometry& geom_d,
                         const TierGeometry& geom_s, const RadioConfig& radio) {
  const double c = lib.super_layer_size(f, l);
  const double hd = hit_term(p_d, geom_d, radio.sir_threshold);
  const double hs = hit_term(p_s, geom_s, radio.sir_threshold);
  return (1.0 - hd) * hs * c / (radio.bandwidth_sbs * radio.spectral_efficiency());
}

double partial_delay_mbs(std::size_t f, std::size_t l, double p_d, double p_s,
                         const ContentLibrary& lib, const NetworkGeometry& geoms,
                         const RadioConfig& radio) {
  const double c = lib.super_layer_size(f, l);
  const double hd = hit_term(p_d, geoms.d2d, radio.sir_threshold);
  const double hs = hit_term(p_s, geoms.sbs, radio.sir_threshold);
  const double pm = stp_mbs(geoms.mbs.pathloss(), radio.sir_threshold);
  return (1.0 - hd) * (1.0 - hs) * c *
         (1.0 / radio.backhaul_rate + pm / (radio.bandwidth_mbs * radio.spectral_efficiency()));
}

DelayBreakdown overall_delay(const CachingPolicy& policy, const ContentLibrary& lib,
                             const NetworkGeometry& geoms, const RadioConfig& radio) {
  return DelayModel(lib, geoms, radio).breakdown(policy);
}

double hit_rate(std::size_t f, std::size_t l, double p_d, double p_s,
                const ContentLibrary& lib, const NetworkGeometry& geoms,
                const RadioConfig& radio) {
  (void)lib.super_layer_size(f, l);  // index check
  const double hd = hit_term(p_d, geoms.d2d, radio.sir_threshold);
  const double hs = hit_term(p_s, geoms.sbs, radio.sir_threshold);
  return 1.0 - (1.0 - hd) * (1.0 - hs);
}

}  // namespace svcache
