#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace svcache {

/// Raised when a configuration value is physically meaningless or a formula
/// would be undefined for it. `field()` names the offending setting.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Dense row-major F x L matrix indexed with 1-based (file, layer) pairs.
class LayerMatrix {
 public:
  LayerMatrix() = default;
  LayerMatrix(std::size_t files, std::size_t layers, double fill = 0.0)
      : files_(files), layers_(layers), data_(files * layers, fill) {}

  std::size_t files() const noexcept { return files_; }
  std::size_t layers() const noexcept { return layers_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t f, std::size_t l) { return data_[index(f, l)]; }
  double operator()(std::size_t f, std::size_t l) const { return data_[index(f, l)]; }

  /// Flat 0-based access in row-major order (file-major).
  double& flat(std::size_t i) { return data_[i]; }
  double flat(std::size_t i) const { return data_[i]; }
  std::vector<double>& values() noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  bool same_shape(const LayerMatrix& o) const noexcept {
    return files_ == o.files_ && layers_ == o.layers_;
  }

 private:
  std::size_t index(std::size_t f, std::size_t l) const {
    if (f < 1 || f > files_ || l < 1 || l > layers_)
      throw std::out_of_range("LayerMatrix index (" + std::to_string(f) + "," +
                              std::to_string(l) + ") outside " +
                              std::to_string(files_) + "x" + std::to_string(layers_));
    return (f - 1) * layers_ + (l - 1);
  }

  std::size_t files_ = 0;
  std::size_t layers_ = 0;
  std::vector<double> data_;
};

/// Video catalog of F files split into L scalable layers, with M-Zipf file
/// popularity and the SD/HD quality preference model.
///
/// File and layer indices are 1-based in the public interface. The object is
/// immutable after construction; request probabilities and cumulative
/// super-layer sizes are precomputed.
class ContentLibrary {
 public:
  /// Uniform layer size for every (file, layer).
  ContentLibrary(std::size_t file_count, std::size_t layer_count,
                 double layer_size_bits, double skewness, double plateau);
  /// Heterogeneous layer sizes; `layer_sizes` must be F x L.
  ContentLibrary(LayerMatrix layer_sizes, double skewness, double plateau);

  std::size_t file_count() const noexcept { return sizes_.files(); }
  std::size_t layer_count() const noexcept { return sizes_.layers(); }
  double skewness() const noexcept { return skewness_; }
  double plateau() const noexcept { return plateau_; }
  const LayerMatrix& layer_sizes() const noexcept { return sizes_; }

  /// M-Zipf probability that file f is requested.
  double request_probability(std::size_t f) const;
  /// Joint probability that super layer l of file f is requested.
  double quality_preference(std::size_t f, std::size_t l) const;
  /// Bits in super layer l: base layer plus the first l-1 enhancement layers.
  double super_layer_size(std::size_t f, std::size_t l) const;
  /// Sum of every super-layer size in the catalog.
  double total_catalog_bits() const noexcept { return total_bits_; }

  const LayerMatrix& super_layer_sizes() const noexcept { return cumulative_; }
  const LayerMatrix& preference_matrix() const noexcept { return preference_; }

 private:
  void build();

  LayerMatrix sizes_;
  double skewness_;
  double plateau_;
  std::vector<double> file_prob_;
  LayerMatrix cumulative_;
  LayerMatrix preference_;
  double total_bits_ = 0.0;
};

}  // namespace svcache
