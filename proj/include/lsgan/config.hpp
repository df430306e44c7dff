#pragma once

#include <cstdint>
#include <string>

#include "lsgan/losses.hpp"
#include "lsgan/networks.hpp"
#include "lsgan/optimizer.hpp"
#include "lsgan/synthetic.hpp"

namespace lsgan {

/// Everything that determines a training run. Together with the seed this
/// fixes the run's outputs byte for byte.
struct TrainConfig {
  LossSpec loss;
  int latent_dim = 16;
  LatentKind latent_kind = LatentKind::gaussian;
  int batch_size = 256;
  std::int64_t total_g_steps = 20000;
  int d_steps_per_g = 1;
  OptimizerConfig optimizer;
  RingMixture data;
  bool conditional = false;
  int embed_dim = 4;
  std::uint64_t seed = 1;
  std::int64_t snapshot_every = 1000;
  int snapshot_samples = 2048;
  int hidden_width = 128;
  Activation g_hidden_activation = Activation::relu;
  Activation d_hidden_activation = Activation::leaky_relu;
  /// Multiplier on the generator's output-layer init, so the initial sample
  /// cloud can be spread to the data scale (1.0 = plain fan-in init).
  double g_output_gain = 1.0;

  /// Throws ConfigError naming every failing field.
  void validate() const;
};

/// JSON round trip. Parsing applies defaults for absent fields and rejects
/// unknown keys; serialization is canonical (sorted keys), so equal configs
/// produce equal text.
TrainConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const TrainConfig& cfg);

/// FNV-1a 64 of the canonical JSON, as 16 hex chars; pins checkpoints to
/// their config.
std::string config_hash(const TrainConfig& cfg);

const char* to_string(LossFamily f);
const char* to_string(CeVariant v);
const char* to_string(LatentKind k);
const char* to_string(OptimizerKind k);
const char* to_string(Activation a);
LossFamily loss_family_from_string(const std::string& s);
CeVariant ce_variant_from_string(const std::string& s);
LatentKind latent_kind_from_string(const std::string& s);
OptimizerKind optimizer_kind_from_string(const std::string& s);
Activation activation_from_string(const std::string& s);

}  // namespace lsgan
