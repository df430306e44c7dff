#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lsgan/config.hpp"
#include "lsgan/metrics.hpp"
#include "lsgan/networks.hpp"
#include "lsgan/optimizer.hpp"
#include "lsgan/rng.hpp"
#include "lsgan/synthetic.hpp"

namespace lsgan {

struct StepRecord {
  std::int64_t step = 0;
  double d_loss = 0.0;  // last discriminator update of the cycle
  double g_loss = 0.0;
  double g_grad_norm = 0.0;  // global L2 over all generator parameters
};

struct SnapshotRecord {
  std::int64_t step = 0;
  Matrix samples;  // fixed eval latents through the current generator
  ModeStats stats;
};

struct RunLog {
  TrainConfig config;
  std::string rng_algorithm;
  std::vector<StepRecord> steps;
  std::vector<SnapshotRecord> snapshots;
  bool aborted = false;
  std::int64_t abort_step = -1;
  std::string abort_reason;
  Matrix final_samples;
  ModeStats final_stats;
};

struct OptimizerSnapshot {
  OptimizerKind kind = OptimizerKind::adam;
  AdamState adam;
  RmsPropState rmsprop;
};

/// PRNG stream plus its Box-Muller cache; both are needed to resume a run
/// mid-sequence bit-exactly.
struct StreamState {
  Pcg32 rng;
  BoxMuller bm;
};

struct Checkpoint {
  std::int64_t step = 0;
  std::string config_hash;
  MlpParams generator;
  MlpParams discriminator;
  std::optional<LabelEmbed> embed;
  OptimizerSnapshot opt_g;
  OptimizerSnapshot opt_d;
  StreamState data_stream;
  StreamState latent_stream;
};

/// JSON document with float arrays encoded as hexadecimal 64-bit words, so a
/// save/load round trip is bit-exact. Corrupted or wrong-version files are
/// rejected whole.
void checkpoint_save(const Checkpoint& ck, const std::filesystem::path& path);
Checkpoint checkpoint_load(const std::filesystem::path& path);

/// Alternating adversarial optimization of one (config, seed) run. A cycle is
/// d_steps_per_g discriminator updates, each on a fresh real and fresh fake
/// batch, then one generator update through a fresh fake batch with the
/// discriminator held constant.
class Trainer {
 public:
  explicit Trainer(const TrainConfig& cfg);
  Trainer(const TrainConfig& cfg, const Checkpoint& resume_from);

  /// One discriminator update; returns the loss. Skips the parameter update
  /// when the loss is non-finite.
  double d_step();

  /// One generator update; returns (loss, gradient norm) and advances the
  /// step counter. Skips the update when the loss is non-finite.
  std::pair<double, double> g_step();

  std::int64_t step() const { return step_; }
  const TrainConfig& config() const { return cfg_; }
  const MlpParams& generator() const { return gen_; }
  const MlpParams& discriminator() const { return disc_; }
  const std::optional<LabelEmbed>& embed() const { return embed_; }

  /// The fixed evaluation batch through the current generator.
  Matrix eval_samples();
  ModeStats eval_stats(const Matrix& samples) const;

  Checkpoint make_checkpoint() const;

 private:
  Matrix generate(const Matrix& z, const std::vector<int>& labels);

  TrainConfig cfg_;
  MlpParams gen_;
  MlpParams disc_;
  std::optional<LabelEmbed> embed_;
  Optimizer opt_g_;
  Optimizer opt_d_;
  StreamState data_;
  StreamState latent_;
  Matrix eval_z_;
  std::vector<int> eval_labels_;
  LabeledSamples last_real_;  // feeds the optional symmetric G term
  std::int64_t step_ = 0;
};

struct TrainCallbacks {
  /// Called with a checkpoint at every snapshot step and once at the end.
  std::function<void(const Checkpoint&)> on_checkpoint;
};

struct TrainResult {
  RunLog log;
  Checkpoint final_checkpoint;
};

TrainResult train_run(const TrainConfig& cfg, const TrainCallbacks& callbacks = {});

/// Continues a checkpointed run to cfg.total_g_steps; the log covers the
/// resumed steps only. Rejects a checkpoint whose config hash differs.
TrainResult resume_run(const Checkpoint& ck, const TrainConfig& cfg,
                       const TrainCallbacks& callbacks = {});

}  // namespace lsgan
