#include "lsgan/trainer.hpp"

#include <cmath>
#include <string>

#include "lsgan/error.hpp"
#include "lsgan/losses.hpp"

namespace lsgan {

namespace {

constexpr int kDataDim = 2;

std::vector<int> mlp_sizes(int in, int width, int out) { return {in, width, width, out}; }

std::vector<int> cycling_labels(int n, int num_modes) {
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i % num_modes;
  return labels;
}

}  // namespace

Trainer::Trainer(const TrainConfig& cfg)
    : cfg_(cfg), opt_g_(cfg.optimizer), opt_d_(cfg.optimizer) {
  cfg_.validate();
  int g_in = cfg.latent_dim + (cfg.conditional ? cfg.embed_dim : 0);
  int d_in = kDataDim + (cfg.conditional ? cfg.embed_dim : 0);
  OutputHead d_head = cfg.loss.family == LossFamily::sigmoid_ce ? OutputHead::sigmoid
                                                                : OutputHead::linear;
  gen_ = init_mlp(mlp_sizes(g_in, cfg.hidden_width, kDataDim),
                  cfg.g_hidden_activation, OutputHead::linear, mix_seed(cfg.seed, 1));
  if (cfg.g_output_gain != 1.0) {
    Matrix& w_out = gen_.weights.back();
    for (std::size_t i = 0; i < w_out.size(); ++i) w_out[i] *= cfg.g_output_gain;
  }
  disc_ = init_mlp(mlp_sizes(d_in, cfg.hidden_width, 1), cfg.d_hidden_activation,
                   d_head, mix_seed(cfg.seed, 2));
  if (cfg.conditional) {
    embed_ = init_label_embed(cfg.data.num_modes, cfg.embed_dim, mix_seed(cfg.seed, 3));
    eval_labels_ = cycling_labels(cfg.snapshot_samples, cfg.data.num_modes);
  }
  data_.rng = make_stream(cfg.seed, StreamPurpose::data);
  latent_.rng = make_stream(cfg.seed, StreamPurpose::latent);
  StreamState eval{make_stream(cfg.seed, StreamPurpose::eval), {}};
  eval_z_ = sample_latent(cfg.snapshot_samples, cfg.latent_dim, cfg.latent_kind,
                          eval.rng, eval.bm);
}

Trainer::Trainer(const TrainConfig& cfg, const Checkpoint& resume_from)
    : Trainer(cfg) {
  std::string expected = config_hash(cfg);
  if (resume_from.config_hash != expected) {
    throw ConfigError("resume: checkpoint was written for config " +
                      resume_from.config_hash + ", current config is " + expected);
  }
  gen_ = resume_from.generator;
  disc_ = resume_from.discriminator;
  embed_ = resume_from.embed;
  data_ = resume_from.data_stream;
  latent_ = resume_from.latent_stream;
  step_ = resume_from.step;
  if (resume_from.opt_g.kind != cfg.optimizer.kind ||
      resume_from.opt_d.kind != cfg.optimizer.kind) {
    throw ConfigError("resume: optimizer kind differs from checkpoint");
  }
  opt_g_.adam_state() = resume_from.opt_g.adam;
  opt_g_.rmsprop_state() = resume_from.opt_g.rmsprop;
  opt_d_.adam_state() = resume_from.opt_d.adam;
  opt_d_.rmsprop_state() = resume_from.opt_d.rmsprop;
}

double Trainer::d_step() {
  LabeledSamples real = sample_mixture(cfg_.data, cfg_.batch_size, data_.rng, data_.bm);
  Matrix z = sample_latent(cfg_.batch_size, cfg_.latent_dim, cfg_.latent_kind,
                           latent_.rng, latent_.bm);

  Graph g;
  NodeId real_scores, fake_scores;
  MlpNodes d_nodes;
  NodeId embed_node{};
  if (cfg_.conditional) {
    Matrix y = one_hot(real.labels, cfg_.data.num_modes);
    auto res = conditional_forward(g, gen_, disc_, *embed_, z, real.points, y,
                                   {.generator = false, .discriminator = true,
                                    .embed = true});
    real_scores = res.real_scores;
    fake_scores = res.fake_scores;
    d_nodes = std::move(res.d_nodes);
    embed_node = res.embed_node;
  } else {
    auto fake = generator_forward(g, gen_, z, /*trainable=*/false);
    d_nodes = register_mlp(g, disc_, /*trainable=*/true);
    real_scores = mlp_apply(g, disc_, d_nodes, g.input(real.points));
    fake_scores = mlp_apply(g, disc_, d_nodes, fake.output);
  }

  NodeId loss = d_loss_from_spec(g, cfg_.loss, real_scores, fake_scores);
  double value = g.value(loss)[0];
  if (!std::isfinite(value)) return value;  // caller aborts; no update

  auto grads = g.backward(loss);
  std::vector<Matrix*> params;
  std::vector<const Matrix*> grad_ptrs;
  for (std::size_t i = 0; i < disc_.weights.size(); ++i) {
    params.push_back(&disc_.weights[i]);
    grad_ptrs.push_back(&grads.at(d_nodes.weights[i]));
    params.push_back(&disc_.biases[i]);
    grad_ptrs.push_back(&grads.at(d_nodes.biases[i]));
  }
  if (cfg_.conditional) {
    params.push_back(&embed_->mapping);
    grad_ptrs.push_back(&grads.at(embed_node));
  }
  opt_d_.step(params, grad_ptrs);
  last_real_ = std::move(real);
  return value;
}

std::pair<double, double> Trainer::g_step() {
  Matrix z = sample_latent(cfg_.batch_size, cfg_.latent_dim, cfg_.latent_kind,
                           latent_.rng, latent_.bm);

  Graph g;
  NodeId fake_scores;
  std::optional<NodeId> real_scores;
  MlpNodes g_nodes;
  if (cfg_.conditional) {
    // Fresh labeled batch: the labels condition the fake pass; the points
    // only feed the optional symmetric term, as constants.
    LabeledSamples real =
        sample_mixture(cfg_.data, cfg_.batch_size, data_.rng, data_.bm);
    Matrix y = one_hot(real.labels, cfg_.data.num_modes);
    auto res = conditional_forward(g, gen_, disc_, *embed_, z, real.points, y,
                                   {.generator = true, .discriminator = false,
                                    .embed = false});
    fake_scores = res.fake_scores;
    g_nodes = std::move(res.g_nodes);
    if (cfg_.loss.symmetric_g) real_scores = res.real_scores;
  } else {
    auto fake = generator_forward(g, gen_, z, /*trainable=*/true);
    g_nodes = std::move(fake.nodes);
    MlpNodes d_nodes = register_mlp(g, disc_, /*trainable=*/false);
    fake_scores = mlp_apply(g, disc_, d_nodes, fake.output);
    if (cfg_.loss.symmetric_g) {
      if (last_real_.points.rows() == 0) {
        throw Error("g_step: symmetric_g needs a preceding discriminator step");
      }
      real_scores = mlp_apply(g, disc_, d_nodes, g.input(last_real_.points));
    }
  }

  NodeId loss = g_loss_from_spec(g, cfg_.loss, fake_scores, real_scores);
  double value = g.value(loss)[0];
  if (!std::isfinite(value)) {
    ++step_;
    return {value, 0.0};
  }

  auto grads = g.backward(loss);
  std::vector<Matrix*> params;
  std::vector<const Matrix*> grad_ptrs;
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < gen_.weights.size(); ++i) {
    params.push_back(&gen_.weights[i]);
    grad_ptrs.push_back(&grads.at(g_nodes.weights[i]));
    params.push_back(&gen_.biases[i]);
    grad_ptrs.push_back(&grads.at(g_nodes.biases[i]));
  }
  for (const Matrix* gm : grad_ptrs) {
    for (std::size_t k = 0; k < gm->size(); ++k) norm_sq += (*gm)[k] * (*gm)[k];
  }
  opt_g_.step(params, grad_ptrs);
  ++step_;
  return {value, std::sqrt(norm_sq)};
}

Matrix Trainer::generate(const Matrix& z, const std::vector<int>& labels) {
  Graph g;
  NodeId out;
  if (cfg_.conditional) {
    Matrix y = one_hot(labels, cfg_.data.num_modes);
    NodeId mapped = g.matmul(g.input(y), g.input(embed_->mapping));
    MlpNodes nodes = register_mlp(g, gen_, /*trainable=*/false);
    out = mlp_apply(g, gen_, nodes, g.concat(g.input(z), mapped));
  } else {
    out = generator_forward(g, gen_, z, /*trainable=*/false).output;
  }
  return g.value(out);
}

Matrix Trainer::eval_samples() { return generate(eval_z_, eval_labels_); }

ModeStats Trainer::eval_stats(const Matrix& samples) const {
  return mode_stats(samples, cfg_.data, default_dist_threshold(cfg_.data),
                    default_min_count(samples.rows(), cfg_.data.num_modes));
}

Checkpoint Trainer::make_checkpoint() const {
  Checkpoint ck;
  ck.step = step_;
  ck.config_hash = config_hash(cfg_);
  ck.generator = gen_;
  ck.discriminator = disc_;
  ck.embed = embed_;
  ck.opt_g.kind = cfg_.optimizer.kind;
  ck.opt_g.adam = opt_g_.adam_state();
  ck.opt_g.rmsprop = opt_g_.rmsprop_state();
  ck.opt_d.kind = cfg_.optimizer.kind;
  ck.opt_d.adam = opt_d_.adam_state();
  ck.opt_d.rmsprop = opt_d_.rmsprop_state();
  ck.data_stream = data_;
  ck.latent_stream = latent_;
  return ck;
}

namespace {

TrainResult run_loop(Trainer& trainer, const TrainConfig& cfg,
                     const TrainCallbacks& callbacks) {
  RunLog log;
  log.config = cfg;
  log.rng_algorithm = kRngAlgorithm;

  while (trainer.step() < cfg.total_g_steps) {
    double d_loss = 0.0;
    bool d_finite = true;
    for (int k = 0; k < cfg.d_steps_per_g; ++k) {
      d_loss = trainer.d_step();
      if (!std::isfinite(d_loss)) {
        d_finite = false;
        break;
      }
    }
    if (!d_finite) {
      log.aborted = true;
      log.abort_step = trainer.step() + 1;
      log.abort_reason = "non-finite discriminator loss";
      break;
    }
    auto [g_loss, grad_norm] = trainer.g_step();
    std::int64_t s = trainer.step();
    log.steps.push_back({s, d_loss, g_loss, grad_norm});
    if (!std::isfinite(g_loss)) {
      log.aborted = true;
      log.abort_step = s;
      log.abort_reason = "non-finite generator loss";
      break;
    }
    if (s % cfg.snapshot_every == 0) {
      SnapshotRecord snap;
      snap.step = s;
      snap.samples = trainer.eval_samples();
      snap.stats = trainer.eval_stats(snap.samples);
      log.snapshots.push_back(std::move(snap));
      if (callbacks.on_checkpoint) callbacks.on_checkpoint(trainer.make_checkpoint());
    }
  }

  log.final_samples = trainer.eval_samples();
  log.final_stats = trainer.eval_stats(log.final_samples);
  TrainResult result{std::move(log), trainer.make_checkpoint()};
  if (callbacks.on_checkpoint) callbacks.on_checkpoint(result.final_checkpoint);
  return result;
}

}  // namespace

TrainResult train_run(const TrainConfig& cfg, const TrainCallbacks& callbacks) {
  Trainer trainer(cfg);
  return run_loop(trainer, cfg, callbacks);
}

TrainResult resume_run(const Checkpoint& ck, const TrainConfig& cfg,
                       const TrainCallbacks& callbacks) {
  Trainer trainer(cfg, ck);
  return run_loop(trainer, cfg, callbacks);
}

}  // namespace lsgan
