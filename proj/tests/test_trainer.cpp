#include <cmath>
#include <cstdio>
#include <doctest.h>
#include <filesystem>

#include "lsgan/error.hpp"
#include "lsgan/io.hpp"
#include "lsgan/losses.hpp"
#include "lsgan/trainer.hpp"

using namespace lsgan;
namespace fs = std::filesystem;

namespace {

TrainConfig tiny_config() {
  TrainConfig cfg;
  cfg.batch_size = 16;
  cfg.hidden_width = 8;
  cfg.latent_dim = 4;
  cfg.total_g_steps = 30;
  cfg.snapshot_every = 10;
  cfg.snapshot_samples = 64;
  cfg.seed = 5;
  return cfg;
}

fs::path temp_path(const char* name) {
  return fs::temp_directory_path() / (std::string("lsgan_test_") + name);
}

}  // namespace

TEST_CASE("adam_step") {
  SUBCASE("zero gradient leaves parameters unchanged") {
    Matrix p = Matrix::constant(2, 2, 1.5);
    Matrix g(2, 2);
    Matrix before = p;
    AdamState state;
    Matrix* params[] = {&p};
    const Matrix* grads[] = {&g};
    adam_step(state, params, grads, {});
    CHECK(p == before);
  }
  SUBCASE("first step follows the bias-corrected formula") {
    AdamConfig cfg;
    Matrix p(1, 1);
    Matrix g = Matrix::scalar(0.3);
    AdamState state;
    Matrix* params[] = {&p};
    const Matrix* grads[] = {&g};
    adam_step(state, params, grads, cfg);
    double expected = -cfg.lr * 0.3 / (std::abs(0.3) + cfg.eps);
    CHECK(p[0] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(state.step == 1);
  }
  SUBCASE("identical runs produce identical states") {
    auto run = [] {
      Matrix p = Matrix::constant(2, 3, 0.25);
      AdamState state;
      Matrix* params[] = {&p};
      for (int i = 0; i < 10; ++i) {
        Matrix g = Matrix::constant(2, 3, 0.1 * (i + 1));
        const Matrix* grads[] = {&g};
        adam_step(state, params, grads, {});
      }
      return std::pair{p, state.m[0]};
    };
    auto [p1, m1] = run();
    auto [p2, m2] = run();
    CHECK(p1 == p2);
    CHECK(m1 == m2);
  }
  SUBCASE("shape mismatch rejected") {
    Matrix p(2, 2), g(3, 1);
    AdamState state;
    Matrix* params[] = {&p};
    const Matrix* grads[] = {&g};
    CHECK_THROWS_AS(adam_step(state, params, grads, {}), ShapeError);
  }
}

TEST_CASE("rmsprop_step") {
  SUBCASE("zero gradient leaves parameters unchanged") {
    Matrix p = Matrix::constant(1, 3, -2.0);
    Matrix g(1, 3);
    Matrix before = p;
    RmsPropState state;
    Matrix* params[] = {&p};
    const Matrix* grads[] = {&g};
    rmsprop_step(state, params, grads, {});
    CHECK(p == before);
  }
  SUBCASE("constant gradient converges to steps of size lr") {
    RmsPropConfig cfg;
    Matrix p(1, 1);
    Matrix g = Matrix::scalar(0.5);
    RmsPropState state;
    Matrix* params[] = {&p};
    const Matrix* grads[] = {&g};
    double prev = p[0];
    double step_size = 0.0;
    for (int i = 0; i < 2000; ++i) {
      rmsprop_step(state, params, grads, cfg);
      step_size = prev - p[0];
      prev = p[0];
    }
    CHECK(step_size == doctest::Approx(cfg.lr).epsilon(0.01));
    CHECK(state.mean_square[0][0] == doctest::Approx(0.25).epsilon(0.01));
  }
}

TEST_CASE("train_run determinism and logging") {
  TrainConfig cfg = tiny_config();
  TrainResult a = train_run(cfg);
  TrainResult b = train_run(cfg);
  SUBCASE("bit-identical logs for identical config and seed") {
    CHECK(runlog_steps_csv(a.log) == runlog_steps_csv(b.log));
    CHECK(a.log.final_samples == b.log.final_samples);
    CHECK(a.final_checkpoint.generator.weights[0] ==
          b.final_checkpoint.generator.weights[0]);
  }
  SUBCASE("lsgan losses stay non-negative") {
    for (const StepRecord& r : a.log.steps) {
      CHECK(r.d_loss >= 0.0);
      CHECK(r.g_loss >= 0.0);
    }
  }
  SUBCASE("snapshots land on exact multiples") {
    REQUIRE(a.log.snapshots.size() == 3);
    CHECK(a.log.snapshots[0].step == 10);
    CHECK(a.log.snapshots[2].step == 30);
    CHECK(a.log.snapshots[0].samples.rows() == cfg.snapshot_samples);
  }
  SUBCASE("different seeds diverge") {
    TrainConfig other = cfg;
    other.seed = 6;
    TrainResult c = train_run(other);
    CHECK_FALSE(runlog_steps_csv(a.log) == runlog_steps_csv(c.log));
  }
}

TEST_CASE("zero-step run is a config echo with an initialization checkpoint") {
  TrainConfig cfg = tiny_config();
  cfg.total_g_steps = 0;
  TrainResult res = train_run(cfg);
  CHECK(res.log.steps.empty());
  CHECK(res.log.snapshots.empty());
  CHECK_FALSE(res.log.aborted);
  Trainer fresh(cfg);
  Checkpoint init = fresh.make_checkpoint();
  CHECK(res.final_checkpoint.step == 0);
  CHECK(res.final_checkpoint.generator.weights[0] == init.generator.weights[0]);
  CHECK(res.final_checkpoint.discriminator.weights[2] == init.discriminator.weights[2]);
}

TEST_CASE("checkpoint round trip is byte-exact") {
  TrainConfig cfg = tiny_config();
  cfg.total_g_steps = 7;
  TrainResult res = train_run(cfg);
  fs::path p1 = temp_path("ck1.json");
  fs::path p2 = temp_path("ck2.json");
  checkpoint_save(res.final_checkpoint, p1);
  Checkpoint loaded = checkpoint_load(p1);
  checkpoint_save(loaded, p2);
  CHECK(read_file(p1) == read_file(p2));
  CHECK(loaded.step == 7);
  CHECK(loaded.generator.weights[1] == res.final_checkpoint.generator.weights[1]);
  CHECK(loaded.opt_d.adam.v[0] == res.final_checkpoint.opt_d.adam.v[0]);
  CHECK(loaded.data_stream.rng.state == res.final_checkpoint.data_stream.rng.state);
  fs::remove(p1);
  fs::remove(p2);
}

TEST_CASE("corrupted or mismatched checkpoints are rejected whole") {
  fs::path p = temp_path("ck_bad.json");
  write_file(p, "{\"format\": \"lsgan-lab-checkpoint\", \"version\": 1, \"step\": oops");
  CHECK_THROWS_AS(checkpoint_load(p), IoError);
  write_file(p, "{\"format\": \"lsgan-lab-checkpoint\", \"version\": 99}");
  CHECK_THROWS_AS(checkpoint_load(p), IoError);
  CHECK_THROWS_AS(checkpoint_load(temp_path("missing_ck.json")), IoError);
  fs::remove(p);

  TrainConfig cfg = tiny_config();
  cfg.total_g_steps = 2;
  TrainResult res = train_run(cfg);
  TrainConfig other = cfg;
  other.batch_size = 32;
  CHECK_THROWS_AS(resume_run(res.final_checkpoint, other), ConfigError);
  try {
    resume_run(res.final_checkpoint, other);
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find(res.final_checkpoint.config_hash) != std::string::npos);
    CHECK(msg.find(config_hash(other)) != std::string::npos);
  }
}

TEST_CASE("resume reproduces the uninterrupted trajectory bit-exactly") {
  TrainConfig cfg = tiny_config();
  cfg.total_g_steps = 30;
  cfg.snapshot_every = 10;

  Checkpoint mid;
  bool got_mid = false;
  TrainCallbacks grab;
  grab.on_checkpoint = [&](const Checkpoint& ck) {
    if (ck.step == 10 && !got_mid) {
      mid = ck;
      got_mid = true;
    }
  };
  TrainResult full = train_run(cfg, grab);
  REQUIRE(got_mid);

  TrainResult resumed = resume_run(mid, cfg);
  CHECK(resumed.log.steps.size() == 20);
  CHECK(resumed.log.steps.front().step == 11);

  // the resumed tail must match the uninterrupted log record for record
  for (std::size_t i = 0; i < resumed.log.steps.size(); ++i) {
    const StepRecord& r = resumed.log.steps[i];
    const StepRecord& f = full.log.steps[10 + i];
    CHECK(r.step == f.step);
    CHECK(r.d_loss == f.d_loss);
    CHECK(r.g_loss == f.g_loss);
    CHECK(r.g_grad_norm == f.g_grad_norm);
  }
  for (std::size_t i = 0; i < full.final_checkpoint.generator.weights.size(); ++i) {
    CHECK(resumed.final_checkpoint.generator.weights[i] ==
          full.final_checkpoint.generator.weights[i]);
    CHECK(resumed.final_checkpoint.discriminator.weights[i] ==
          full.final_checkpoint.discriminator.weights[i]);
  }
  CHECK(resumed.final_checkpoint.opt_g.adam.m[0] == full.final_checkpoint.opt_g.adam.m[0]);
  CHECK(resumed.final_checkpoint.data_stream.rng.state ==
        full.final_checkpoint.data_stream.rng.state);
  CHECK(resumed.final_checkpoint.latent_stream.bm.has_spare ==
        full.final_checkpoint.latent_stream.bm.has_spare);
}

TEST_CASE("the symmetric flag changes logged losses, never the trajectory") {
  TrainConfig plain = tiny_config();
  plain.total_g_steps = 25;
  TrainConfig sym = plain;
  sym.loss.symmetric_g = true;

  TrainResult a = train_run(plain);
  TrainResult b = train_run(sym);

  for (std::size_t i = 0; i < a.final_checkpoint.generator.weights.size(); ++i) {
    CHECK(a.final_checkpoint.generator.weights[i] ==
          b.final_checkpoint.generator.weights[i]);
    CHECK(a.final_checkpoint.generator.biases[i] ==
          b.final_checkpoint.generator.biases[i]);
    CHECK(a.final_checkpoint.discriminator.weights[i] ==
          b.final_checkpoint.discriminator.weights[i]);
  }
  CHECK(a.log.final_samples == b.log.final_samples);
  bool any_loss_differs = false;
  for (std::size_t i = 0; i < a.log.steps.size(); ++i) {
    CHECK(a.log.steps[i].d_loss == b.log.steps[i].d_loss);
    CHECK(a.log.steps[i].g_grad_norm == b.log.steps[i].g_grad_norm);
    if (a.log.steps[i].g_loss != b.log.steps[i].g_loss) any_loss_differs = true;
  }
  CHECK(any_loss_differs);
}

TEST_CASE("discriminator parameters receive no gradient during a generator update") {
  TrainConfig cfg = tiny_config();
  Trainer trainer(cfg);
  trainer.d_step();

  // Build the generator-update graph the way the trainer does: D frozen.
  Graph g;
  Matrix z = sample_latent(cfg.batch_size, cfg.latent_dim, cfg.latent_kind, 99);
  auto fake = generator_forward(g, trainer.generator(), z, /*trainable=*/true);
  MlpNodes d_nodes = register_mlp(g, trainer.discriminator(), /*trainable=*/false);
  NodeId fake_scores = mlp_apply(g, trainer.discriminator(), d_nodes, fake.output);
  NodeId loss = g_loss_from_spec(g, cfg.loss, fake_scores);
  auto grads = g.backward(loss);

  for (NodeId id : d_nodes.weights) {
    CHECK(grads.count(id) == 0);
    CHECK_FALSE(g.has_grad(id));
  }
  for (NodeId id : d_nodes.biases) {
    CHECK(grads.count(id) == 0);
    CHECK_FALSE(g.has_grad(id));
  }
  for (NodeId id : fake.nodes.weights) CHECK(grads.count(id) == 1);

  // And through the trainer itself: a g_step must leave D bit-identical.
  Matrix d_w0 = trainer.discriminator().weights[0];
  Matrix d_b2 = trainer.discriminator().biases[2];
  trainer.g_step();
  CHECK(trainer.discriminator().weights[0] == d_w0);
  CHECK(trainer.discriminator().biases[2] == d_b2);
}

TEST_CASE("non-finite losses abort with a diagnostic record") {
  TrainConfig cfg = tiny_config();
  cfg.optimizer.adam.lr = 1e150;  // first update catapults the parameters
  cfg.total_g_steps = 50;
  TrainResult res = train_run(cfg);
  CHECK(res.log.aborted);
  CHECK(res.log.abort_step >= 1);
  CHECK_FALSE(res.log.abort_reason.empty());
  CHECK(res.log.steps.size() < 50);
  std::string summary = run_summary_json(res.log);
  CHECK(summary.find("abort_reason") != std::string::npos);
}

TEST_CASE("conditional training smoke: shapes, determinism, embed updates") {
  TrainConfig cfg = tiny_config();
  cfg.conditional = true;
  cfg.embed_dim = 3;
  cfg.total_g_steps = 6;
  TrainResult a = train_run(cfg);
  TrainResult b = train_run(cfg);
  CHECK(runlog_steps_csv(a.log) == runlog_steps_csv(b.log));
  REQUIRE(a.final_checkpoint.embed.has_value());
  CHECK(a.final_checkpoint.embed->mapping == b.final_checkpoint.embed->mapping);

  Trainer fresh(cfg);
  CHECK_FALSE(a.final_checkpoint.embed->mapping == fresh.embed()->mapping);
  CHECK(a.log.final_samples.rows() == cfg.snapshot_samples);
  CHECK(a.log.final_samples.cols() == 2);
}

TEST_CASE("config json round trip and validation messages") {
  TrainConfig cfg = tiny_config();
  cfg.loss.family = LossFamily::sigmoid_ce;
  cfg.optimizer.kind = OptimizerKind::rmsprop;
  cfg.optimizer.rmsprop.decay = 0.95;
  std::string text = config_to_json_text(cfg);
  TrainConfig back = config_from_json_text(text);
  CHECK(config_to_json_text(back) == text);
  CHECK(config_hash(back) == config_hash(cfg));

  CHECK_THROWS_AS(config_from_json_text("not json"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text("{\"no_such_key\": 1}"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text("{\"batch_size\": \"big\"}"), ConfigError);

  TrainConfig bad;
  bad.batch_size = -3;
  bad.latent_dim = 0;
  try {
    bad.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("batch_size") != std::string::npos);
    CHECK(msg.find("latent_dim") != std::string::npos);
  }
}

TEST_CASE("rmsprop end to end stays deterministic") {
  TrainConfig cfg = tiny_config();
  cfg.optimizer.kind = OptimizerKind::rmsprop;
  cfg.optimizer.rmsprop.lr = 5e-4;
  cfg.total_g_steps = 10;
  TrainResult a = train_run(cfg);
  TrainResult b = train_run(cfg);
  CHECK(runlog_steps_csv(a.log) == runlog_steps_csv(b.log));
  CHECK(a.final_checkpoint.opt_g.rmsprop.mean_square[0] ==
        b.final_checkpoint.opt_g.rmsprop.mean_square[0]);
}
