// lsgan-lab: train and probe least-squares vs sigmoid-CE adversarial models
// on a synthetic 8-Gaussian ring, and verify their divergence identities on
// discrete distributions. Exit codes: 0 success, 1 check failure, 2 usage or
// config error.

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "lsgan/config.hpp"
#include "lsgan/divergence.hpp"
#include "lsgan/error.hpp"
#include "lsgan/io.hpp"
#include "lsgan/metrics.hpp"
#include "lsgan/synthetic.hpp"
#include "lsgan/trainer.hpp"

namespace fs = std::filesystem;
using namespace lsgan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

void require_absent(const fs::path& path, bool force) {
  if (!force && fs::exists(path)) {
    throw ConfigError(path.string() + " exists; pass --force to overwrite");
  }
}

std::string step_file_name(const char* prefix, std::int64_t step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%08lld.json", prefix,
                static_cast<long long>(step));
  return buf;
}

GridSpec grid_for_data(const RingMixture& mix, int resolution) {
  double extent = 1.5 * mix.radius;
  if (extent <= 0.0) extent = 1.0;
  return GridSpec{-extent, extent, -extent, extent, resolution};
}

int run_train(const std::string& config_path, const std::string& out_dir,
              const std::string& resume_path, double kde_bandwidth,
              int kde_resolution, bool force) {
  TrainConfig cfg = config_from_json_text(read_file(config_path));
  cfg.validate();

  fs::path out(out_dir);
  fs::path runlog_path = out / "runlog.csv";
  fs::path summary_path = out / "run.json";
  fs::path grid_path = out / "kde_final.csv";
  fs::path ppm_path = out / "kde_final.ppm";
  fs::path final_ck_path = out / "checkpoint_final.json";
  for (const fs::path& p :
       {runlog_path, summary_path, grid_path, ppm_path, final_ck_path}) {
    require_absent(p, force);
  }
  fs::create_directories(out / "snapshots");
  fs::create_directories(out / "checkpoints");

  TrainCallbacks callbacks;
  callbacks.on_checkpoint = [&](const Checkpoint& ck) {
    checkpoint_save(ck, out / "checkpoints" / step_file_name("checkpoint", ck.step));
  };

  TrainResult result;
  if (resume_path.empty()) {
    result = train_run(cfg, callbacks);
  } else {
    result = resume_run(checkpoint_load(resume_path), cfg, callbacks);
  }

  write_file(runlog_path, runlog_steps_csv(result.log));
  write_file(summary_path, run_summary_json(result.log));
  for (const SnapshotRecord& snap : result.log.snapshots) {
    write_file(out / "snapshots" / step_file_name("snapshot", snap.step),
               snapshot_json(snap));
  }
  checkpoint_save(result.final_checkpoint, final_ck_path);
  DensityGrid grid = kde2d(result.log.final_samples, kde_bandwidth,
                           grid_for_data(cfg.data, kde_resolution));
  write_file(grid_path, grid_to_csv(grid));
  write_file(ppm_path, grid_to_ppm(grid));

  if (result.log.aborted) {
    std::cerr << "run aborted at step " << result.log.abort_step << ": "
              << result.log.abort_reason << "\n";
    return kExitCheckFailed;
  }
  std::cout << "done: " << result.log.steps.size() << " steps, modes covered "
            << result.log.final_stats.modes_covered << "/" << cfg.data.num_modes
            << ", high-quality fraction "
            << format_double(result.log.final_stats.high_quality_fraction) << "\n";
  return kExitOk;
}

int run_divergence_check(int pairs, int support, std::uint64_t seed,
                         std::vector<double> scheme) {
  double a = scheme[0], b = scheme[1], c = scheme[2];
  Pcg32 rng = make_stream(seed, StreamPurpose::divergence);
  double max_diff = 0.0;
  std::cout << "pair,lsgan_value,pearson_chi2,abs_diff\n";
  for (int i = 0; i < pairs; ++i) {
    DiscreteDist p_d = DiscreteDist::random(support, rng);
    DiscreteDist p_g = DiscreteDist::random(support, rng);
    double value = lsgan_value_at_optimum(p_d, p_g, a, b, c);
    double chi2 = pearson_chi2_mix(p_d, p_g);
    double diff = std::abs(value - chi2);
    max_diff = std::max(max_diff, diff);
    std::cout << i << ',' << format_double(value) << ',' << format_double(chi2) << ','
              << format_double(diff) << '\n';
  }
  auto coding = validate_coding(a, b, c);
  std::cerr << "scheme (" << a << ", " << b << ", " << c << "), chi2 conditions "
            << (coding.chi2 ? "hold" : "violated") << ", max |2C(G) - chi2| = "
            << format_double(max_diff) << "\n";
  return max_diff <= 1e-10 ? kExitOk : kExitCheckFailed;
}

int run_probe(double d_min, double d_max, int steps) {
  std::vector<double> distances(steps);
  for (int i = 0; i < steps; ++i) {
    distances[i] = steps == 1 ? d_min : d_min + (d_max - d_min) * i / (steps - 1);
  }
  std::vector<double> w{1.0, 0.0};
  auto ce = saturation_probe(LossFamily::sigmoid_ce, w, distances);
  auto ls = saturation_probe(LossFamily::least_squares, w, distances);
  std::cout << "distance,sigmoid_ce,least_squares\n";
  bool finite = true;
  for (int i = 0; i < steps; ++i) {
    std::cout << format_double(distances[i]) << ',' << format_double(ce[i]) << ','
              << format_double(ls[i]) << '\n';
    finite = finite && std::isfinite(ce[i]) && std::isfinite(ls[i]);
  }
  return finite ? kExitOk : kExitCheckFailed;
}

int compare_threads() {
  const char* env = std::getenv("LSGAN_LAB_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

int run_compare(const std::string& lsgan_config_path,
                const std::string& gan_config_path,
                const std::vector<std::uint64_t>& seeds) {
  TrainConfig base_lsgan = config_from_json_text(read_file(lsgan_config_path));
  TrainConfig base_gan = config_from_json_text(read_file(gan_config_path));
  base_lsgan.validate();
  base_gan.validate();

  struct Job {
    const char* name;
    TrainConfig cfg;
    ModeStats stats;
    bool aborted = false;
  };
  std::vector<Job> jobs;
  for (std::uint64_t seed : seeds) {
    TrainConfig cfg = base_lsgan;
    cfg.seed = seed;
    jobs.push_back({"lsgan", cfg, {}, false});
  }
  for (std::uint64_t seed : seeds) {
    TrainConfig cfg = base_gan;
    cfg.seed = seed;
    jobs.push_back({"gan", cfg, {}, false});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      TrainResult res = train_run(jobs[i].cfg);
      jobs[i].stats = res.log.final_stats;
      jobs[i].aborted = res.log.aborted;
    }
  };
  int threads = std::min<int>(compare_threads(), static_cast<int>(jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::cout << "config,seed,modes_covered,hq_fraction,aborted\n";
  std::vector<double> lsgan_modes, gan_modes;
  for (const Job& job : jobs) {
    std::cout << job.name << ',' << job.cfg.seed << ',' << job.stats.modes_covered
              << ',' << format_double(job.stats.high_quality_fraction) << ','
              << (job.aborted ? 1 : 0) << '\n';
    (job.name == std::string("lsgan") ? lsgan_modes : gan_modes)
        .push_back(job.stats.modes_covered);
  }
  double m_lsgan = median(lsgan_modes);
  double m_gan = median(gan_modes);
  std::cout << "lsgan,median," << format_double(m_lsgan) << ",,\n";
  std::cout << "gan,median," << format_double(m_gan) << ",,\n";
  return m_lsgan >= m_gan ? kExitOk : kExitCheckFailed;
}

int run_emit_data(int n, std::uint64_t seed, int modes, double radius, double sigma,
                  const std::string& out_path, bool force) {
  RingMixture mix{modes, radius, sigma};
  LabeledSamples samples = sample_mixture(mix, n, seed);
  std::string csv = samples_csv(samples.points, samples.labels);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    require_absent(out_path, force);
    write_file(out_path, csv);
  }
  return kExitOk;
}

int run_render(const std::string& grid_path, const std::string& out_path, bool force) {
  DensityGrid grid = grid_from_csv(read_file(grid_path));
  require_absent(out_path, force);
  write_file(out_path, grid_to_ppm(grid));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least-squares vs regular GAN laboratory"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "run one training configuration");
  std::string train_config, train_out, train_resume;
  double train_bandwidth = 0.1;
  int train_resolution = 128;
  bool train_force = false;
  train->add_option("--config", train_config, "JSON config file")->required();
  train->add_option("--out", train_out, "output directory")->required();
  train->add_option("--resume", train_resume, "checkpoint to continue from");
  train->add_option("--kde-bandwidth", train_bandwidth, "bandwidth of the final KDE grid");
  train->add_option("--kde-resolution", train_resolution, "cells per axis of the final KDE grid");
  train->add_flag("--force", train_force, "overwrite existing outputs");

  // divergence-check
  auto* div = app.add_subcommand(
      "divergence-check", "compare the LSGAN optimum against the Pearson chi2 value");
  int div_pairs = 100, div_support = 8;
  std::uint64_t div_seed = 1;
  std::vector<double> div_scheme{-1.0, 1.0, 0.0};
  div->add_option("--pairs", div_pairs, "number of random distribution pairs");
  div->add_option("--support", div_support, "support size of each distribution");
  div->add_option("--seed", div_seed, "PRNG seed");
  div->add_option("--scheme", div_scheme, "coding constants a b c")->expected(3);

  // probe
  auto* probe = app.add_subcommand(
      "probe", "generator gradient magnitude vs distance past the boundary");
  double probe_min = 0.0, probe_max = 10.0;
  int probe_steps = 11;
  probe->add_option("--min", probe_min, "smallest distance");
  probe->add_option("--max", probe_max, "largest distance");
  probe->add_option("--steps", probe_steps, "number of distances")
      ->check(CLI::PositiveNumber);

  // compare
  auto* compare = app.add_subcommand(
      "compare", "seed sweep of two configs; summarizes mode coverage");
  std::string cmp_lsgan, cmp_gan;
  std::vector<std::uint64_t> cmp_seeds{1, 2, 3, 4, 5};
  compare->add_option("--config-lsgan", cmp_lsgan, "LSGAN JSON config")->required();
  compare->add_option("--config-gan", cmp_gan, "regular-GAN JSON config")->required();
  compare->add_option("--seeds", cmp_seeds, "seed list");

  // emit-data
  auto* emit = app.add_subcommand("emit-data", "sample the ring mixture as CSV");
  int emit_n = 8000, emit_modes = 8;
  double emit_radius = 2.0, emit_sigma = 0.05;
  std::uint64_t emit_seed = 1;
  std::string emit_out;
  bool emit_force = false;
  emit->add_option("--n", emit_n, "sample count")->check(CLI::PositiveNumber);
  emit->add_option("--seed", emit_seed, "PRNG seed");
  emit->add_option("--modes", emit_modes, "number of mixture modes");
  emit->add_option("--radius", emit_radius, "ring radius");
  emit->add_option("--sigma", emit_sigma, "per-mode standard deviation");
  emit->add_option("--out", emit_out, "output file (stdout when omitted)");
  emit->add_flag("--force", emit_force, "overwrite an existing file");

  // render
  auto* render = app.add_subcommand("render", "turn a grid CSV into a PPM heatmap");
  std::string render_grid, render_out;
  bool render_force = false;
  render->add_option("--grid", render_grid, "grid CSV file")->required();
  render->add_option("--out", render_out, "output PPM file")->required();
  render->add_flag("--force", render_force, "overwrite an existing file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train) {
      return run_train(train_config, train_out, train_resume, train_bandwidth,
                       train_resolution, train_force);
    }
    if (*div) {
      return run_divergence_check(div_pairs, div_support, div_seed, div_scheme);
    }
    if (*probe) return run_probe(probe_min, probe_max, probe_steps);
    if (*compare) return run_compare(cmp_lsgan, cmp_gan, cmp_seeds);
    if (*emit) {
      return run_emit_data(emit_n, emit_seed, emit_modes, emit_radius, emit_sigma,
                           emit_out, emit_force);
    }
    if (*render) return run_render(render_grid, render_out, render_force);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}
