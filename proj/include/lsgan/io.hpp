#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lsgan/metrics.hpp"
#include "lsgan/trainer.hpp"

namespace lsgan {

/// Shortest exact decimal for a double (%.17g); all CSV output goes through
/// this so identical runs produce identical bytes.
std::string format_double(double v);

/// Per-step records: "step,d_loss,g_loss,g_grad_norm" header plus one row per
/// generator step.
std::string runlog_steps_csv(const RunLog& log);

/// Run summary: config echo, PRNG algorithm id, abort diagnostics, final
/// mode statistics.
std::string run_summary_json(const RunLog& log);

/// One snapshot: step, mode stats and the generated sample batch.
std::string snapshot_json(const SnapshotRecord& snap);

/// "x,y,label" rows; labels optional (column omitted when empty).
std::string samples_csv(const Matrix& points, const std::vector<int>& labels);

/// Grid CSV: a "x_min,x_max,y_min,y_max,resolution" header line, the bounds
/// line, then resolution rows of resolution values each, y index ascending.
std::string grid_to_csv(const DensityGrid& grid);
DensityGrid grid_from_csv(const std::string& text);

/// Binary P6 heatmap. The colormap is a monotone black->red->yellow->white
/// ramp over value/max (all-zero grids render all black); the image's top row
/// is the grid's highest-y row.
std::string grid_to_ppm(const DensityGrid& grid);

void write_file(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace lsgan
