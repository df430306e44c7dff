#include "lsgan/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lsgan/config.hpp"
#include "lsgan/error.hpp"

namespace lsgan {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string runlog_steps_csv(const RunLog& log) {
  std::ostringstream os;
  os << "step,d_loss,g_loss,g_grad_norm\n";
  for (const StepRecord& r : log.steps) {
    os << r.step << ',' << format_double(r.d_loss) << ',' << format_double(r.g_loss)
       << ',' << format_double(r.g_grad_norm) << '\n';
  }
  return os.str();
}

namespace {

json mode_stats_to_json(const ModeStats& stats) {
  return json{{"modes_covered", stats.modes_covered},
              {"high_quality_fraction", stats.high_quality_fraction},
              {"per_mode_counts", stats.per_mode_counts}};
}

json samples_to_json(const Matrix& samples) {
  json rows = json::array();
  for (int i = 0; i < samples.rows(); ++i) {
    rows.push_back(json::array({samples.at(i, 0), samples.at(i, 1)}));
  }
  return rows;
}

}  // namespace

std::string run_summary_json(const RunLog& log) {
  json j;
  j["config"] = json::parse(config_to_json_text(log.config));
  j["config_hash"] = config_hash(log.config);
  j["rng_algorithm"] = log.rng_algorithm;
  j["steps_recorded"] = log.steps.size();
  j["aborted"] = log.aborted;
  if (log.aborted) {
    j["abort_step"] = log.abort_step;
    j["abort_reason"] = log.abort_reason;
  }
  j["final_stats"] = mode_stats_to_json(log.final_stats);
  return j.dump(2) + "\n";
}

std::string snapshot_json(const SnapshotRecord& snap) {
  json j;
  j["step"] = snap.step;
  j["mode_stats"] = mode_stats_to_json(snap.stats);
  j["samples"] = samples_to_json(snap.samples);
  return j.dump() + "\n";
}

std::string samples_csv(const Matrix& points, const std::vector<int>& labels) {
  if (!labels.empty() && static_cast<int>(labels.size()) != points.rows()) {
    throw ConfigError("samples_csv: label count does not match points");
  }
  std::ostringstream os;
  os << (labels.empty() ? "x,y\n" : "x,y,label\n");
  for (int i = 0; i < points.rows(); ++i) {
    os << format_double(points.at(i, 0)) << ',' << format_double(points.at(i, 1));
    if (!labels.empty()) os << ',' << labels[i];
    os << '\n';
  }
  return os.str();
}

std::string grid_to_csv(const DensityGrid& grid) {
  std::ostringstream os;
  os << "x_min,x_max,y_min,y_max,resolution\n";
  os << format_double(grid.spec.x_min) << ',' << format_double(grid.spec.x_max) << ','
     << format_double(grid.spec.y_min) << ',' << format_double(grid.spec.y_max) << ','
     << grid.spec.resolution << '\n';
  for (int iy = 0; iy < grid.spec.resolution; ++iy) {
    for (int ix = 0; ix < grid.spec.resolution; ++ix) {
      if (ix) os << ',';
      os << format_double(grid.at(iy, ix));
    }
    os << '\n';
  }
  return os.str();
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError("grid csv: bad number \"" + s + "\"");
  }
}

}  // namespace

DensityGrid grid_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "x_min,x_max,y_min,y_max,resolution") {
    throw IoError("grid csv: missing header line");
  }
  if (!std::getline(in, line)) throw IoError("grid csv: missing bounds line");
  auto parts = split(line, ',');
  if (parts.size() != 5) throw IoError("grid csv: bounds line needs 5 fields");
  DensityGrid grid;
  grid.spec.x_min = parse_double(parts[0]);
  grid.spec.x_max = parse_double(parts[1]);
  grid.spec.y_min = parse_double(parts[2]);
  grid.spec.y_max = parse_double(parts[3]);
  grid.spec.resolution = static_cast<int>(parse_double(parts[4]));
  grid.spec.validate();
  int res = grid.spec.resolution;
  grid.values.assign(static_cast<std::size_t>(res) * res, 0.0);
  for (int iy = 0; iy < res; ++iy) {
    if (!std::getline(in, line)) throw IoError("grid csv: truncated value rows");
    auto row = split(line, ',');
    if (static_cast<int>(row.size()) != res) {
      throw IoError("grid csv: row " + std::to_string(iy) + " has " +
                    std::to_string(row.size()) + " values, expected " +
                    std::to_string(res));
    }
    for (int ix = 0; ix < res; ++ix) grid.at(iy, ix) = parse_double(row[ix]);
  }
  return grid;
}

std::string grid_to_ppm(const DensityGrid& grid) {
  int res = grid.spec.resolution;
  double vmax = grid.max_value();
  std::string out = "P6\n" + std::to_string(res) + " " + std::to_string(res) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(res) * res * 3);
  auto channel = [](double t) {
    t = std::min(1.0, std::max(0.0, t));
    return static_cast<char>(std::lround(255.0 * t));
  };
  for (int iy = res - 1; iy >= 0; --iy) {  // top image row = highest y
    for (int ix = 0; ix < res; ++ix) {
      double t = vmax > 0.0 ? grid.at(iy, ix) / vmax : 0.0;
      out += channel(3.0 * t);
      out += channel(3.0 * t - 1.0);
      out += channel(3.0 * t - 2.0);
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to " + path.string() + " failed");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace lsgan
