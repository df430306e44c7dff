#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lsgan/error.hpp"
#include "lsgan/trainer.hpp"

namespace lsgan {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "lsgan-lab-checkpoint";
constexpr int kVersion = 1;

std::string hex_u64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t u64_from_hex(const std::string& s) {
  if (s.size() != 16) throw IoError("checkpoint: bad 64-bit hex word \"" + s + "\"");
  std::uint64_t v = 0;
  for (char c : s) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else throw IoError("checkpoint: bad hex digit in \"" + s + "\"");
    v = (v << 4) | static_cast<std::uint64_t>(d);
  }
  return v;
}

std::string hex_double(double d) { return hex_u64(std::bit_cast<std::uint64_t>(d)); }
double double_from_hex(const std::string& s) {
  return std::bit_cast<double>(u64_from_hex(s));
}

json matrix_to_json(const Matrix& m) {
  std::string hex;
  hex.reserve(m.size() * 16);
  for (std::size_t i = 0; i < m.size(); ++i) hex += hex_double(m[i]);
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(hex)}};
}

Matrix matrix_from_json(const json& j) {
  int rows = j.at("rows").get<int>();
  int cols = j.at("cols").get<int>();
  const std::string& hex = j.at("data").get_ref<const std::string&>();
  Matrix m(rows, cols);
  if (hex.size() != m.size() * 16) {
    throw IoError("checkpoint: matrix data length " + std::to_string(hex.size()) +
                  " does not match shape " + m.shape_str());
  }
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = double_from_hex(hex.substr(i * 16, 16));
  return m;
}

json matrices_to_json(const std::vector<Matrix>& ms) {
  json arr = json::array();
  for (const Matrix& m : ms) arr.push_back(matrix_to_json(m));
  return arr;
}

std::vector<Matrix> matrices_from_json(const json& j) {
  std::vector<Matrix> out;
  for (const json& m : j) out.push_back(matrix_from_json(m));
  return out;
}

json mlp_to_json(const MlpParams& p) {
  return json{{"layer_sizes", p.layer_sizes},
              {"hidden_activation", to_string(p.hidden_activation)},
              {"output_head", p.output_head == OutputHead::sigmoid ? "sigmoid" : "linear"},
              {"seed", p.seed},
              {"weights", matrices_to_json(p.weights)},
              {"biases", matrices_to_json(p.biases)}};
}

MlpParams mlp_from_json(const json& j) {
  MlpParams p;
  p.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
  p.hidden_activation = activation_from_string(j.at("hidden_activation").get<std::string>());
  p.output_head = j.at("output_head").get<std::string>() == "sigmoid"
                      ? OutputHead::sigmoid
                      : OutputHead::linear;
  p.seed = j.at("seed").get<std::uint64_t>();
  p.weights = matrices_from_json(j.at("weights"));
  p.biases = matrices_from_json(j.at("biases"));
  if (p.layer_sizes.size() < 2 || p.weights.size() != p.layer_sizes.size() - 1 ||
      p.biases.size() != p.weights.size()) {
    throw IoError("checkpoint: inconsistent network layout");
  }
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    if (p.weights[i].rows() != p.layer_sizes[i] ||
        p.weights[i].cols() != p.layer_sizes[i + 1] ||
        p.biases[i].cols() != p.layer_sizes[i + 1] || p.biases[i].rows() != 1) {
      throw IoError("checkpoint: weight shapes do not chain at layer " +
                    std::to_string(i));
    }
  }
  return p;
}

json opt_to_json(const OptimizerSnapshot& o) {
  if (o.kind == OptimizerKind::adam) {
    return json{{"kind", "adam"},
                {"step", o.adam.step},
                {"m", matrices_to_json(o.adam.m)},
                {"v", matrices_to_json(o.adam.v)}};
  }
  return json{{"kind", "rmsprop"},
              {"mean_square", matrices_to_json(o.rmsprop.mean_square)}};
}

OptimizerSnapshot opt_from_json(const json& j) {
  OptimizerSnapshot o;
  o.kind = optimizer_kind_from_string(j.at("kind").get<std::string>());
  if (o.kind == OptimizerKind::adam) {
    o.adam.step = j.at("step").get<std::int64_t>();
    o.adam.m = matrices_from_json(j.at("m"));
    o.adam.v = matrices_from_json(j.at("v"));
  } else {
    o.rmsprop.mean_square = matrices_from_json(j.at("mean_square"));
  }
  return o;
}

json stream_to_json(const StreamState& s) {
  return json{{"state", hex_u64(s.rng.state)},
              {"inc", hex_u64(s.rng.inc)},
              {"has_spare", s.bm.has_spare},
              {"spare", hex_double(s.bm.spare)}};
}

StreamState stream_from_json(const json& j) {
  StreamState s;
  s.rng.state = u64_from_hex(j.at("state").get<std::string>());
  s.rng.inc = u64_from_hex(j.at("inc").get<std::string>());
  s.bm.has_spare = j.at("has_spare").get<bool>();
  s.bm.spare = double_from_hex(j.at("spare").get<std::string>());
  return s;
}

}  // namespace

void checkpoint_save(const Checkpoint& ck, const std::filesystem::path& path) {
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["rng_algorithm"] = kRngAlgorithm;
  j["step"] = ck.step;
  j["config_hash"] = ck.config_hash;
  j["generator"] = mlp_to_json(ck.generator);
  j["discriminator"] = mlp_to_json(ck.discriminator);
  j["embed"] = ck.embed ? json{{"mapping", matrix_to_json(ck.embed->mapping)}}
                        : json(nullptr);
  j["opt_g"] = opt_to_json(ck.opt_g);
  j["opt_d"] = opt_to_json(ck.opt_d);
  j["data_stream"] = stream_to_json(ck.data_stream);
  j["latent_stream"] = stream_to_json(ck.latent_stream);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("checkpoint: cannot open " + path.string() + " for writing");
  out << j.dump(1) << '\n';
  if (!out) throw IoError("checkpoint: write to " + path.string() + " failed");
}

Checkpoint checkpoint_load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("checkpoint: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  json j;
  try {
    j = json::parse(buffer.str());
  } catch (const json::exception& e) {
    throw IoError("checkpoint: " + path.string() + " is not valid JSON: " + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormat) {
      throw IoError("checkpoint: unrecognized format field");
    }
    int version = j.at("version").get<int>();
    if (version != kVersion) {
      throw IoError("checkpoint: version " + std::to_string(version) +
                    " not supported (expected " + std::to_string(kVersion) + ")");
    }
    Checkpoint ck;
    ck.step = j.at("step").get<std::int64_t>();
    ck.config_hash = j.at("config_hash").get<std::string>();
    ck.generator = mlp_from_json(j.at("generator"));
    ck.discriminator = mlp_from_json(j.at("discriminator"));
    if (!j.at("embed").is_null()) {
      LabelEmbed e;
      e.mapping = matrix_from_json(j.at("embed").at("mapping"));
      ck.embed = std::move(e);
    }
    ck.opt_g = opt_from_json(j.at("opt_g"));
    ck.opt_d = opt_from_json(j.at("opt_d"));
    ck.data_stream = stream_from_json(j.at("data_stream"));
    ck.latent_stream = stream_from_json(j.at("latent_stream"));
    return ck;
  } catch (const json::exception& e) {
    throw IoError("checkpoint: " + path.string() + " is malformed: " + e.what());
  }
}

}  // namespace lsgan
