#include "lsgan/config.hpp"

#include <json.hpp>
#include <set>
#include <sstream>
#include <vector>

#include "lsgan/error.hpp"

namespace lsgan {

using nlohmann::json;

const char* to_string(LossFamily f) {
  return f == LossFamily::least_squares ? "least_squares" : "sigmoid_ce";
}
const char* to_string(CeVariant v) {
  return v == CeVariant::minimax ? "minimax" : "non_saturating";
}
const char* to_string(LatentKind k) {
  return k == LatentKind::uniform ? "uniform" : "gaussian";
}
const char* to_string(OptimizerKind k) {
  return k == OptimizerKind::adam ? "adam" : "rmsprop";
}
const char* to_string(Activation a) {
  switch (a) {
    case Activation::relu:
      return "relu";
    case Activation::leaky_relu:
      return "leaky_relu";
    case Activation::tanh:
      return "tanh";
  }
  return "relu";
}

namespace {

[[noreturn]] void bad_enum(const char* what, const std::string& s) {
  throw ConfigError(std::string("config: unknown ") + what + " \"" + s + "\"");
}

}  // namespace

LossFamily loss_family_from_string(const std::string& s) {
  if (s == "least_squares") return LossFamily::least_squares;
  if (s == "sigmoid_ce") return LossFamily::sigmoid_ce;
  bad_enum("loss family", s);
}
CeVariant ce_variant_from_string(const std::string& s) {
  if (s == "minimax") return CeVariant::minimax;
  if (s == "non_saturating") return CeVariant::non_saturating;
  bad_enum("ce variant", s);
}
LatentKind latent_kind_from_string(const std::string& s) {
  if (s == "uniform") return LatentKind::uniform;
  if (s == "gaussian") return LatentKind::gaussian;
  bad_enum("latent kind", s);
}
OptimizerKind optimizer_kind_from_string(const std::string& s) {
  if (s == "adam") return OptimizerKind::adam;
  if (s == "rmsprop") return OptimizerKind::rmsprop;
  bad_enum("optimizer kind", s);
}
Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::relu;
  if (s == "leaky_relu") return Activation::leaky_relu;
  if (s == "tanh") return Activation::tanh;
  bad_enum("activation", s);
}

void TrainConfig::validate() const {
  std::vector<std::string> problems;
  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) problems.push_back(msg);
  };
  require(latent_dim > 0, "latent_dim must be positive");
  require(batch_size > 0, "batch_size must be positive");
  require(total_g_steps >= 0, "total_g_steps must be >= 0");
  require(d_steps_per_g > 0, "d_steps_per_g must be positive");
  require(snapshot_every > 0, "snapshot_every must be positive");
  require(snapshot_samples > 0, "snapshot_samples must be positive");
  require(hidden_width > 0, "hidden_width must be positive");
  require(g_output_gain > 0.0, "g_output_gain must be positive");
  if (conditional) {
    require(embed_dim >= 1 && embed_dim < data.num_modes,
            "embed_dim must satisfy 1 <= embed_dim < data.num_modes");
  }
  try {
    loss.validate();
  } catch (const Error& e) {
    problems.emplace_back(e.what());
  }
  try {
    optimizer.validate();
  } catch (const Error& e) {
    problems.emplace_back(e.what());
  }
  try {
    data.validate();
  } catch (const Error& e) {
    problems.emplace_back(e.what());
  }
  if (!problems.empty()) {
    std::ostringstream os;
    os << "invalid config:";
    for (const auto& p : problems) os << "\n  - " << p;
    throw ConfigError(os.str());
  }
}

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw ConfigError("config: unknown key \"" + where + it.key() + "\"");
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config: bad value for \"" + std::string(key) + "\": " + e.what());
  }
}

void read_enum_str(const json& j, const char* key, std::string& out) {
  read<std::string>(j, key, out);
}

}  // namespace

TrainConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  TrainConfig cfg;
  reject_unknown_keys(
      j,
      {"loss", "latent_dim", "latent_kind", "batch_size", "total_g_steps",
       "d_steps_per_g", "optimizer", "data", "conditional", "embed_dim", "seed",
       "snapshot_every", "snapshot_samples", "hidden_width", "g_hidden_activation",
       "d_hidden_activation", "g_output_gain"},
      "");

  if (j.contains("loss")) {
    const json& l = j.at("loss");
    reject_unknown_keys(l, {"family", "a", "b", "c", "ce_variant", "symmetric_g"},
                        "loss.");
    std::string family = to_string(cfg.loss.family);
    std::string variant = to_string(cfg.loss.ce_variant);
    read_enum_str(l, "family", family);
    read_enum_str(l, "ce_variant", variant);
    cfg.loss.family = loss_family_from_string(family);
    cfg.loss.ce_variant = ce_variant_from_string(variant);
    read(l, "a", cfg.loss.a);
    read(l, "b", cfg.loss.b);
    read(l, "c", cfg.loss.c);
    read(l, "symmetric_g", cfg.loss.symmetric_g);
  }
  read(j, "latent_dim", cfg.latent_dim);
  {
    std::string kind = to_string(cfg.latent_kind);
    read_enum_str(j, "latent_kind", kind);
    cfg.latent_kind = latent_kind_from_string(kind);
  }
  read(j, "batch_size", cfg.batch_size);
  read(j, "total_g_steps", cfg.total_g_steps);
  read(j, "d_steps_per_g", cfg.d_steps_per_g);
  if (j.contains("optimizer")) {
    const json& o = j.at("optimizer");
    reject_unknown_keys(o, {"kind", "lr", "beta1", "beta2", "decay", "eps"},
                        "optimizer.");
    std::string kind = to_string(cfg.optimizer.kind);
    read_enum_str(o, "kind", kind);
    cfg.optimizer.kind = optimizer_kind_from_string(kind);
    if (cfg.optimizer.kind == OptimizerKind::adam) {
      read(o, "lr", cfg.optimizer.adam.lr);
      read(o, "beta1", cfg.optimizer.adam.beta1);
      read(o, "beta2", cfg.optimizer.adam.beta2);
      read(o, "eps", cfg.optimizer.adam.eps);
      if (o.contains("decay")) throw ConfigError("config: adam has no \"decay\"");
    } else {
      read(o, "lr", cfg.optimizer.rmsprop.lr);
      read(o, "decay", cfg.optimizer.rmsprop.decay);
      read(o, "eps", cfg.optimizer.rmsprop.eps);
      if (o.contains("beta1") || o.contains("beta2")) {
        throw ConfigError("config: rmsprop has no \"beta1\"/\"beta2\"");
      }
    }
  }
  if (j.contains("data")) {
    const json& d = j.at("data");
    reject_unknown_keys(d, {"num_modes", "radius", "sigma"}, "data.");
    read(d, "num_modes", cfg.data.num_modes);
    read(d, "radius", cfg.data.radius);
    read(d, "sigma", cfg.data.sigma);
  }
  read(j, "conditional", cfg.conditional);
  read(j, "embed_dim", cfg.embed_dim);
  read(j, "seed", cfg.seed);
  read(j, "snapshot_every", cfg.snapshot_every);
  read(j, "snapshot_samples", cfg.snapshot_samples);
  read(j, "hidden_width", cfg.hidden_width);
  read(j, "g_output_gain", cfg.g_output_gain);
  {
    std::string act = to_string(cfg.g_hidden_activation);
    read_enum_str(j, "g_hidden_activation", act);
    cfg.g_hidden_activation = activation_from_string(act);
  }
  {
    std::string act = to_string(cfg.d_hidden_activation);
    read_enum_str(j, "d_hidden_activation", act);
    cfg.d_hidden_activation = activation_from_string(act);
  }
  return cfg;
}

std::string config_to_json_text(const TrainConfig& cfg) {
  json j;
  j["loss"] = {{"family", to_string(cfg.loss.family)},
               {"a", cfg.loss.a},
               {"b", cfg.loss.b},
               {"c", cfg.loss.c},
               {"ce_variant", to_string(cfg.loss.ce_variant)},
               {"symmetric_g", cfg.loss.symmetric_g}};
  j["latent_dim"] = cfg.latent_dim;
  j["latent_kind"] = to_string(cfg.latent_kind);
  j["batch_size"] = cfg.batch_size;
  j["total_g_steps"] = cfg.total_g_steps;
  j["d_steps_per_g"] = cfg.d_steps_per_g;
  if (cfg.optimizer.kind == OptimizerKind::adam) {
    j["optimizer"] = {{"kind", "adam"},
                      {"lr", cfg.optimizer.adam.lr},
                      {"beta1", cfg.optimizer.adam.beta1},
                      {"beta2", cfg.optimizer.adam.beta2},
                      {"eps", cfg.optimizer.adam.eps}};
  } else {
    j["optimizer"] = {{"kind", "rmsprop"},
                      {"lr", cfg.optimizer.rmsprop.lr},
                      {"decay", cfg.optimizer.rmsprop.decay},
                      {"eps", cfg.optimizer.rmsprop.eps}};
  }
  j["data"] = {{"num_modes", cfg.data.num_modes},
               {"radius", cfg.data.radius},
               {"sigma", cfg.data.sigma}};
  j["conditional"] = cfg.conditional;
  j["embed_dim"] = cfg.embed_dim;
  j["seed"] = cfg.seed;
  j["snapshot_every"] = cfg.snapshot_every;
  j["snapshot_samples"] = cfg.snapshot_samples;
  j["hidden_width"] = cfg.hidden_width;
  j["g_output_gain"] = cfg.g_output_gain;
  j["g_hidden_activation"] = to_string(cfg.g_hidden_activation);
  j["d_hidden_activation"] = to_string(cfg.d_hidden_activation);
  return j.dump(2);
}

std::string config_hash(const TrainConfig& cfg) {
  std::string text = config_to_json_text(cfg);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace lsgan
