// Copyright 2026 The qrobust Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON serialization of models and channels, and the experiment config.

#pragma once

#include "qrobust/channels.hpp"
#include "qrobust/classifier.hpp"
#include "qrobust/data.hpp"
#include "qrobust/qela.hpp"
#include "qrobust/training.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace qrobust {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// A config field failed validation; `field` is a dotted path.
class config_error : public std::invalid_argument {
 public:
  config_error(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// --- Model and component serialization ---------------------------------------

inline json to_json(const EncodingSpec& e) {
  return {{"family", std::string(to_string(e.family))}, {"hyperparams", e.hyperparams}};
}

inline EncodingSpec encoding_from_json(const json& j) {
  const auto family = encoding_family_from_string(j.at("family").get<std::string>());
  if (family == EncodingFamily::GeneralQubit)
    throw std::invalid_argument("general_qubit encodings take caller-supplied functions and cannot be loaded from JSON");
  std::vector<double> hyper;
  if (j.contains("hyperparams")) hyper = j.at("hyperparams").get<std::vector<double>>();
  return EncodingSpec::make(family, hyper);
}

inline json to_json(const ChannelSpec& c) { return {{"kind", std::string(to_string(c.kind))}, {"params", c.params}}; }

inline ChannelSpec channel_spec_from_json(const json& j) {
  ChannelSpec c;
  c.kind = channel_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("params")) c.params = j.at("params").get<std::vector<double>>();
  return c;
}

inline json to_json(const DecisionRule& r) {
  return {{"basis", std::string(to_string(r.basis))}, {"threshold", r.threshold}};
}

inline DecisionRule rule_from_json(const json& j) {
  DecisionRule r;
  if (j.contains("basis")) r.basis = basis_from_string(j.at("basis").get<std::string>());
  if (j.contains("threshold")) r.threshold = j.at("threshold").get<double>();
  r.validate();
  return r;
}

inline json to_json(const ClassifierModel& m) {
  return {{"schema_version", kSchemaVersion},
          {"encoding", to_json(m.encoding)},
          {"ansatz", {{"n_qubits", m.ansatz.n_qubits()}, {"alpha", m.ansatz.alpha}}},
          {"rule", to_json(m.rule)},
          {"classification_qubit", m.classification_qubit}};
}

inline ClassifierModel model_from_json(const json& j) {
  ClassifierModel m;
  m.encoding = encoding_from_json(j.at("encoding"));
  m.ansatz.alpha = j.at("ansatz").at("alpha").get<std::vector<double>>();
  m.ansatz.validate();
  if (j.contains("rule")) m.rule = rule_from_json(j.at("rule"));
  if (j.contains("classification_qubit")) m.classification_qubit = j.at("classification_qubit").get<std::size_t>();
  return m;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return json::parse(in);
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

/// Builds a channel on n qubits; single-qubit kinds act on every qubit.
inline KrausChannel channel_for_model(ChannelSpec spec, std::size_t n_qubits) {
  if (spec.kind == ChannelKind::GlobalDepolarizing && spec.params.size() == 1)
    spec.params.push_back(static_cast<double>(n_qubits));
  if (spec.kind == ChannelKind::Identity && spec.params.empty()) spec.params.push_back(static_cast<double>(n_qubits));
  return lift_to(make_channel(spec), n_qubits);
}

/// Channel spec with its strength parameter replaced (Pauli not supported).
inline ChannelSpec with_strength(ChannelSpec spec, double p) {
  switch (spec.kind) {
    case ChannelKind::BitFlip:
    case ChannelKind::Dephasing:
    case ChannelKind::Depolarizing:
    case ChannelKind::AmplitudeDamping: spec.params = {p}; return spec;
    case ChannelKind::GlobalDepolarizing:
      if (spec.params.empty()) spec.params = {p};
      else spec.params[0] = p;
      return spec;
    default: throw std::invalid_argument("channel '" + std::string(to_string(spec.kind)) + "' has no single strength");
  }
}

// --- Run configuration ---------------------------------------------------------

struct NoiseConfig {
  std::optional<ChannelSpec> after_encoding;
  std::optional<ChannelSpec> after_evolution;
  std::vector<std::pair<std::size_t, ChannelSpec>> interleaved;

  bool empty() const { return !after_encoding && !after_evolution && interleaved.empty(); }

  NoisePlacement build(std::size_t n_qubits) const {
    NoisePlacement n;
    if (after_encoding) n.after_encoding = channel_for_model(*after_encoding, n_qubits);
    if (after_evolution) n.after_evolution = channel_for_model(*after_evolution, n_qubits);
    for (const auto& [k, c] : interleaved) n.interleaved.emplace_back(k, channel_for_model(c, n_qubits));
    return n;
  }
};

struct DatasetConfig {
  std::string kind = "vertical";  // vertical | diagonal | moons | iris | csv
  std::size_t n_points = 500;
  double noise_level = 0.05;
  std::string path;
  std::pair<int, int> classes{0, 2};
  SplitConfig split;
  std::uint64_t seed = 0;
};

struct SweepConfig {
  std::vector<ChannelSpec> channels;
  std::vector<double> strengths;
  std::size_t pauli_steps = 0;
  std::size_t measurement_steps = 0;
};

struct QelaRunConfig {
  EncodingFamilySet families;
  std::size_t subset_size = 0;
  TrainConfig theta_train;
  std::vector<double> landscape_thetas;
  std::vector<double> landscape_phis;
};

struct RunConfig {
  DatasetConfig dataset;
  EncodingSpec encoding = EncodingSpec::dense_angle();
  DecisionRule rule;
  std::size_t classification_qubit = 0;
  NoiseConfig noise;
  TrainConfig train;
  CostKind cost = CostKind::Embedded;
  std::string model_path;
  SweepConfig sweep;
  std::size_t grid_resolution = 200;
  QelaRunConfig qela;
  std::vector<EncodingSpec> bound_encodings;
  std::string out = "out";
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

namespace detail {

template <typename T, typename Fn>
T field(const json& j, const std::string& path, Fn&& parse) {
  try {
    return parse(j);
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error(path, e.what());
  }
}

template <typename T>
void read_opt(const json& obj, const char* key, const std::string& path, T& out) {
  if (!obj.contains(key)) return;
  out = field<T>(obj.at(key), path.empty() ? std::string(key) : path + "." + key, [](const json& v) { return v.get<T>(); });
}

inline std::vector<double> read_range(const json& j, const std::string& path) {
  return field<std::vector<double>>(j, path, [&](const json& v) {
    if (v.is_array()) return v.get<std::vector<double>>();
    const double start = v.at("start").get<double>(), stop = v.at("stop").get<double>(),
                 step = v.at("step").get<double>();
    if (!(step > 0.0) || stop < start) throw std::invalid_argument("range needs step > 0 and stop >= start");
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) out.push_back(start + step * static_cast<double>(i));
    return out;
  });
}

inline ChannelSpec read_channel(const json& j, const std::string& path) {
  return field<ChannelSpec>(j, path, [](const json& v) {
    auto spec = channel_spec_from_json(v);
    // validate parameters now so errors name the config field
    auto probe = spec;
    if (probe.kind == ChannelKind::GlobalDepolarizing && probe.params.size() == 1) probe.params.push_back(1.0);
    if (!probe.params.empty() || probe.kind == ChannelKind::Identity) make_channel(probe);
    return spec;
  });
}

inline TrainConfig read_train(const json& j, const std::string& path, TrainConfig cfg) {
  if (!j.is_object()) throw config_error(path, "must be an object");
  if (j.contains("optimizer"))
    cfg.optimizer = field<OptimizerKind>(j.at("optimizer"), path + ".optimizer",
                                         [](const json& v) { return optimizer_from_string(v.get<std::string>()); });
  if (j.contains("init"))
    cfg.init = field<InitKind>(j.at("init"), path + ".init",
                               [](const json& v) { return init_from_string(v.get<std::string>()); });
  read_opt(j, "max_iters", path, cfg.max_iters);
  read_opt(j, "restarts", path, cfg.restarts);
  read_opt(j, "tolerance", path, cfg.tolerance);
  read_opt(j, "seed", path, cfg.seed);
  read_opt(j, "initial_step", path, cfg.initial_step);
  read_opt(j, "learning_rate", path, cfg.learning_rate);
  field<int>(j, path, [&](const json&) {
    cfg.validate();
    return 0;
  });
  return cfg;
}

inline EncodingSpec read_encoding(const json& j, const std::string& path) {
  return field<EncodingSpec>(j, path, [](const json& v) { return encoding_from_json(v); });
}

}  // namespace detail

/// Parses and validates a run config. Seeds of sub-components default to the
/// top-level seed; `seed_override` (from flags or environment) replaces all.
inline RunConfig parse_run_config(const json& j, std::optional<std::uint64_t> seed_override = std::nullopt) {
  using detail::field;
  using detail::read_opt;
  if (!j.is_object()) throw config_error("<root>", "config must be a JSON object");
  RunConfig c;
  read_opt(j, "seed", "", c.seed);
  if (seed_override) c.seed = *seed_override;
  read_opt(j, "out", "", c.out);
  read_opt(j, "workers", "", c.workers);
  if (c.workers == 0) throw config_error("workers", "must be >= 1");
  const bool explicit_seeds = !seed_override.has_value();

  c.dataset.seed = c.seed;
  c.dataset.split.seed = c.seed;
  if (j.contains("dataset")) {
    const auto& d = j.at("dataset");
    read_opt(d, "kind", "dataset", c.dataset.kind);
    read_opt(d, "n_points", "dataset", c.dataset.n_points);
    read_opt(d, "noise_level", "dataset", c.dataset.noise_level);
    read_opt(d, "path", "dataset", c.dataset.path);
    if (explicit_seeds) read_opt(d, "seed", "dataset", c.dataset.seed);
    if (d.contains("classes")) {
      const auto cls = field<std::vector<int>>(d.at("classes"), "dataset.classes",
                                               [](const json& v) { return v.get<std::vector<int>>(); });
      if (cls.size() != 2) throw config_error("dataset.classes", "must list two class ids");
      c.dataset.classes = {cls[0], cls[1]};
    }
    if (d.contains("split")) {
      read_opt(d.at("split"), "train_fraction", "dataset.split", c.dataset.split.train_fraction);
      if (explicit_seeds) read_opt(d.at("split"), "seed", "dataset.split", c.dataset.split.seed);
    }
  }
  const auto& k = c.dataset.kind;
  if (k != "vertical" && k != "diagonal" && k != "moons" && k != "iris" && k != "csv")
    throw config_error("dataset.kind", "unknown dataset kind '" + k + "'");
  if ((k == "iris" || k == "csv") && c.dataset.path.empty()) throw config_error("dataset.path", "required for " + k);
  if (c.dataset.n_points < 2) throw config_error("dataset.n_points", "must be >= 2");
  if (!(c.dataset.noise_level >= 0.0)) throw config_error("dataset.noise_level", "must be >= 0");
  field<int>(j, "dataset.split.train_fraction", [&](const json&) {
    c.dataset.split.validate();
    return 0;
  });

  if (j.contains("encoding")) c.encoding = detail::read_encoding(j.at("encoding"), "encoding");
  if (j.contains("rule")) c.rule = field<DecisionRule>(j.at("rule"), "rule", [](const json& v) { return rule_from_json(v); });
  if (j.contains("classification_qubit")) {
    const auto q = field<std::int64_t>(j.at("classification_qubit"), "classification_qubit",
                                       [](const json& v) { return v.get<std::int64_t>(); });
    if (q < 0 || q > 1) throw config_error("classification_qubit", "must be 0 or 1");
    c.classification_qubit = static_cast<std::size_t>(q);
  }

  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    if (n.contains("after_encoding")) c.noise.after_encoding = detail::read_channel(n.at("after_encoding"), "noise.after_encoding");
    if (n.contains("after_evolution")) c.noise.after_evolution = detail::read_channel(n.at("after_evolution"), "noise.after_evolution");
    if (n.contains("interleaved")) {
      std::size_t i = 0;
      for (const auto& e : n.at("interleaved")) {
        const std::string p = "noise.interleaved[" + std::to_string(i++) + "]";
        const auto stage = field<std::size_t>(e, p + ".stage", [](const json& v) { return v.at("stage").get<std::size_t>(); });
        if (!e.contains("channel")) throw config_error(p + ".channel", "missing");
        c.noise.interleaved.emplace_back(stage, detail::read_channel(e.at("channel"), p + ".channel"));
      }
    }
  }

  c.train.seed = c.seed;
  if (j.contains("train")) {
    auto t = j.at("train");
    if (!explicit_seeds) t.erase("seed");
    c.train = detail::read_train(t, "train", c.train);
    if (t.contains("cost"))
      c.cost = field<CostKind>(t.at("cost"), "train.cost", [](const json& v) { return cost_from_string(v.get<std::string>()); });
    if (c.cost == CostKind::Indicator && c.train.optimizer != OptimizerKind::NelderMead)
      throw config_error("train.optimizer", "indicator cost requires nelder_mead");
  }
  c.train.workers = c.workers;
  read_opt(j, "model", "", c.model_path);

  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    if (s.contains("channels")) {
      std::size_t i = 0;
      for (const auto& ch : s.at("channels")) {
        const std::string p = "sweep.channels[" + std::to_string(i++) + "]";
        auto spec = field<ChannelSpec>(ch, p, [](const json& v) { return channel_spec_from_json(v); });
        field<int>(ch, p + ".kind", [&](const json&) {
          with_strength(spec, 0.0);
          return 0;
        });
        c.sweep.channels.push_back(spec);
      }
    }
    if (s.contains("strengths")) c.sweep.strengths = detail::read_range(s.at("strengths"), "sweep.strengths");
    for (double p : c.sweep.strengths)
      if (!(p >= 0.0 && p <= 1.0)) throw config_error("sweep.strengths", "strengths must lie in [0, 1]");
    read_opt(s, "pauli_steps", "sweep", c.sweep.pauli_steps);
    read_opt(s, "measurement_steps", "sweep", c.sweep.measurement_steps);
    if (c.sweep.pauli_steps == 1) throw config_error("sweep.pauli_steps", "must be 0 or >= 2");
    if (c.sweep.measurement_steps == 1) throw config_error("sweep.measurement_steps", "must be 0 or >= 2");
  }
  if (j.contains("grid")) read_opt(j.at("grid"), "resolution", "grid", c.grid_resolution);
  if (c.grid_resolution < 2) throw config_error("grid.resolution", "must be >= 2");

  c.qela.theta_train = QelaConfig{}.theta_cfg;
  c.qela.theta_train.seed = c.seed;
  if (j.contains("qela")) {
    const auto& q = j.at("qela");
    if (!q.contains("families") || !q.at("families").is_array() || q.at("families").empty())
      throw config_error("qela.families", "at least one encoding family is required");
    std::size_t i = 0;
    for (const auto& f : q.at("families")) {
      const std::string p = "qela.families[" + std::to_string(i++) + "]";
      EncodingFamilyTemplate t;
      t.spec = detail::read_encoding(f, p);
      read_opt(f, "random_init", p, t.random_init);
      if (f.contains("bounds")) {
        for (const auto& b : f.at("bounds")) {
          const auto pair = field<std::vector<double>>(b, p + ".bounds", [](const json& v) { return v.get<std::vector<double>>(); });
          if (pair.size() != 2 || !(pair[0] < pair[1])) throw config_error(p + ".bounds", "each bound must be [lo, hi] with lo < hi");
          t.bounds.push_back({pair[0], pair[1]});
        }
      }
      c.qela.families.families.push_back(std::move(t));
    }
    read_opt(q, "subset_size", "qela", c.qela.subset_size);
    if (q.contains("theta_train")) {
      auto t = q.at("theta_train");
      if (!explicit_seeds) t.erase("seed");
      c.qela.theta_train = detail::read_train(t, "qela.theta_train", c.qela.theta_train);
    }
    if (q.contains("landscape")) {
      const auto& l = q.at("landscape");
      if (l.contains("thetas")) c.qela.landscape_thetas = detail::read_range(l.at("thetas"), "qela.landscape.thetas");
      if (l.contains("phis")) c.qela.landscape_phis = detail::read_range(l.at("phis"), "qela.landscape.phis");
    }
  }

  if (j.contains("bounds") && j.at("bounds").contains("encodings")) {
    std::size_t i = 0;
    for (const auto& e : j.at("bounds").at("encodings"))
      c.bound_encodings.push_back(detail::read_encoding(e, "bounds.encodings[" + std::to_string(i++) + "]"));
  }
  return c;
}

/// Loads the dataset named by the config.
inline Dataset load_dataset(const DatasetConfig& d) {
  if (d.kind == "iris") {
    auto ds = load_iris(d.path, d.classes);
    ds.split_seed = d.split.seed;
    return ds;
  }
  if (d.kind == "csv") return read_dataset_csv(d.path);
  return gen_synthetic(synthetic_kind_from_string(d.kind), d.n_points, d.noise_level, d.seed);
}

}  // namespace qrobust
