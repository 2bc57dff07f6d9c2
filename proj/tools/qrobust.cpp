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

// qrobust experiment harness. See README.md for subcommands and file formats.

#include "qrobust/io.hpp"
#include "qrobust/qrobust.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace qrobust;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
};

struct Context {
  RunConfig cfg;
  Dataset data;
  Dataset train;
  Dataset test;
  fs::path out;
};

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

Context load_context(const Options& opt) {
  json j;
  try {
    j = read_json_file(opt.config);
  } catch (const json::exception& e) {
    throw config_error("<file>", std::string("invalid JSON: ") + e.what());
  } catch (const std::runtime_error& e) {
    throw config_error("--config", e.what());
  }
  std::optional<std::uint64_t> seed = opt.seed;
  if (!seed) {
    if (auto s = env("QROBUST_SEED")) {
      try {
        seed = std::stoull(*s);
      } catch (const std::exception&) {
        throw config_error("QROBUST_SEED", "not an unsigned integer");
      }
    }
  }
  Context ctx;
  ctx.cfg = parse_run_config(j, seed);
  if (opt.workers) {
    if (*opt.workers == 0) throw config_error("--workers", "must be >= 1");
    ctx.cfg.workers = *opt.workers;
    ctx.cfg.train.workers = *opt.workers;
  }
  if (!opt.out.empty()) ctx.cfg.out = opt.out;
  else if (auto o = env("QROBUST_OUT")) ctx.cfg.out = *o;
  try {
    ctx.data = load_dataset(ctx.cfg.dataset);
    ctx.data.validate();
    ctx.cfg.encoding.qubits_for(ctx.data.n_features());
  } catch (const std::exception& e) {
    throw config_error("dataset", e.what());
  }
  try {
    std::tie(ctx.train, ctx.test) = split(ctx.data, ctx.cfg.dataset.split);
  } catch (const std::exception& e) {
    throw config_error("dataset.split", e.what());
  }
  ctx.out = ctx.cfg.out;
  fs::create_directories(ctx.out);
  return ctx;
}

std::size_t qubits(const Context& ctx, const EncodingSpec& e) { return e.qubits_for(ctx.data.n_features()); }

ClassifierModel base_model(const Context& ctx, const EncodingSpec& enc) {
  ClassifierModel m;
  m.encoding = enc;
  m.rule = ctx.cfg.rule;
  m.classification_qubit = ctx.cfg.classification_qubit;
  m.ansatz = AnsatzParams::zeros(qubits(ctx, enc));
  try {
    m.validate(ctx.data.n_features());
  } catch (const std::exception& e) {
    throw config_error("encoding", e.what());
  }
  return m;
}

NoisePlacement build_noise(const Context& ctx, std::size_t n_qubits) {
  try {
    auto n = ctx.cfg.noise.build(n_qubits);
    n.validate(n_qubits, ansatz_stages(AnsatzParams::zeros(n_qubits)).size());
    return n;
  } catch (const std::exception& e) {
    throw config_error("noise", e.what());
  }
}

/// The configured model file, or a model trained noiselessly on the train split.
ClassifierModel obtain_model(const Context& ctx, TrainResult* trained = nullptr) {
  if (!ctx.cfg.model_path.empty()) {
    ClassifierModel m;
    try {
      m = model_from_json(read_json_file(ctx.cfg.model_path));
      m.validate(ctx.data.n_features());
    } catch (const std::exception& e) {
      throw config_error("model", e.what());
    }
    return m;
  }
  ClassifierModel m = base_model(ctx, ctx.cfg.encoding);
  auto r = train(m, ctx.train, ctx.cfg.cost, NoisePlacement{}, ctx.cfg.train);
  m.ansatz = r.best_params;
  if (trained) *trained = std::move(r);
  return m;
}

std::ofstream open_out(const Context& ctx, const std::string& name) {
  std::ofstream os(ctx.out / name);
  if (!os) throw std::runtime_error("cannot write " + (ctx.out / name).string());
  os << std::setprecision(17);
  return os;
}

void write_json(const Context& ctx, const std::string& name, const json& j) {
  write_json_file((ctx.out / name).string(), j);
}

std::string feature_header(std::size_t n) {
  std::string h;
  for (std::size_t j = 0; j < n; ++j) h += "x" + std::to_string(j + 1) + ",";
  return h;
}

json eval_json(const EvalResult& e) {
  return {{"accuracy", e.accuracy}, {"cost", e.cost}, {"embedded_rescaled", e.embedded_rescaled}};
}

json noise_json(const NoiseConfig& n) {
  json j = json::object();
  if (n.after_encoding) j["after_encoding"] = to_json(*n.after_encoding);
  if (n.after_evolution) j["after_evolution"] = to_json(*n.after_evolution);
  if (!n.interleaved.empty()) {
    j["interleaved"] = json::array();
    for (const auto& [k, c] : n.interleaved) j["interleaved"].push_back({{"stage", k}, {"channel", to_json(c)}});
  }
  return j;
}

json dataset_json(const Context& ctx) {
  return {{"name", ctx.data.name}, {"size", ctx.data.size()}, {"n_train", ctx.train.size()}, {"n_test", ctx.test.size()}};
}

// --- Subcommands ---------------------------------------------------------------

int cmd_gen_data(const Context& ctx) {
  write_dataset_csv((ctx.out / "dataset.csv").string(), ctx.data);
  write_dataset_csv((ctx.out / "train.csv").string(), ctx.train);
  write_dataset_csv((ctx.out / "test.csv").string(), ctx.test);
  return kExitOk;
}

int cmd_train(const Context& ctx) {
  if (!ctx.cfg.model_path.empty()) throw config_error("model", "train does not take an input model");
  TrainResult r;
  const ClassifierModel m = obtain_model(ctx, &r);
  write_json(ctx, "model.json", to_json(m));
  json metrics = {{"schema_version", kSchemaVersion},
                  {"command", "train"},
                  {"dataset", dataset_json(ctx)},
                  {"encoding", to_json(m.encoding)},
                  {"cost_kind", std::string(to_string(ctx.cfg.cost))},
                  {"best_cost", r.best_cost},
                  {"restart_index", r.restart_index},
                  {"restart_costs", r.restart_costs},
                  {"train", eval_json(evaluate(m, m.ansatz, ctx.train))},
                  {"test", eval_json(evaluate(m, m.ansatz, ctx.test))}};
  if (!ctx.cfg.noise.empty()) {
    metrics["noise"] = noise_json(ctx.cfg.noise);
    metrics["noisy_test"] = eval_json(evaluate(m, m.ansatz, ctx.test, build_noise(ctx, m.n_qubits())));
  }
  write_json(ctx, "metrics.json", metrics);
  auto hist = open_out(ctx, "history.csv");
  hist << "iteration,cost\n";
  for (const auto& h : r.history) hist << h.iteration << ',' << h.cost << '\n';
  return kExitOk;
}

int cmd_evaluate(const Context& ctx) {
  if (ctx.cfg.model_path.empty()) throw config_error("model", "evaluate requires a model file");
  const ClassifierModel m = obtain_model(ctx);
  const NoisePlacement noise = build_noise(ctx, m.n_qubits());
  const auto test = evaluate(m, m.ansatz, ctx.test, noise);
  json metrics = {{"schema_version", kSchemaVersion},
                  {"command", "evaluate"},
                  {"dataset", dataset_json(ctx)},
                  {"noise", noise_json(ctx.cfg.noise)},
                  {"train", eval_json(evaluate(m, m.ansatz, ctx.train, noise))},
                  {"test", eval_json(test)}};
  write_json(ctx, "metrics.json", metrics);
  auto os = open_out(ctx, "predictions.csv");
  os << feature_header(ctx.data.n_features()) << "label_true,label_pred,score\n";
  for (std::size_t i = 0; i < ctx.test.size(); ++i) {
    for (double v : ctx.test.points[i]) os << v << ',';
    const auto& p = test.per_point[i];
    os << p.label_true << ',' << p.label_pred << ',' << p.score << '\n';
  }
  return kExitOk;
}

int cmd_robustness_scan(const Context& ctx) {
  const ClassifierModel m = obtain_model(ctx);
  const std::size_t nq = m.n_qubits();
  const NoisePlacement noise = build_noise(ctx, nq);
  const Dataset& eval = ctx.test;
  const auto report = robust_set(m, eval, noise);

  auto mask = open_out(ctx, "robust_mask.csv");
  mask << feature_header(eval.n_features()) << "label_true,label_noiseless,label_noisy,robust\n";
  for (std::size_t i = 0; i < eval.size(); ++i) {
    for (double v : eval.points[i]) mask << v << ',';
    mask << eval.labels[i] << ',' << report.labels_noiseless[i] << ',' << report.labels_noisy[i] << ','
         << (report.flags[i] ? 1 : 0) << '\n';
  }
  write_json(ctx, "robustness.json",
             {{"schema_version", kSchemaVersion},
              {"noise", noise_json(ctx.cfg.noise)},
              {"delta", report.delta},
              {"changed_count", report.changed_count},
              {"robust_count", report.robust_count()},
              {"completely_robust", report.completely_robust},
              {"noiseless_cost", report.noiseless_cost},
              {"noisy_cost", report.noisy_cost},
              {"delta_cost", report.delta_cost},
              {"noiseless_embedded", report.noiseless_embedded},
              {"noisy_embedded", report.noisy_embedded},
              {"delta_embedded", report.delta_embedded}});

  struct Cell {
    std::size_t channel = 0;
    double strength = 0.0;
    RobustnessReport report;
  };
  const auto& sw = ctx.cfg.sweep;
  const std::size_t n_cells = sw.channels.size() * sw.strengths.size();
  const auto cells = parallel_map(n_cells, ctx.cfg.workers, [&](std::size_t k) {
    const std::size_t c = k / sw.strengths.size();
    const double p = sw.strengths[k % sw.strengths.size()];
    const auto ch = channel_for_model(with_strength(sw.channels[c], p), nq);
    return Cell{c, p, robust_set(m, eval, NoisePlacement::after_evolution_only(ch))};
  });
  auto dvs = open_out(ctx, "delta_vs_strength.csv");
  dvs << "channel,strength,delta,changed_count,noiseless_accuracy,noisy_accuracy,delta_embedded\n";
  for (const auto& cell : cells)
    dvs << to_string(sw.channels[cell.channel].kind) << ',' << cell.strength << ',' << cell.report.delta << ','
        << cell.report.changed_count << ',' << 1.0 - cell.report.noiseless_cost << ','
        << 1.0 - cell.report.noisy_cost << ',' << cell.report.delta_embedded << '\n';

  if (sw.pauli_steps >= 2) {
    auto os = open_out(ctx, "pauli_grid.csv");
    os << "p_x,p_y,changed_fraction,misclassified_fraction\n";
    for (const auto& c : pauli_sweep(m, eval, sw.pauli_steps))
      os << c.p_x << ',' << c.p_y << ',' << c.changed_fraction << ',' << c.misclassified_fraction << '\n';
  }
  if (sw.measurement_steps >= 2) {
    auto os = open_out(ctx, "measurement_grid.csv");
    os << "p00,p11,changed_fraction,misclassified_fraction\n";
    for (const auto& c : measurement_sweep(m, eval, sw.measurement_steps))
      os << c.p00 << ',' << c.p11 << ',' << c.changed_fraction << ',' << c.misclassified_fraction << '\n';
  }
  return kExitOk;
}

int cmd_boundary_grid(const Context& ctx) {
  if (ctx.data.n_features() != 2) throw config_error("dataset", "boundary-grid needs two features");
  const ClassifierModel m = obtain_model(ctx);
  const CompiledModel cm(m);
  const std::size_t r = ctx.cfg.grid_resolution;
  auto os = open_out(ctx, "grid.csv");
  os << "x1,x2,score,label\n";
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      const double x1 = static_cast<double>(i) / static_cast<double>(r - 1);
      const double x2 = static_cast<double>(j) / static_cast<double>(r - 1);
      double score = 0.0;
      try {
        score = cm.score({x1, x2});
      } catch (const std::domain_error&) {
        continue;  // outside the encoding domain, e.g. the origin for wavefunction encodings
      }
      os << x1 << ',' << x2 << ',' << score << ',' << m.rule.label(score) << '\n';
    }
  }
  write_json(ctx, "model.json", to_json(m));
  return kExitOk;
}

int cmd_qela(const Context& ctx) {
  if (ctx.cfg.qela.families.families.empty()) throw config_error("qela.families", "at least one encoding family is required");
  QelaConfig q;
  q.subset_size = ctx.cfg.qela.subset_size;
  if (q.subset_size > ctx.train.size()) throw config_error("qela.subset_size", "exceeds the training set");
  const std::size_t nq = qubits(ctx, ctx.cfg.qela.families.families.front().spec);
  for (const auto& f : ctx.cfg.qela.families.families)
    if (qubits(ctx, f.spec) != nq) throw config_error("qela.families", "all families must use the same qubit count");
  q.noise = build_noise(ctx, nq);
  q.alpha_cfg = ctx.cfg.train;
  q.alpha_cost = ctx.cfg.cost;
  q.theta_cfg = ctx.cfg.qela.theta_train;
  q.seed = ctx.cfg.seed;
  q.workers = ctx.cfg.workers;
  q.alpha_cfg.workers = 1;
  const auto res = run_qela(ctx.train, ctx.cfg.qela.families, q, ctx.cfg.rule);

  json fams = json::array();
  for (const auto& f : res.families)
    fams.push_back({{"family", std::string(to_string(f.initial.family))},
                    {"initial_hyperparams", f.initial.hyperparams},
                    {"tuned_hyperparams", f.tuned.hyperparams},
                    {"alpha", f.alpha.alpha},
                    {"noiseless_cost", f.noiseless_cost},
                    {"noisy_fixed_cost", f.noisy_fixed_cost},
                    {"post_cost", f.post_cost},
                    {"subset_size", f.subset.size()}});
  write_json(ctx, "qela_results.json",
             {{"schema_version", kSchemaVersion},
              {"dataset", dataset_json(ctx)},
              {"noise", noise_json(ctx.cfg.noise)},
              {"best_family", res.best_family},
              {"best_cost", res.best_cost},
              {"best_alpha", res.best_alpha.alpha},
              {"best_hyperparams", res.best_hyperparams},
              {"families", fams}});

  const auto& l = ctx.cfg.qela;
  if (!l.landscape_thetas.empty() && !l.landscape_phis.empty()) {
    for (std::size_t j = 0; j < res.families.size(); ++j) {
      const auto& f = res.families[j];
      if (f.initial.hyperparams.size() != 2) continue;
      ClassifierModel m = base_model(ctx, f.initial);
      m.ansatz = f.alpha;
      const auto cells = hyperparameter_landscape(m, ctx.data, q.noise, l.landscape_thetas, l.landscape_phis,
                                                  ctx.cfg.workers);
      auto os = open_out(ctx, "landscape.csv");
      os << "theta,phi,accuracy_noiseless,accuracy_noisy,delta\n";
      for (const auto& c : cells)
        os << c.theta << ',' << c.phi << ',' << c.accuracy_noiseless << ',' << c.accuracy_noisy << ',' << c.delta << '\n';
      break;
    }
  }
  return kExitOk;
}

int cmd_bounds(const Context& ctx) {
  std::vector<EncodingSpec> encodings = ctx.cfg.bound_encodings;
  if (encodings.empty()) encodings.push_back(ctx.cfg.encoding);
  std::vector<ChannelSpec> channels = ctx.cfg.sweep.channels;
  if (channels.empty())
    channels = {{ChannelKind::BitFlip, {}}, {ChannelKind::AmplitudeDamping, {}}, {ChannelKind::Dephasing, {}},
                {ChannelKind::GlobalDepolarizing, {}}};
  std::vector<double> strengths = ctx.cfg.sweep.strengths;
  if (strengths.empty())
    for (int i = 0; i <= 10; ++i) strengths.push_back(0.05 * i);

  std::vector<ClassifierModel> models;
  for (const auto& e : encodings) {
    ClassifierModel m = base_model(ctx, e);
    m.ansatz = train(m, ctx.train, ctx.cfg.cost, NoisePlacement{}, ctx.cfg.train).best_params;
    models.push_back(std::move(m));
  }

  struct Row {
    double fidelity = 0.0, mixed = 0.0, average = 0.0, delta_cost = 0.0;
    std::size_t changed = 0;
  };
  const std::size_t per_enc = channels.size() * strengths.size();
  const auto rows = parallel_map(models.size() * per_enc, ctx.cfg.workers, [&](std::size_t k) {
    const auto& m = models[k / per_enc];
    const std::size_t rem = k % per_enc;
    const auto ch = channel_for_model(with_strength(channels[rem / strengths.size()], strengths[rem % strengths.size()]),
                                      m.n_qubits());
    const auto noise = NoisePlacement::after_evolution_only(ch);
    const auto fids = point_fidelities(m, ctx.data, noise);
    const auto rep = robust_set(m, ctx.data, noise);
    Row r;
    for (double f : fids) r.fidelity += f / static_cast<double>(fids.size());
    r.mixed = bound_delta_cost_mixed(m, ctx.data, noise);
    r.average = bound_delta_cost_average(m, ctx.data, noise);
    r.delta_cost = rep.delta_embedded;
    r.changed = rep.changed_count;
    return r;
  });
  auto os = open_out(ctx, "bounds.csv");
  os << "encoding,channel,strength,fidelity,mixed_bound,average_bound,delta_cost,changed_count\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::size_t rem = k % per_enc;
    const auto& r = rows[k];
    os << to_string(models[k / per_enc].encoding.family) << ',' << to_string(channels[rem / strengths.size()].kind) << ','
       << strengths[rem % strengths.size()] << ',' << r.fidelity << ',' << r.mixed << ',' << r.average << ','
       << r.delta_cost << ',' << r.changed << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrobust: robustness analysis of quantum binary classifiers"};
  app.require_subcommand(1);
  Options opt;
  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const Context&);
  };
  const Sub subs[] = {
      {"train", "train a classifier; writes model.json, metrics.json, history.csv", cmd_train},
      {"evaluate", "evaluate a saved model; writes metrics.json, predictions.csv", cmd_evaluate},
      {"robustness-scan", "robust sets and noise sweeps", cmd_robustness_scan},
      {"boundary-grid", "scores on a lattice over the unit square; writes grid.csv", cmd_boundary_grid},
      {"qela", "encoding learning; writes qela_results.json", cmd_qela},
      {"bounds", "fidelity bounds versus channel strength; writes bounds.csv", cmd_bounds},
      {"gen-data", "write the configured dataset and its split as CSV", cmd_gen_data},
  };
  std::uint64_t seed = 0;
  std::size_t workers = 0;
  int (*chosen)(const Context&) = nullptr;
  for (const auto& s : subs) {
    auto* sc = app.add_subcommand(s.name, s.help);
    sc->add_option("--config", opt.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sc->add_option("--out", opt.out, "output directory (overrides QROBUST_OUT and config)");
    sc->add_option("--seed", seed, "base seed (overrides QROBUST_SEED and config)");
    sc->add_option("--workers", workers, "worker threads for sweeps and restarts");
    sc->callback([&chosen, run = s.run] { chosen = run; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }
  for (auto* sc : app.get_subcommands()) {
    if (sc->count("--seed") > 0) opt.seed = seed;
    if (sc->count("--workers") > 0) opt.workers = workers;
  }
  try {
    const Context ctx = load_context(opt);
    return chosen(ctx);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
