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

#include "catch_amalgamated.hpp"
#include "oracles.hpp"

#include <qrobust/io.hpp>

using namespace qrobust;
using qrobust::json;

namespace {

// Returns the field named by the config_error, or "" if parsing succeeded.
std::string error_field(const json& j) {
  try {
    parse_run_config(j);
  } catch (const config_error& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("config defaults", "[test_io]") {
  const auto c = parse_run_config(json::object());
  CHECK(c.dataset.kind == "vertical");
  CHECK(c.encoding.family == EncodingFamily::DenseAngle);
  CHECK(c.cost == CostKind::Embedded);
  CHECK(c.noise.empty());
  CHECK(c.workers == 1);
  CHECK(c.grid_resolution == 200);
}

TEST_CASE("config errors name the offending field", "[test_io]") {
  CHECK(error_field(json::array()) == "<root>");
  CHECK(error_field({{"workers", 0}}) == "workers");
  CHECK(error_field({{"workers", "two"}}) == "workers");
  CHECK(error_field({{"dataset", {{"kind", "spiral"}}}}) == "dataset.kind");
  CHECK(error_field({{"dataset", {{"kind", "iris"}}}}) == "dataset.path");
  CHECK(error_field({{"dataset", {{"n_points", 1}}}}) == "dataset.n_points");
  CHECK(error_field({{"dataset", {{"split", {{"train_fraction", 1.5}}}}}}) == "dataset.split.train_fraction");
  CHECK(error_field({{"encoding", {{"family", "nope"}}}}) == "encoding");
  CHECK(error_field({{"noise", {{"after_evolution", {{"kind", "bit_flip"}, {"params", {1.5}}}}}}}) ==
        "noise.after_evolution");
  CHECK(error_field({{"noise", {{"interleaved", {{{"stage", 0}}}}}}}) == "noise.interleaved[0].channel");
  CHECK(error_field({{"train", {{"restarts", 0}}}}) == "train");
  CHECK(error_field({{"train", {{"cost", "indicator"}, {"optimizer", "gradient_descent"}}}}) == "train.optimizer");
  CHECK(error_field({{"sweep", {{"strengths", {0.1, 1.2}}}}}) == "sweep.strengths");
  CHECK(error_field({{"sweep", {{"strengths", {{"start", 0.5}, {"stop", 0.1}, {"step", 0.1}}}}}}) ==
        "sweep.strengths");
  CHECK(error_field({{"sweep", {{"pauli_steps", 1}}}}) == "sweep.pauli_steps");
  CHECK(error_field({{"sweep", {{"channels", {{{"kind", "pauli"}, {"params", {0.1, 0.1, 0.1}}}}}}}}) ==
        "sweep.channels[0].kind");
  CHECK(error_field({{"grid", {{"resolution", 1}}}}) == "grid.resolution");
  CHECK(error_field({{"qela", {{"families", json::array()}}}}) == "qela.families");
  CHECK(error_field({{"qela", {{"families", {{{"family", "dense_angle"}, {"bounds", {{1.0, 0.0}}}}}}}}}) ==
        "qela.families[0].bounds");
  CHECK(error_field({{"classification_qubit", -1}}) == "classification_qubit");
}

TEST_CASE("seeds propagate and overrides win", "[test_io]") {
  const json j = {{"seed", 5},
                  {"dataset", {{"seed", 9}, {"split", {{"seed", 10}}}}},
                  {"train", {{"seed", 11}}}};
  const auto c = parse_run_config(j);
  CHECK(c.seed == 5);
  CHECK(c.dataset.seed == 9);
  CHECK(c.dataset.split.seed == 10);
  CHECK(c.train.seed == 11);

  const auto d = parse_run_config({{"seed", 5}});
  CHECK(d.dataset.seed == 5);
  CHECK(d.train.seed == 5);
  CHECK(d.qela.theta_train.seed == 5);

  const auto o = parse_run_config(j, 77);
  CHECK(o.seed == 77);
  CHECK(o.dataset.seed == 77);
  CHECK(o.dataset.split.seed == 77);
  CHECK(o.train.seed == 77);
}

TEST_CASE("ranges and full configs parse", "[test_io]") {
  const json j = {
      {"dataset", {{"kind", "moons"}, {"n_points", 100}, {"noise_level", 0.1}}},
      {"encoding", {{"family", "generalized_wavefunction"}, {"hyperparams", {0.3}}}},
      {"noise",
       {{"after_encoding", {{"kind", "dephasing"}, {"params", {0.1}}}},
        {"interleaved", {{{"stage", 1}, {"channel", {{"kind", "global_depolarizing"}, {"params", {0.2}}}}}}}}},
      {"sweep", {{"channels", {{{"kind", "amplitude_damping"}}}}, {"strengths", {{"start", 0.0}, {"stop", 0.5}, {"step", 0.1}}}}},
      {"qela", {{"families", {{{"family", "dense_angle"}, {"hyperparams", {1.5, 6.0}}}}}, {"subset_size", 20}}},
      {"workers", 3}};
  const auto c = parse_run_config(j);
  CHECK(c.encoding.hyperparams == std::vector<double>{0.3});
  REQUIRE(c.noise.after_encoding.has_value());
  CHECK(c.noise.after_encoding->kind == ChannelKind::Dephasing);
  REQUIRE(c.noise.interleaved.size() == 1);
  CHECK(c.noise.interleaved[0].first == 1);
  REQUIRE(c.sweep.strengths.size() == 6);
  CHECK(c.sweep.strengths.back() == Catch::Approx(0.5));
  CHECK(c.qela.families.families.size() == 1);
  CHECK(c.qela.subset_size == 20);
  CHECK(c.train.workers == 3);

  const auto n = c.noise.build(2);
  REQUIRE(n.after_encoding.has_value());
  CHECK(n.after_encoding->n_qubits() == 2);
}

TEST_CASE("model JSON round trip", "[test_io]") {
  oracle::Gen g(80);
  for (std::size_t q : {1u, 2u}) {
    ClassifierModel m;
    m.encoding = q == 1 ? EncodingSpec::dense_angle(1.25, 5.5) : EncodingSpec::dense_angle();
    m.ansatz = g.ansatz(q);
    m.rule.threshold = 0.375;
    m.rule.basis = Basis::X;
    const json j = to_json(m);
    CHECK(j.at("schema_version") == kSchemaVersion);
    const auto r = model_from_json(json::parse(j.dump()));
    CHECK(r.ansatz.alpha == m.ansatz.alpha);
    CHECK(r.encoding.family == m.encoding.family);
    CHECK(r.encoding.hyperparams == m.encoding.hyperparams);
    CHECK(r.rule.threshold == m.rule.threshold);
    CHECK(r.rule.basis == m.rule.basis);
  }
  CHECK_THROWS(model_from_json({{"encoding", {{"family", "dense_angle"}}}, {"ansatz", {{"alpha", {1.0, 2.0}}}}}));
}

TEST_CASE("channel strength substitution", "[test_io]") {
  ChannelSpec s{ChannelKind::BitFlip, {0.1}};
  CHECK(with_strength(s, 0.3).params == std::vector<double>{0.3});
  ChannelSpec g{ChannelKind::GlobalDepolarizing, {0.1, 2}};
  CHECK(with_strength(g, 0.4).params == std::vector<double>{0.4, 2});
  CHECK_THROWS_AS(with_strength(ChannelSpec{ChannelKind::Pauli, {0.1, 0.1, 0.1}}, 0.2), std::invalid_argument);
  CHECK(channel_for_model(ChannelSpec{ChannelKind::Identity, {}}, 2).n_qubits() == 2);
  CHECK(channel_for_model(ChannelSpec{ChannelKind::GlobalDepolarizing, {0.2}}, 2).n_qubits() == 2);
}
