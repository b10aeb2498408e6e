// Copyright 2026 The bilopt Authors
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

#ifndef BILOPT_SERIALIZATION_HPP_
#define BILOPT_SERIALIZATION_HPP_

#include <string>

#include "json.hpp"

#include "bilopt/analysis.hpp"
#include "bilopt/estimator.hpp"
#include "bilopt/predictors.hpp"
#include "bilopt/search_space.hpp"
#include "bilopt/solvers.hpp"
#include "bilopt/synthetic_oracle.hpp"

namespace bilopt {

using Json = nlohmann::json;

// Canonical text form: keys sorted, two-space indent, every float snapped to
// 12 significant digits, trailing newline.  Equal values always produce
// equal bytes, so output files can be diffed across runs.
std::string canonical_json(Json j);
double snap12(double x);

// File helpers.  Reading a missing or unreadable file and failing to write
// raise IoError; malformed JSON content raises InvalidInputError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

// Search space <-> {"num_stages", "max_depth", "depth_choices", "configs"}.
Json space_to_json(const SearchSpaceSpec& spec);
SearchSpaceSpec space_from_json(const Json& j);

// Oracle model <-> {"base", "depth_effects", "config_effects", "epsilon",
// "noise_std", "seed"}.  Effect tables are nested per stage (and per block
// for configs); interactions are re-derived from the seed on load.
Json oracle_to_json(const SearchSpaceSpec& spec, const SyntheticSupernet& m);
SyntheticSupernet oracle_from_json(const SearchSpaceSpec& spec, const Json& j);

// Latency table as CSV rows (stage, block, config_id, latency_ms) plus a
// JSON header {"fixed_overhead_ms"}.
std::string latency_to_csv(const SearchSpaceSpec& spec, const LatencyModel& m);
Json overhead_to_json(const LatencyModel& m);
LatencyModel latency_from_parts(const SearchSpaceSpec& spec,
                                const std::string& csv_text,
                                const Json& header);

// Estimator <-> {"base", "depth_deltas", "config_deltas", "meta"}.
Json estimator_to_json(const SearchSpaceSpec& spec,
                       const BilinearEstimator& est);
BilinearEstimator estimator_from_json(const SearchSpaceSpec& spec,
                                      const Json& j);

// Predictor <-> {"family", "intercept", "linear", "quad_entries", "k"}.
Json predictor_to_json(const SearchSpaceSpec& spec,
                       const QuadraticPredictor& p);
QuadraticPredictor predictor_from_json(const SearchSpaceSpec& spec,
                                       const Json& j);

// Dataset as one CSV row per point (per-stage depths, per-block config ids,
// accuracy) plus a JSON split manifest {"train", "val", "test"}.
std::string dataset_to_csv(const SearchSpaceSpec& spec,
                           const RegressionDataset& data);
Json split_to_json(const RegressionDataset& data);
RegressionDataset dataset_from_parts(const SearchSpaceSpec& spec,
                                     const std::string& csv_text,
                                     const Json& manifest);

// Search result <-> {"arch", "predicted_acc", "latency_ms", "deviation",
// "solver", "seed", "trace"}.  Wall time is intentionally not serialized;
// outputs must be byte-identical across reruns.
Json result_to_json(const SearchSpaceSpec& spec, const SearchResult& r);
SearchResult result_from_json(const SearchSpaceSpec& spec, const Json& j);

Json arch_to_json(const SearchSpaceSpec& spec, const Architecture& arch);
Architecture arch_from_json(const SearchSpaceSpec& spec, const Json& j);

Json rank_report_to_json(const RankReport& r);
Json compare_report_to_json(const SearchSpaceSpec& spec,
                            const CompareReport& r);
Json insight_report_to_json(const InsightReport& r);

}  // namespace bilopt

#endif  // BILOPT_SERIALIZATION_HPP_
