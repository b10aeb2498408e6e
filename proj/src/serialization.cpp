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

#include "bilopt/serialization.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace bilopt {

namespace {

std::string format12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void snap_floats(Json& j) {
  if (j.is_number_float()) {
    j = snap12(j.get<double>());
  } else if (j.is_object() || j.is_array()) {
    for (auto& v : j) snap_floats(v);
  }
}

// Field access that reports the missing or mistyped key instead of the raw
// library diagnostics.
template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidInputError(std::string("missing field \"") + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw InvalidInputError(std::string("field \"") + key +
                            "\" has the wrong type: " + e.what());
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

int parse_int(const std::string& s) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw InvalidInputError("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw InvalidInputError("not an integer: \"" + s + "\"");
  }
}

double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw InvalidInputError("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw InvalidInputError("not a number: \"" + s + "\"");
  }
}

int config_pos_by_id(const SearchSpaceSpec& spec, int id) {
  for (int c = 0; c < spec.num_configs(); ++c) {
    if (spec.configs()[c].id == id) return c;
  }
  throw InvalidInputError("unknown config id " + std::to_string(id));
}

Json depth_table_to_json(const SearchSpaceSpec& spec,
                         const std::vector<double>& table) {
  Json out = Json::array();
  for (int s = 0; s < spec.num_stages(); ++s) {
    Json stage = Json::array();
    for (int pos = 0; pos < spec.beta_group_size(s); ++pos) {
      stage.push_back(table[spec.beta_index(s, pos)]);
    }
    out.push_back(std::move(stage));
  }
  return out;
}

std::vector<double> depth_table_from_json(const SearchSpaceSpec& spec,
                                          const Json& j, const char* key) {
  if (!j.is_array() || static_cast<int>(j.size()) != spec.num_stages()) {
    throw InvalidInputError(std::string(key) + " must have one row per stage");
  }
  std::vector<double> table(spec.beta_size());
  for (int s = 0; s < spec.num_stages(); ++s) {
    const Json& stage = j[s];
    if (!stage.is_array() ||
        static_cast<int>(stage.size()) != spec.beta_group_size(s)) {
      throw InvalidInputError(std::string(key) + " row " + std::to_string(s) +
                              " must have one entry per allowed depth");
    }
    for (int pos = 0; pos < spec.beta_group_size(s); ++pos) {
      if (!stage[pos].is_number()) {
        throw InvalidInputError(std::string(key) + " entries must be numbers");
      }
      table[spec.beta_index(s, pos)] = stage[pos].get<double>();
    }
  }
  return table;
}

Json config_table_to_json(const SearchSpaceSpec& spec,
                          const std::vector<double>& table) {
  Json out = Json::array();
  for (int s = 0; s < spec.num_stages(); ++s) {
    Json stage = Json::array();
    for (int b = 0; b < spec.max_depth(); ++b) {
      Json block = Json::array();
      for (int c = 0; c < spec.num_configs(); ++c) {
        block.push_back(table[spec.alpha_index(s, b, c)]);
      }
      stage.push_back(std::move(block));
    }
    out.push_back(std::move(stage));
  }
  return out;
}

std::vector<double> config_table_from_json(const SearchSpaceSpec& spec,
                                           const Json& j, const char* key) {
  if (!j.is_array() || static_cast<int>(j.size()) != spec.num_stages()) {
    throw InvalidInputError(std::string(key) + " must have one row per stage");
  }
  std::vector<double> table(spec.alpha_size());
  for (int s = 0; s < spec.num_stages(); ++s) {
    const Json& stage = j[s];
    if (!stage.is_array() ||
        static_cast<int>(stage.size()) != spec.max_depth()) {
      throw InvalidInputError(std::string(key) + " stage " +
                              std::to_string(s) +
                              " must have one row per block");
    }
    for (int b = 0; b < spec.max_depth(); ++b) {
      const Json& block = stage[b];
      if (!block.is_array() ||
          static_cast<int>(block.size()) != spec.num_configs()) {
        throw InvalidInputError(std::string(key) +
                                " rows must have one entry per config");
      }
      for (int c = 0; c < spec.num_configs(); ++c) {
        if (!block[c].is_number()) {
          throw InvalidInputError(std::string(key) +
                                  " entries must be numbers");
        }
        table[spec.alpha_index(s, b, c)] = block[c].get<double>();
      }
    }
  }
  return table;
}

}  // namespace

double snap12(double x) { return std::strtod(format12(x).c_str(), nullptr); }

std::string canonical_json(Json j) {
  snap_floats(j);
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path);
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

Json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw InvalidInputError("malformed JSON in " + path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  write_text_file(path, canonical_json(j));
}

Json space_to_json(const SearchSpaceSpec& spec) {
  Json configs = Json::array();
  for (const BlockConfig& c : spec.configs()) {
    configs.push_back(
        {{"id", c.id}, {"er", c.er}, {"k", c.k}, {"se", c.se}});
  }
  Json depth_choices = Json::array();
  for (int s = 0; s < spec.num_stages(); ++s) {
    depth_choices.push_back(spec.depth_choices(s));
  }
  return Json{{"num_stages", spec.num_stages()},
              {"max_depth", spec.max_depth()},
              {"depth_choices", depth_choices},
              {"configs", configs}};
}

SearchSpaceSpec space_from_json(const Json& j) {
  const int num_stages = field<int>(j, "num_stages");
  const int max_depth = field<int>(j, "max_depth");
  const auto depth_choices =
      field<std::vector<std::vector<int>>>(j, "depth_choices");
  if (static_cast<int>(depth_choices.size()) != num_stages) {
    throw InvalidInputError("num_stages does not match depth_choices length");
  }
  const Json configs_json = field<Json>(j, "configs");
  if (!configs_json.is_array()) {
    throw InvalidInputError("configs must be an array");
  }
  std::vector<BlockConfig> configs;
  for (const Json& c : configs_json) {
    configs.push_back({field<int>(c, "id"), field<int>(c, "er"),
                       field<int>(c, "k"), field<bool>(c, "se")});
  }
  return SearchSpaceSpec(max_depth, depth_choices, std::move(configs));
}

Json oracle_to_json(const SearchSpaceSpec& spec, const SyntheticSupernet& m) {
  check_shape(spec, m);
  return Json{{"base", m.base},
              {"depth_effects", depth_table_to_json(spec, m.depth_effects)},
              {"config_effects", config_table_to_json(spec, m.config_effects)},
              {"epsilon", m.epsilon},
              {"noise_std", m.noise_std},
              {"seed", m.seed}};
}

SyntheticSupernet oracle_from_json(const SearchSpaceSpec& spec,
                                   const Json& j) {
  SyntheticSupernet m;
  m.base = field<double>(j, "base");
  m.depth_effects =
      depth_table_from_json(spec, field<Json>(j, "depth_effects"),
                            "depth_effects");
  m.config_effects =
      config_table_from_json(spec, field<Json>(j, "config_effects"),
                             "config_effects");
  m.epsilon = field<double>(j, "epsilon");
  m.noise_std = field<double>(j, "noise_std");
  m.seed = field<std::uint64_t>(j, "seed");
  if (m.epsilon < 0.0 || m.noise_std < 0.0) {
    throw InvalidInputError("epsilon and noise_std must be nonnegative");
  }
  m.ensure_interactions(spec);
  return m;
}

std::string latency_to_csv(const SearchSpaceSpec& spec,
                           const LatencyModel& m) {
  check_shape(spec, m);
  std::string out = "stage,block,config_id,latency_ms\n";
  for (int s = 0; s < spec.num_stages(); ++s) {
    for (int b = 0; b < spec.max_depth(); ++b) {
      for (int c = 0; c < spec.num_configs(); ++c) {
        out += std::to_string(s) + "," + std::to_string(b) + "," +
               std::to_string(spec.configs()[c].id) + "," +
               format12(m.block_latency[spec.alpha_index(s, b, c)]) + "\n";
      }
    }
  }
  return out;
}

Json overhead_to_json(const LatencyModel& m) {
  return Json{{"fixed_overhead_ms", m.fixed_overhead}};
}

LatencyModel latency_from_parts(const SearchSpaceSpec& spec,
                                const std::string& csv_text,
                                const Json& header) {
  const std::vector<std::string> lines = csv_lines(csv_text);
  if (lines.empty() ||
      split_csv_line(lines[0]) !=
          std::vector<std::string>{"stage", "block", "config_id",
                                   "latency_ms"}) {
    throw InvalidInputError("latency CSV must start with the header "
                            "stage,block,config_id,latency_ms");
  }
  LatencyModel m;
  m.block_latency.assign(spec.alpha_size(), 0.0);
  std::vector<bool> seen(spec.alpha_size(), false);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::vector<std::string> f = split_csv_line(lines[i]);
    if (f.size() != 4) {
      throw InvalidInputError("latency CSV row " + std::to_string(i) +
                              " must have 4 fields");
    }
    const int s = parse_int(f[0]);
    const int b = parse_int(f[1]);
    const int c = config_pos_by_id(spec, parse_int(f[2]));
    if (s < 0 || s >= spec.num_stages() || b < 0 || b >= spec.max_depth()) {
      throw InvalidInputError("latency CSV row " + std::to_string(i) +
                              " addresses a block outside the space");
    }
    const int idx = spec.alpha_index(s, b, c);
    if (seen[idx]) {
      throw InvalidInputError("duplicate latency entry for stage " +
                              std::to_string(s) + " block " +
                              std::to_string(b));
    }
    seen[idx] = true;
    const double v = parse_double(f[3]);
    if (!(v > 0.0)) {
      throw InvalidInputError("latencies must be strictly positive");
    }
    m.block_latency[idx] = v;
  }
  for (int idx = 0; idx < spec.alpha_size(); ++idx) {
    if (!seen[idx]) {
      throw InvalidInputError("latency CSV is missing entries");
    }
  }
  m.fixed_overhead = field<double>(header, "fixed_overhead_ms");
  if (m.fixed_overhead < 0.0) {
    throw InvalidInputError("fixed_overhead_ms must be nonnegative");
  }
  return m;
}

Json estimator_to_json(const SearchSpaceSpec& spec,
                       const BilinearEstimator& est) {
  check_shape(spec, est);
  return Json{{"base", est.base},
              {"depth_deltas", depth_table_to_json(spec, est.depth_deltas)},
              {"config_deltas", config_table_to_json(spec, est.config_deltas)},
              {"meta", Json{{"n_per_probe", est.meta.n_per_probe},
                            {"n_repeats", est.meta.n_repeats},
                            {"seed", est.meta.seed}}}};
}

BilinearEstimator estimator_from_json(const SearchSpaceSpec& spec,
                                      const Json& j) {
  BilinearEstimator est;
  est.base = field<double>(j, "base");
  est.depth_deltas =
      depth_table_from_json(spec, field<Json>(j, "depth_deltas"),
                            "depth_deltas");
  est.config_deltas =
      config_table_from_json(spec, field<Json>(j, "config_deltas"),
                             "config_deltas");
  const Json meta = field<Json>(j, "meta");
  est.meta.n_per_probe = field<int>(meta, "n_per_probe");
  est.meta.n_repeats = field<int>(meta, "n_repeats");
  est.meta.seed = field<std::uint64_t>(meta, "seed");
  return est;
}

Json predictor_to_json(const SearchSpaceSpec& spec,
                       const QuadraticPredictor& p) {
  if (static_cast<int>(p.linear.size()) != spec.zeta_size()) {
    throw DimensionError("predictor shape does not match spec");
  }
  Json quad = Json::array();
  for (const QuadEntry& q : p.quad) {
    quad.push_back({{"i", q.i}, {"j", q.j}, {"v", q.v}});
  }
  return Json{{"family", to_string(p.family)},
              {"intercept", p.intercept},
              {"linear", p.linear},
              {"quad_entries", quad},
              {"k", p.k}};
}

QuadraticPredictor predictor_from_json(const SearchSpaceSpec& spec,
                                       const Json& j) {
  QuadraticPredictor p;
  p.family = feature_family_from_string(field<std::string>(j, "family"));
  p.intercept = field<double>(j, "intercept");
  p.linear = field<std::vector<double>>(j, "linear");
  if (static_cast<int>(p.linear.size()) != spec.zeta_size()) {
    throw InvalidInputError("linear coefficient length does not match spec");
  }
  const Json quad = field<Json>(j, "quad_entries");
  if (!quad.is_array()) {
    throw InvalidInputError("quad_entries must be an array");
  }
  for (const Json& q : quad) {
    const int i = field<int>(q, "i");
    const int jj = field<int>(q, "j");
    if (i < 0 || jj >= spec.zeta_size() || i >= jj) {
      throw InvalidInputError("quad entry indices must satisfy 0 <= i < j");
    }
    p.quad.push_back({i, jj, field<double>(q, "v")});
  }
  p.k = field<int>(j, "k");
  return p;
}

std::string dataset_to_csv(const SearchSpaceSpec& spec,
                           const RegressionDataset& data) {
  if (data.points.size() != data.targets.size()) {
    throw DimensionError("dataset points and targets differ in length");
  }
  std::string out;
  for (int s = 0; s < spec.num_stages(); ++s) {
    out += "depth_s" + std::to_string(s) + ",";
  }
  for (int s = 0; s < spec.num_stages(); ++s) {
    for (int b = 0; b < spec.max_depth(); ++b) {
      out += "cfg_s" + std::to_string(s) + "_b" + std::to_string(b) + ",";
    }
  }
  out += "acc\n";
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    const Architecture& arch = data.points[i];
    if (static_cast<int>(arch.depth.size()) != spec.num_stages()) {
      throw DimensionError("dataset architecture shape mismatch");
    }
    for (int s = 0; s < spec.num_stages(); ++s) {
      out += std::to_string(arch.depth[s]) + ",";
    }
    for (int s = 0; s < spec.num_stages(); ++s) {
      for (int b = 0; b < spec.max_depth(); ++b) {
        out += std::to_string(spec.configs()[arch.config[s][b]].id) + ",";
      }
    }
    out += format12(data.targets[i]) + "\n";
  }
  return out;
}

Json split_to_json(const RegressionDataset& data) {
  return Json{{"train", data.split.train},
              {"val", data.split.val},
              {"test", data.split.test}};
}

RegressionDataset dataset_from_parts(const SearchSpaceSpec& spec,
                                     const std::string& csv_text,
                                     const Json& manifest) {
  const std::vector<std::string> lines = csv_lines(csv_text);
  const int width = spec.num_stages() + spec.num_stages() * spec.max_depth();
  if (lines.empty() ||
      static_cast<int>(split_csv_line(lines[0]).size()) != width + 1) {
    throw InvalidInputError("dataset CSV header does not match the space");
  }
  RegressionDataset data;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::vector<std::string> f = split_csv_line(lines[i]);
    if (static_cast<int>(f.size()) != width + 1) {
      throw InvalidInputError("dataset CSV row " + std::to_string(i) +
                              " has the wrong number of fields");
    }
    Architecture arch;
    int col = 0;
    for (int s = 0; s < spec.num_stages(); ++s) {
      const int d = parse_int(f[col++]);
      if (spec.choice_pos(s, d) < 0) {
        throw InvalidInputError("dataset row " + std::to_string(i) +
                                " uses a depth outside the allowed choices");
      }
      arch.depth.push_back(d);
    }
    arch.config.resize(spec.num_stages());
    for (int s = 0; s < spec.num_stages(); ++s) {
      for (int b = 0; b < spec.max_depth(); ++b) {
        arch.config[s].push_back(config_pos_by_id(spec, parse_int(f[col++])));
      }
    }
    data.targets.push_back(parse_double(f[col]));
    data.points.push_back(std::move(arch));
  }
  data.split.train = field<std::vector<int>>(manifest, "train");
  data.split.val = field<std::vector<int>>(manifest, "val");
  data.split.test = field<std::vector<int>>(manifest, "test");
  const int n = static_cast<int>(data.points.size());
  std::vector<bool> used(n, false);
  for (const std::vector<int>* part :
       {&data.split.train, &data.split.val, &data.split.test}) {
    for (int idx : *part) {
      if (idx < 0 || idx >= n || used[idx]) {
        throw InvalidInputError("split manifest indices must be in range "
                                "and disjoint");
      }
      used[idx] = true;
    }
  }
  return data;
}

Json arch_to_json(const SearchSpaceSpec& spec, const Architecture& arch) {
  if (static_cast<int>(arch.depth.size()) != spec.num_stages()) {
    throw DimensionError("architecture shape does not match spec");
  }
  Json config_ids = Json::array();
  for (int s = 0; s < spec.num_stages(); ++s) {
    if (static_cast<int>(arch.config[s].size()) != spec.max_depth()) {
      throw DimensionError("architecture shape does not match spec");
    }
    Json row = Json::array();
    for (int b = 0; b < spec.max_depth(); ++b) {
      row.push_back(spec.configs()[arch.config[s][b]].id);
    }
    config_ids.push_back(std::move(row));
  }
  return Json{{"depth", arch.depth}, {"config_ids", config_ids}};
}

Architecture arch_from_json(const SearchSpaceSpec& spec, const Json& j) {
  Architecture arch;
  arch.depth = field<std::vector<int>>(j, "depth");
  const auto ids = field<std::vector<std::vector<int>>>(j, "config_ids");
  if (static_cast<int>(arch.depth.size()) != spec.num_stages() ||
      static_cast<int>(ids.size()) != spec.num_stages()) {
    throw InvalidInputError("architecture shape does not match the space");
  }
  for (int s = 0; s < spec.num_stages(); ++s) {
    if (spec.choice_pos(s, arch.depth[s]) < 0) {
      throw InvalidInputError("depth " + std::to_string(arch.depth[s]) +
                              " is not allowed in stage " + std::to_string(s));
    }
    if (static_cast<int>(ids[s].size()) != spec.max_depth()) {
      throw InvalidInputError("architecture shape does not match the space");
    }
    arch.config.emplace_back();
    for (int id : ids[s]) {
      arch.config[s].push_back(config_pos_by_id(spec, id));
    }
  }
  return arch;
}

Json result_to_json(const SearchSpaceSpec& spec, const SearchResult& r) {
  Json trace = Json::array();
  for (const TracePoint& t : r.trace) {
    trace.push_back({{"iter", t.iter}, {"obj", t.obj}, {"lat", t.lat}});
  }
  return Json{{"arch", arch_to_json(spec, r.arch)},
              {"predicted_acc", r.predicted_acc},
              {"latency_ms", r.latency_ms},
              {"deviation", r.deviation},
              {"solver", r.solver},
              {"seed", r.seed},
              {"trace", trace}};
}

SearchResult result_from_json(const SearchSpaceSpec& spec, const Json& j) {
  SearchResult r;
  r.arch = arch_from_json(spec, field<Json>(j, "arch"));
  r.predicted_acc = field<double>(j, "predicted_acc");
  r.latency_ms = field<double>(j, "latency_ms");
  r.deviation = field<double>(j, "deviation");
  r.solver = field<std::string>(j, "solver");
  r.seed = field<std::uint64_t>(j, "seed");
  const Json trace = field<Json>(j, "trace");
  if (!trace.is_array()) throw InvalidInputError("trace must be an array");
  for (const Json& t : trace) {
    r.trace.push_back({field<int>(t, "iter"), field<double>(t, "obj"),
                       field<double>(t, "lat")});
  }
  return r;
}

Json rank_report_to_json(const RankReport& r) {
  return Json{{"kendall_tau", r.kendall_tau},
              {"spearman_rho", r.spearman_rho},
              {"mse", r.mse},
              {"n", r.n}};
}

Json compare_report_to_json(const SearchSpaceSpec& spec,
                            const CompareReport& r) {
  Json cells = Json::array();
  for (const CompareCell& c : r.cells) {
    Json cell{{"solver", c.solver},
              {"T", c.T},
              {"seed", c.seed},
              {"ok", c.ok},
              {"error", c.error}};
    cell["result"] = c.ok ? result_to_json(spec, c.result) : Json();
    cells.push_back(std::move(cell));
  }
  Json summaries = Json::array();
  for (const CompareSummary& s : r.summaries) {
    summaries.push_back({{"solver", s.solver},
                         {"T", s.T},
                         {"n_ok", s.n_ok},
                         {"mean_acc", s.mean_acc},
                         {"std_acc", s.std_acc},
                         {"mean_lat", s.mean_lat},
                         {"std_lat", s.std_lat}});
  }
  Json best_of = Json::array();
  for (const BestOfCell& b : r.best_of) {
    best_of.push_back({{"T", b.T},
                       {"seed", b.seed},
                       {"solver", b.solver},
                       {"predicted_acc", b.predicted_acc}});
  }
  return Json{{"cells", cells}, {"summaries", summaries},
              {"best_of", best_of}};
}

namespace {

Json averages_to_json(const AttributeAverages& a) {
  auto opt = [](const std::optional<double>& v) {
    return v ? Json(*v) : Json();
  };
  return Json{{"se_on_vs_off", opt(a.se_on_vs_off)},
              {"kernel5_vs_3", opt(a.kernel5_vs_3)},
              {"er3_vs_2", opt(a.er3_vs_2)},
              {"er6_vs_3", opt(a.er6_vs_3)}};
}

}  // namespace

Json insight_report_to_json(const InsightReport& r) {
  Json increments = Json::array();
  for (const auto& stage : r.depth_increments) {
    Json row = Json::array();
    for (const DepthIncrement& inc : stage) {
      row.push_back({{"from_depth", inc.from_depth},
                     {"to_depth", inc.to_depth},
                     {"value", inc.value}});
    }
    increments.push_back(std::move(row));
  }
  Json per_stage = Json::array();
  for (const AttributeAverages& a : r.per_stage) {
    per_stage.push_back(averages_to_json(a));
  }
  Json per_block = Json::array();
  for (const AttributeAverages& a : r.per_block) {
    per_block.push_back(averages_to_json(a));
  }
  return Json{{"depth_increments", increments},
              {"per_stage", per_stage},
              {"per_block", per_block},
              {"latency_per_stage", r.latency_per_stage}};
}

}  // namespace bilopt
