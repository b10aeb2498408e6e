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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bilopt/analysis.hpp"
#include "bilopt/estimator.hpp"
#include "bilopt/predictors.hpp"
#include "bilopt/search_space.hpp"
#include "bilopt/serialization.hpp"
#include "bilopt/solvers.hpp"
#include "bilopt/synthetic_oracle.hpp"

namespace {

using namespace bilopt;

SearchSpaceSpec make_preset(const std::string& name) {
  if (name == "tiny") {
    return SearchSpaceSpec(2, {{1, 2}},
                           {{1, 2, 3, false}, {2, 6, 5, true}});
  }
  if (name == "small") {
    return SearchSpaceSpec(3, {{2, 3}, {2, 3}},
                           {{1, 2, 3, false},
                            {2, 3, 3, true},
                            {3, 3, 5, false},
                            {4, 6, 5, true}});
  }
  if (name == "paper") {
    return SearchSpaceSpec::paper();
  }
  throw InvalidInputError("unknown preset \"" + name + "\"");
}

SearchSpaceSpec load_space(const std::string& path) {
  return space_from_json(read_json_file(path));
}

// The latency model lives in two files: the CSV table and a JSON header
// carrying the fixed overhead.  The header path defaults to the CSV path
// with its extension replaced by .json.
std::string default_overhead_path(const std::string& csv_path) {
  const std::string suffix = ".csv";
  if (csv_path.size() > suffix.size() &&
      csv_path.compare(csv_path.size() - suffix.size(), suffix.size(),
                       suffix) == 0) {
    return csv_path.substr(0, csv_path.size() - suffix.size()) + ".json";
  }
  return csv_path + ".json";
}

LatencyModel load_latency(const SearchSpaceSpec& spec,
                          const std::string& csv_path,
                          const std::string& overhead_path) {
  const std::string header_path =
      overhead_path.empty() ? default_overhead_path(csv_path) : overhead_path;
  return latency_from_parts(spec, read_text_file(csv_path),
                            read_json_file(header_path));
}

struct GenOpts {
  std::string preset = "paper";
  std::string space_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  OracleGenParams oracle;
  LatencyGenParams latency;
};

void run_gen(const GenOpts& o) {
  const SearchSpaceSpec spec =
      o.space_path.empty() ? make_preset(o.preset) : load_space(o.space_path);
  const SyntheticSupernet m = make_supernet(spec, o.oracle, o.seed);
  const LatencyModel lat = gen_latency(spec, o.latency, o.seed);

  std::error_code ec;
  std::filesystem::create_directories(o.out_dir, ec);
  if (ec) throw IoError("cannot create directory " + o.out_dir);
  const std::filesystem::path dir(o.out_dir);
  write_json_file((dir / "space.json").string(), space_to_json(spec));
  write_json_file((dir / "oracle.json").string(), oracle_to_json(spec, m));
  write_text_file((dir / "latency.csv").string(), latency_to_csv(spec, lat));
  write_json_file((dir / "latency.json").string(), overhead_to_json(lat));

  std::cout << "space: S=" << spec.num_stages() << " D=" << spec.max_depth()
            << " |C|=" << spec.num_configs() << " N=" << spec.zeta_size()
            << " architectures=" << spec.count_architectures() << "\n"
            << "wrote space.json, oracle.json, latency.csv, latency.json to "
            << o.out_dir << "\n";
}

struct EstimateOpts {
  std::string space_path;
  std::string oracle_path;
  std::string out_path;
  std::uint64_t seed = 0;
  BuildParams params;
  bool exact = false;
  double cap = 4194304.0;
};

void run_estimate(const EstimateOpts& o) {
  const SearchSpaceSpec spec = load_space(o.space_path);
  const SyntheticSupernet m =
      oracle_from_json(spec, read_json_file(o.oracle_path));
  const BilinearEstimator est =
      o.exact ? build_exact(spec, m, o.cap) : build(spec, m, o.params, o.seed);
  write_json_file(o.out_path, estimator_to_json(spec, est));
  std::cout << "probes: 1 base + " << spec.zeta_size() << " deltas, ";
  if (o.exact) {
    std::cout << "exact expectations\n";
  } else {
    std::cout << o.params.n_per_probe * o.params.n_repeats
              << " samples each\n";
  }
  std::cout << "wrote " << o.out_path << "\n";
}

struct FitOpts {
  std::string space_path;
  std::string oracle_path;
  std::string dataset_path;
  std::string split_path;
  std::string dataset_out;
  std::string out_path;
  std::uint64_t seed = 0;
  std::string family = "bilinear";
  int n = 400;
  int n_test = 100;
  bool noiseless = false;
  std::vector<int> k_grid = {1, 2, 4, 8, 16, 32, 64};
};

void run_fit(const FitOpts& o) {
  const SearchSpaceSpec spec = load_space(o.space_path);
  const FeatureFamily family = feature_family_from_string(o.family);

  RegressionDataset data;
  if (!o.dataset_path.empty()) {
    const std::string split_path =
        o.split_path.empty() ? default_overhead_path(o.dataset_path)
                             : o.split_path;
    data = dataset_from_parts(spec, read_text_file(o.dataset_path),
                              read_json_file(split_path));
  } else {
    if (o.oracle_path.empty()) {
      throw InvalidInputError("fit needs either --dataset or --oracle");
    }
    const SyntheticSupernet m =
        oracle_from_json(spec, read_json_file(o.oracle_path));
    data = collect_dataset(spec, m, o.n, o.n_test, o.seed, !o.noiseless);
  }
  if (!o.dataset_out.empty()) {
    write_text_file(o.dataset_out + ".csv", dataset_to_csv(spec, data));
    write_json_file(o.dataset_out + ".split.json", split_to_json(data));
  }

  // Drop grid entries beyond the number of available singular values so a
  // default grid works on small problems.
  const int avail =
      std::min(static_cast<int>(data.split.train.size()),
               feature_index(spec, family).num_features(spec));
  std::vector<int> grid;
  for (int k : o.k_grid) {
    if (k >= 1 && k <= avail) grid.push_back(k);
  }
  if (grid.empty()) {
    throw InvalidInputError("no usable component count in the grid; at most " +
                            std::to_string(avail) + " are available");
  }
  const ComponentSelection selection =
      select_components(spec, family, data, grid);
  const QuadraticPredictor predictor =
      fit_closed_form(spec, family, data, selection.best_k);
  write_json_file(o.out_path, predictor_to_json(spec, predictor));

  std::cout << "family=" << o.family << " selected k=" << selection.best_k
            << "\n";
  for (const auto& [k, tau] : selection.scores) {
    std::cout << "  k=" << k << " validation tau=" << tau << "\n";
  }
  std::cout << "wrote " << o.out_path << "\n";
}

struct SearchOpts {
  std::string space_path;
  std::string estimator_path;
  std::string latency_path;
  std::string overhead_path;
  std::string out_path;
  std::uint64_t seed = 0;
  double budget = 0.0;
  std::string solver = "all";
  BcfwParams bcfw;
  EvoParams evo;
  ExactParams exact;
};

int run_search(const SearchOpts& o) {
  const SearchSpaceSpec spec = load_space(o.space_path);
  const BilinearEstimator est =
      estimator_from_json(spec, read_json_file(o.estimator_path));
  const LatencyModel lat =
      load_latency(spec, o.latency_path, o.overhead_path);

  if (o.solver == "all") {
    const CompareReport report = compare_solvers(
        spec, est, lat, {o.budget}, {o.seed}, o.bcfw, o.evo, o.exact);
    write_json_file(o.out_path, compare_report_to_json(spec, report));
    int n_ok = 0;
    for (const CompareCell& c : report.cells) {
      std::cout << c.solver << ": ";
      if (c.ok) {
        ++n_ok;
        std::cout << "acc=" << c.result.predicted_acc
                  << " lat=" << c.result.latency_ms << "\n";
      } else {
        std::cout << c.error << "\n";
      }
    }
    std::cout << "wrote " << o.out_path << "\n";
    return n_ok > 0 ? 0 : 2;
  }

  SearchResult result;
  if (o.solver == "bcfw") {
    result = bcfw_search(spec, est, lat, o.budget, o.bcfw, o.seed).result;
  } else if (o.solver == "evo") {
    result = evolutionary_search(spec, est, lat, o.budget, o.evo, o.seed);
  } else if (o.solver == "exact") {
    result = exact_search(spec, est, lat, o.budget, o.exact, o.seed);
  } else {
    throw InvalidInputError("unknown solver \"" + o.solver + "\"");
  }
  write_json_file(o.out_path, result_to_json(spec, result));
  std::cout << result.solver << ": acc=" << result.predicted_acc
            << " lat=" << result.latency_ms
            << " deviation=" << result.deviation << "\n"
            << "wrote " << o.out_path << "\n";
  return 0;
}

struct EvalOpts {
  std::string space_path;
  std::string oracle_path;
  std::string estimator_path;
  std::string predictor_path;
  std::string out_path;
  std::uint64_t seed = 0;
  int n = 500;
  bool noisy = false;
};

void run_eval(const EvalOpts& o) {
  const SearchSpaceSpec spec = load_space(o.space_path);
  const SyntheticSupernet m =
      oracle_from_json(spec, read_json_file(o.oracle_path));
  if (o.estimator_path.empty() == o.predictor_path.empty()) {
    throw InvalidInputError(
        "eval needs exactly one of --estimator or --predictor");
  }

  RankReport report;
  if (!o.estimator_path.empty()) {
    const BilinearEstimator est =
        estimator_from_json(spec, read_json_file(o.estimator_path));
    report = rank_predictor(
        spec, m,
        [&](const Architecture& a) { return eval_acc(spec, est, a); }, o.n,
        o.seed, o.noisy);
  } else {
    const QuadraticPredictor p =
        predictor_from_json(spec, read_json_file(o.predictor_path));
    report = rank_predictor(
        spec, m, [&](const Architecture& a) { return predict(spec, p, a); },
        o.n, o.seed, o.noisy);
  }
  write_json_file(o.out_path, rank_report_to_json(report));
  std::cout << "n=" << report.n << " kendall_tau=" << report.kendall_tau
            << " spearman_rho=" << report.spearman_rho
            << " mse=" << report.mse << "\n"
            << "wrote " << o.out_path << "\n";
}

struct ReportOpts {
  std::string space_path;
  std::string estimator_path;
  std::string latency_path;
  std::string overhead_path;
  std::string oracle_path;
  std::string out_path;
  std::string csv_path;
  std::string ablate_out;
  std::uint64_t seed = 0;
  int n = 500;
  bool ablate = false;
};

std::string csv_cell(const std::optional<double>& v) {
  char buf[64];
  if (!v) return "";
  std::snprintf(buf, sizeof(buf), "%.12g", *v);
  return buf;
}

void run_report(const ReportOpts& o) {
  const SearchSpaceSpec spec = load_space(o.space_path);
  const BilinearEstimator est =
      estimator_from_json(spec, read_json_file(o.estimator_path));
  const LatencyModel lat =
      load_latency(spec, o.latency_path, o.overhead_path);

  const InsightReport report = insights(spec, est, lat);
  write_json_file(o.out_path, insight_report_to_json(report));
  std::cout << "wrote " << o.out_path << "\n";

  if (!o.csv_path.empty()) {
    std::string csv =
        "stage,se_on_vs_off,kernel5_vs_3,er3_vs_2,er6_vs_3,"
        "mean_block_latency_ms\n";
    for (int s = 0; s < spec.num_stages(); ++s) {
      const AttributeAverages& a = report.per_stage[s];
      csv += std::to_string(s) + "," + csv_cell(a.se_on_vs_off) + "," +
             csv_cell(a.kernel5_vs_3) + "," + csv_cell(a.er3_vs_2) + "," +
             csv_cell(a.er6_vs_3) + "," +
             csv_cell(report.latency_per_stage[s]) + "\n";
    }
    write_text_file(o.csv_path, csv);
    std::cout << "wrote " << o.csv_path << "\n";
  }

  if (o.ablate) {
    if (o.oracle_path.empty()) {
      throw InvalidInputError("--ablate needs --oracle for ranking targets");
    }
    const SyntheticSupernet m =
        oracle_from_json(spec, read_json_file(o.oracle_path));
    Json modes;
    const std::pair<AblationMode, const char*> kModes[] = {
        {AblationMode::kFull, "full"},
        {AblationMode::kDepthTermsOnly, "depth_terms_only"},
        {AblationMode::kConfigTermsOnly, "config_terms_only"},
    };
    for (const auto& [mode, name] : kModes) {
      const BilinearEstimator variant = ablate(est, mode);
      const RankReport rank = rank_predictor(
          spec, m,
          [&](const Architecture& a) { return eval_acc(spec, variant, a); },
          o.n, o.seed, false);
      modes[name] = rank_report_to_json(rank);
    }
    // Rank magnitudes observed for this estimator family on full-scale
    // one-shot ImageNet runs; context for reading the table, not targets
    // for synthetic data.
    const Json reference{
        {"note",
         "Full-scale one-shot ImageNet reference magnitudes, for context "
         "only; synthetic-benchmark scores are not comparable."},
        {"full", {{"kendall_tau", 0.84}, {"spearman_rho", 0.97}}},
        {"depth_terms_only", {{"kendall_tau", 0.66}, {"spearman_rho", 0.85}}},
        {"config_terms_only",
         {{"kendall_tau", 0.29}, {"spearman_rho", 0.42}}}};
    const std::string ablate_path =
        o.ablate_out.empty() ? o.out_path + ".ablation.json" : o.ablate_out;
    write_json_file(ablate_path,
                    Json{{"modes", modes}, {"reference", reference}});
    std::cout << "wrote " << ablate_path << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bilinear accuracy estimation and latency-constrained "
               "architecture search over staged block spaces."};
  app.require_subcommand(1);
  int exit_code = 0;

  GenOpts gen;
  CLI::App* cmd_gen = app.add_subcommand(
      "gen", "Generate a synthetic problem: space, oracle, latency table");
  cmd_gen->add_option("--preset", gen.preset,
                      "Problem size: tiny, small, or paper");
  cmd_gen->add_option("--space", gen.space_path,
                      "Space JSON to use instead of a preset");
  cmd_gen->add_option("--seed", gen.seed, "Master seed");
  cmd_gen->add_option("--out", gen.out_dir, "Output directory")->required();
  cmd_gen->add_option("--base", gen.oracle.base, "Base accuracy, percent");
  cmd_gen->add_option("--depth-scale", gen.oracle.depth_effect_scale,
                      "Depth effect magnitude, percent");
  cmd_gen->add_option("--config-scale", gen.oracle.config_effect_scale,
                      "Config effect magnitude, percent");
  cmd_gen->add_option("--se-stage-bias", gen.oracle.se_stage_bias,
                      "Extra SE effect growing with stage index, percent");
  cmd_gen->add_option("--epsilon", gen.oracle.epsilon,
                      "Pairwise interaction strength");
  cmd_gen->add_option("--noise-std", gen.oracle.noise_std,
                      "Observation noise sigma, percent");
  cmd_gen->add_option("--lat-lo", gen.latency.lo_ms,
                      "Smallest block latency, ms");
  cmd_gen->add_option("--lat-hi", gen.latency.hi_ms,
                      "Largest block latency, ms");
  cmd_gen->add_option("--overhead-ms", gen.latency.overhead_ms,
                      "Fixed non-searchable latency, ms");
  cmd_gen->callback([&] { run_gen(gen); });

  EstimateOpts est;
  CLI::App* cmd_estimate = app.add_subcommand(
      "estimate", "Build the bilinear estimator by probing the oracle");
  cmd_estimate->add_option("--space", est.space_path, "Space JSON")
      ->required();
  cmd_estimate->add_option("--oracle", est.oracle_path, "Oracle JSON")
      ->required();
  cmd_estimate->add_option("--seed", est.seed, "Master seed");
  cmd_estimate->add_option("--out", est.out_path, "Estimator JSON output")
      ->required();
  cmd_estimate->add_option("--n-per-probe", est.params.n_per_probe,
                           "Samples per probe repeat");
  cmd_estimate->add_option("--n-repeats", est.params.n_repeats,
                           "Repeats per probe");
  cmd_estimate->add_flag("--exact", est.exact,
                         "Exact conditional expectations by enumeration");
  cmd_estimate->add_option("--cap", est.cap,
                           "Raw-assignment cap for --exact");
  cmd_estimate->callback([&] { run_estimate(est); });

  FitOpts fit;
  CLI::App* cmd_fit = app.add_subcommand(
      "fit", "Fit a quadratic predictor by closed-form truncated SVD");
  cmd_fit->add_option("--space", fit.space_path, "Space JSON")->required();
  cmd_fit->add_option("--oracle", fit.oracle_path,
                      "Oracle JSON to sample a dataset from");
  cmd_fit->add_option("--dataset", fit.dataset_path,
                      "Existing dataset CSV instead of sampling");
  cmd_fit->add_option("--split", fit.split_path,
                      "Split manifest for --dataset (default: dataset path "
                      "with .csv replaced by .json)");
  cmd_fit->add_option("--dataset-out", fit.dataset_out,
                      "Write the dataset to PREFIX.csv and PREFIX.split.json");
  cmd_fit->add_option("--seed", fit.seed, "Master seed");
  cmd_fit->add_option("--out", fit.out_path, "Predictor JSON output")
      ->required();
  cmd_fit->add_option("--family", fit.family,
                      "Feature family: bilinear or full_quadratic");
  cmd_fit->add_option("--n", fit.n, "Training + validation sample count");
  cmd_fit->add_option("--n-test", fit.n_test, "Held-out sample count");
  cmd_fit->add_flag("--noiseless", fit.noiseless,
                    "Use noise-free accuracies as targets");
  cmd_fit->add_option("--k-grid", fit.k_grid,
                      "Component counts to try")
      ->delimiter(',');
  cmd_fit->callback([&] { run_fit(fit); });

  SearchOpts search;
  CLI::App* cmd_search = app.add_subcommand(
      "search", "Search under a latency budget with one or all solvers");
  cmd_search->add_option("--space", search.space_path, "Space JSON")
      ->required();
  cmd_search->add_option("--estimator", search.estimator_path,
                         "Estimator JSON")
      ->required();
  cmd_search->add_option("--latency", search.latency_path, "Latency CSV")
      ->required();
  cmd_search->add_option("--overhead", search.overhead_path,
                         "Latency header JSON (default: latency path with "
                         ".csv replaced by .json)");
  cmd_search->add_option("--seed", search.seed, "Master seed");
  cmd_search->add_option("--out", search.out_path, "Result JSON output")
      ->required();
  cmd_search->add_option("--budget", search.budget, "Latency budget T, ms")
      ->required();
  cmd_search->add_option("--solver", search.solver,
                         "bcfw, evo, exact, or all");
  cmd_search->add_option("--iterations", search.bcfw.iterations,
                         "BCFW iteration count");
  cmd_search->add_option("--population", search.evo.population,
                         "Evolutionary population size");
  cmd_search->add_option("--generations", search.evo.generations,
                         "Evolutionary generation count");
  cmd_search->add_option("--cap", search.exact.cap,
                         "Architecture cap for the exact solver");
  cmd_search->callback([&] { exit_code = run_search(search); });

  EvalOpts eval;
  CLI::App* cmd_eval = app.add_subcommand(
      "eval", "Rank an estimator or predictor against the oracle");
  cmd_eval->add_option("--space", eval.space_path, "Space JSON")->required();
  cmd_eval->add_option("--oracle", eval.oracle_path, "Oracle JSON")
      ->required();
  cmd_eval->add_option("--estimator", eval.estimator_path, "Estimator JSON");
  cmd_eval->add_option("--predictor", eval.predictor_path, "Predictor JSON");
  cmd_eval->add_option("--seed", eval.seed, "Master seed");
  cmd_eval->add_option("--out", eval.out_path, "Rank report JSON output")
      ->required();
  cmd_eval->add_option("--n", eval.n, "Number of test architectures");
  cmd_eval->add_flag("--noisy", eval.noisy,
                     "Rank against noisy single measurements");
  cmd_eval->callback([&] { run_eval(eval); });

  ReportOpts report;
  CLI::App* cmd_report = app.add_subcommand(
      "report", "Emit interpretability insights and optional ablation table");
  cmd_report->add_option("--space", report.space_path, "Space JSON")
      ->required();
  cmd_report->add_option("--estimator", report.estimator_path,
                         "Estimator JSON")
      ->required();
  cmd_report->add_option("--latency", report.latency_path, "Latency CSV")
      ->required();
  cmd_report->add_option("--overhead", report.overhead_path,
                         "Latency header JSON");
  cmd_report->add_option("--oracle", report.oracle_path,
                         "Oracle JSON, required with --ablate");
  cmd_report->add_option("--out", report.out_path, "Insight JSON output")
      ->required();
  cmd_report->add_option("--csv", report.csv_path,
                         "Also write per-stage averages as CSV");
  cmd_report->add_flag("--ablate", report.ablate,
                       "Rank full vs single-table estimator variants");
  cmd_report->add_option("--ablate-out", report.ablate_out,
                         "Ablation table output (default: --out path plus "
                         ".ablation.json)");
  cmd_report->add_option("--seed", report.seed, "Master seed");
  cmd_report->add_option("--n", report.n,
                         "Test architectures for --ablate ranking");
  cmd_report->callback([&] { run_report(report); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}
