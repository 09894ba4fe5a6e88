// Copyright 2026 The kvote Authors.
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

#include "kvote/experiment.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "kvote/error.hpp"
#include "kvote/rng.hpp"

namespace kvote {

using json = nlohmann::json;

void ExperimentConfig::validate() const {
  const bool has_blobs = blobs.has_value();
  const bool has_csv = !csv_paths.empty();
  if (has_blobs == has_csv)
    throw ValidationError("ExperimentConfig: exactly one dataset source (blobs or csv) required");
  if (has_blobs) {
    if (blobs->count < 1) throw ValidationError("ExperimentConfig: blobs.count must be >= 1");
    blobs->spec.validate();
  }
  if (subsets && *subsets < 1) throw ValidationError("ExperimentConfig: subsets must be >= 1");
  grid.validate();
}

ExperimentConfig default_experiment_config(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.blobs.emplace();
  cfg.blobs->count = 25;
  cfg.blobs->spec.n_samples = 3000;
  cfg.blobs->spec.n_centers = 3;
  cfg.blobs->spec.n_features = 2;
  cfg.blobs->spec.box_low = -5.0;
  cfg.blobs->spec.box_high = 5.0;
  cfg.blobs->spec.cluster_std = 1.0;
  cfg.blobs->spec.seed = seed;
  cfg.grid = default_grid(seed);
  return cfg;
}

namespace {

std::string value_to_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_hyper_value(v.get<double>());
  throw ValidationError("config: hyperparameter values must be strings or numbers");
}

std::vector<double> values_from_spec(const json& p) {
  if (p.contains("geomspace")) {
    const auto& g = p.at("geomspace");
    return geomspace(g.at(0).get<double>(), g.at(1).get<double>(), g.at(2).get<int>());
  }
  throw ValidationError("config: parameter needs 'values' or 'geomspace'");
}

// Cross product of the group's parameter lists; the first parameter varies
// slowest.
void expand_group(const json& group, std::vector<HyperSelection>& out) {
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> values;
  for (const auto& p : group) {
    names.push_back(p.at("name").get<std::string>());
    std::vector<std::string> vals;
    if (p.contains("values")) {
      for (const auto& v : p.at("values")) vals.push_back(value_to_string(v));
    } else {
      for (double v : values_from_spec(p)) vals.push_back(format_hyper_value(v));
    }
    if (vals.empty()) throw ValidationError("config: empty value list for parameter " + names.back());
    values.push_back(std::move(vals));
  }
  std::vector<std::size_t> pos(names.size(), 0);
  while (true) {
    HyperSelection h;
    for (std::size_t i = 0; i < names.size(); ++i) h.values.emplace_back(names[i], values[i][pos[i]]);
    out.push_back(std::move(h));
    std::size_t i = names.size();
    while (i > 0 && ++pos[i - 1] == values[i - 1].size()) pos[--i] = 0;
    if (i == 0) break;
  }
}

GridSpec grid_from_config(const json& j, std::uint64_t seed) {
  GridSpec grid;
  if (!j.contains("algorithms")) {
    grid = default_grid(seed);
  } else {
    grid.master_seed = seed;
    for (const auto& a : j.at("algorithms")) {
      AlgorithmGrid ag;
      ag.algorithm = algorithm_from_string(a.at("algorithm").get<std::string>());
      for (const auto& m : a.at("metrics"))
        ag.metrics.push_back(metric_from_string(m.get<std::string>()));
      if (a.contains("selections")) {
        for (const auto& sel : a.at("selections")) {
          HyperSelection h;
          for (const auto& pair : sel)
            h.values.emplace_back(pair.at(0).get<std::string>(), value_to_string(pair.at(1)));
          ag.hypers.push_back(std::move(h));
        }
      } else if (a.contains("param_groups")) {
        for (const auto& group : a.at("param_groups")) expand_group(group, ag.hypers);
      } else if (a.contains("params")) {
        expand_group(a.at("params"), ag.hypers);
      } else {
        throw ValidationError("config: algorithm needs selections, params or param_groups");
      }
      grid.algorithms.push_back(std::move(ag));
    }
  }
  if (j.contains("k_range")) {
    grid.k_min = j.at("k_range").at(0).get<int>();
    grid.k_max = j.at("k_range").at(1).get<int>();
  }
  if (j.contains("caps")) {
    const auto& caps = j.at("caps");
    if (caps.contains("spectral")) grid.spectral_cap = caps.at("spectral").get<std::int64_t>();
    if (caps.contains("hca")) grid.hca_cap = caps.at("hca").get<std::int64_t>();
    if (caps.contains("silhouette")) grid.silhouette_cap = caps.at("silhouette").get<std::int64_t>();
  }
  grid.master_seed = seed;
  return grid;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config parse error in " + path + ": " + e.what());
  }

  ExperimentConfig cfg;
  const std::uint64_t seed = j.value("seed", std::uint64_t{0});

  if (j.contains("datasets")) {
    const auto& ds = j.at("datasets");
    if (ds.contains("blobs")) {
      const auto& b = ds.at("blobs");
      cfg.blobs.emplace();
      cfg.blobs->count = b.value("count", 1);
      cfg.blobs->spec.n_samples = b.value("n_samples", std::int64_t{3000});
      cfg.blobs->spec.n_centers = b.value("n_centers", 3);
      cfg.blobs->spec.n_features = b.value("n_features", 2);
      if (b.contains("center_box")) {
        cfg.blobs->spec.box_low = b.at("center_box").at(0).get<double>();
        cfg.blobs->spec.box_high = b.at("center_box").at(1).get<double>();
      }
      cfg.blobs->spec.cluster_std = b.value("cluster_std", 1.0);
      cfg.blobs->spec.seed = b.value("seed", seed);
    } else if (ds.contains("csv")) {
      for (const auto& p : ds.at("csv")) cfg.csv_paths.push_back(p.get<std::string>());
    } else {
      throw ValidationError("config: datasets needs 'blobs' or 'csv'");
    }
  } else {
    cfg = default_experiment_config(seed);
  }

  cfg.grid = grid_from_config(j.value("grid", json::object()), seed);
  if (j.contains("voting")) {
    const auto& v = j.at("voting");
    if (v.contains("construction"))
      cfg.construction = construction_from_string(v.at("construction").get<std::string>());
    if (v.contains("scheme")) cfg.scheme = scheme_from_string(v.at("scheme").get<std::string>());
  }
  if (j.contains("subsets") && !j.at("subsets").is_null()) cfg.subsets = j.at("subsets").get<int>();
  if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
  cfg.validate();
  return cfg;
}

std::string experiment_config_to_json(const ExperimentConfig& config) {
  json j;
  j["seed"] = config.grid.master_seed;
  j["out"] = config.out_dir;
  if (config.blobs) {
    j["datasets"]["blobs"] = {{"count", config.blobs->count},
                              {"n_samples", config.blobs->spec.n_samples},
                              {"n_centers", config.blobs->spec.n_centers},
                              {"n_features", config.blobs->spec.n_features},
                              {"center_box", {config.blobs->spec.box_low, config.blobs->spec.box_high}},
                              {"cluster_std", config.blobs->spec.cluster_std},
                              {"seed", config.blobs->spec.seed}};
  } else {
    j["datasets"]["csv"] = config.csv_paths;
  }
  json algorithms = json::array();
  for (const auto& ag : config.grid.algorithms) {
    json selections = json::array();
    for (const auto& h : ag.hypers) {
      json sel = json::array();
      for (const auto& [name, value] : h.values) sel.push_back(json::array({name, value}));
      selections.push_back(sel);
    }
    json metrics = json::array();
    for (MetricId m : ag.metrics) metrics.push_back(to_string(m));
    algorithms.push_back(
        {{"algorithm", to_string(ag.algorithm)}, {"metrics", metrics}, {"selections", selections}});
  }
  j["grid"] = {{"algorithms", algorithms},
               {"k_range", {config.grid.k_min, config.grid.k_max}},
               {"caps",
                {{"spectral", config.grid.spectral_cap},
                 {"hca", config.grid.hca_cap},
                 {"silhouette", config.grid.silhouette_cap}}}};
  j["voting"] = {{"construction", to_string(config.construction)}, {"scheme", to_string(config.scheme)}};
  if (config.subsets) j["subsets"] = *config.subsets;
  return j.dump(2) + "\n";
}

std::string ExperimentSummary::to_text() const {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "cells: %zu total, %zu failed\n", total_cells, failed_cells);
  out += buf;
  if (true_k) {
    std::snprintf(buf, sizeof(buf), "true k: %d\n", *true_k);
    out += buf;
  }
  for (const auto& a : approaches) {
    std::snprintf(buf, sizeof(buf), "accuracy %-4s + %-4s : %6.2f%%\n",
                  to_string(a.construction).c_str(), to_string(a.scheme).c_str(), a.percent);
    out += buf;
  }
  for (const auto& [id, k] : estimates) {
    std::snprintf(buf, sizeof(buf), "estimate %s : k=%d\n", id.c_str(), k);
    out += buf;
  }
  return out;
}

ExperimentSummary run_experiment(const ExperimentConfig& config, int workers) {
  config.validate();

  // Materialize the source datasets.
  std::vector<Dataset> sources;
  if (config.blobs) {
    for (int i = 0; i < config.blobs->count; ++i) {
      BlobSpec spec = config.blobs->spec;
      spec.seed = derive_seed({config.blobs->spec.seed, 0x626c6f62ULL, static_cast<std::uint64_t>(i)});
      char id[32];
      std::snprintf(id, sizeof(id), "blob-%03d", i);
      sources.push_back(generate_blobs(spec, id));
    }
  } else {
    for (const auto& path : config.csv_paths) sources.push_back(load_csv(path));
  }

  // Work items: the datasets themselves, or their subsets.
  std::vector<Dataset> items;
  if (config.subsets) {
    for (std::size_t i = 0; i < sources.size(); ++i) {
      auto split = split_subsets(sources[i], *config.subsets,
                                 derive_seed({config.grid.master_seed, 0x73706cULL,
                                              static_cast<std::uint64_t>(i)}));
      for (auto& s : split) items.push_back(std::move(s));
    }
  } else {
    items = std::move(sources);
  }

  Cache cache;
  cache.grid = config.grid;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Dataset& data = items[i];
    DatasetRecord rec;
    rec.id = data.id;
    rec.n = data.n();
    rec.d = static_cast<int>(data.dim());
    rec.true_k = data.true_k();
    cache.datasets.push_back(std::move(rec));

    GridSpec item_grid = config.grid;
    item_grid.master_seed =
        derive_seed({config.grid.master_seed, 0x67726964ULL, static_cast<std::uint64_t>(i)});
    cache.tables.push_back(evaluate_grid(data, item_grid, workers));

    for (EnsembleConstruction c : {EnsembleConstruction::Raw, EnsembleConstruction::Mode}) {
      EnsembleMatrix ensemble = build_ensemble(cache.tables.back(), c);
      for (VoteScheme s : {VoteScheme::Full, VoteScheme::Row, VoteScheme::Col})
        cache.votes.push_back({data.id, c, s, vote(ensemble, s)});
    }
  }

  std::filesystem::create_directories(config.out_dir);
  const std::string cache_path = config.out_dir + "/cache.jsonl";
  save_cache(cache_path, cache);

  ExperimentSummary summary;
  summary.cache_path = cache_path;
  for (const auto& t : cache.tables) {
    summary.total_cells += t.cells.size();
    summary.failed_cells += t.failed_cells();
  }
  bool have_truth = !cache.datasets.empty();
  for (const auto& d : cache.datasets) have_truth = have_truth && d.true_k.has_value();
  if (have_truth) {
    summary.true_k = *cache.datasets.front().true_k;
    summary.approaches = approach_accuracies(cache);
  }

  // Configured-approach estimate per parent dataset (mode over subsets).
  std::vector<std::string> parents;
  for (const auto& d : cache.datasets) {
    const std::string p = parent_dataset_id(d.id);
    if (std::find(parents.begin(), parents.end(), p) == parents.end()) parents.push_back(p);
  }
  for (const auto& p : parents) {
    std::vector<int> ks;
    for (const auto& v : cache.votes)
      if (v.construction == config.construction && v.scheme == config.scheme &&
          parent_dataset_id(v.dataset_id) == p)
        ks.push_back(v.k);
    if (!ks.empty()) summary.estimates.emplace_back(p, smallest_mode(ks));
  }

  // Summary artifacts: machine-readable and aligned text.
  {
    json js;
    js["total_cells"] = summary.total_cells;
    js["failed_cells"] = summary.failed_cells;
    if (summary.true_k) js["true_k"] = *summary.true_k;
    json approaches = json::array();
    for (const auto& a : summary.approaches)
      approaches.push_back({{"construction", to_string(a.construction)},
                            {"scheme", to_string(a.scheme)},
                            {"accuracy_percent", a.percent}});
    js["approaches"] = approaches;
    json estimates = json::object();
    for (const auto& [id, k] : summary.estimates) estimates[id] = k;
    js["estimates"] = estimates;

    std::ofstream out(config.out_dir + "/summary.json");
    if (!out) throw RuntimeFailure("cannot write summary.json");
    out << js.dump(2) << "\n";
    std::ofstream txt(config.out_dir + "/summary.txt");
    if (!txt) throw RuntimeFailure("cannot write summary.txt");
    txt << summary.to_text();
    std::ofstream cfg_echo(config.out_dir + "/experiment_config.json");
    if (!cfg_echo) throw RuntimeFailure("cannot write experiment_config.json");
    cfg_echo << experiment_config_to_json(config);
  }
  return summary;
}

}  // namespace kvote
