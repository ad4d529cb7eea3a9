#include "geclust/sweep.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <map>

#include "geclust/ami.hpp"
#include "geclust/error.hpp"
#include "geclust/parallel.hpp"
#include "geclust/seed.hpp"
#include "geclust/svg.hpp"
#include "geclust/text.hpp"

namespace geclust {

Experiment parse_experiment(const std::string& name) {
  if (name == "sigma") return Experiment::sigma;
  if (name == "dout") return Experiment::dout;
  if (name == "nodes") return Experiment::nodes;
  if (name == "nobs") return Experiment::nobs;
  throw ConfigError("unknown experiment '" + name + "' (expected sigma, dout, nodes or nobs)");
}

std::string to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::sigma: return "sigma";
    case Experiment::dout: return "dout";
    case Experiment::nodes: return "nodes";
    case Experiment::nobs: return "nobs";
  }
  return "?";
}

SbmConfig apply_sweep_value(const SbmConfig& base, Experiment experiment, double value) {
  SbmConfig cfg = base;
  switch (experiment) {
    case Experiment::sigma:
      cfg.sigma = value;
      break;
    case Experiment::dout:
      cfg.d_out = value;
      break;
    case Experiment::nodes: {
      const double k = value / static_cast<double>(base.community_size);
      if (k < 1.0 || k != std::floor(k))
        throw ConfigError("node count " + format_double(value) + " is not a multiple of the community size");
      cfg.k = static_cast<std::size_t>(k);
      break;
    }
    case Experiment::nobs:
      if (value < 1.0 || value != std::floor(value)) throw ConfigError("observation count must be a positive integer");
      cfg.n_obs = static_cast<std::size_t>(value);
      break;
  }
  cfg.validate();
  return cfg;
}

std::uint64_t cell_seed(std::uint64_t base_seed, Experiment experiment, double value, std::size_t run) {
  std::uint64_t s = derive_seed(base_seed, to_string(experiment));
  s = derive_seed(s, std::bit_cast<std::uint64_t>(value));
  return derive_seed(s, static_cast<std::uint64_t>(run));
}

std::vector<double> SweepResult::series(Method method) const {
  std::vector<double> out;
  for (const auto& row : summary)
    if (row.method == method) out.push_back(row.mean);
  return out;
}

double SweepResult::overall_mean(Method method) const {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : records)
    if (r.method == method && r.ok) {
      sum += r.ami;
      ++count;
    }
  return count ? sum / static_cast<double>(count) : std::nan("");
}

bool SweepResult::complete() const {
  return std::all_of(records.begin(), records.end(), [](const SweepRecord& r) { return r.ok; });
}

SweepResult sweep(const SweepConfig& cfg) {
  if (cfg.values.empty()) throw ConfigError("sweep needs at least one value");
  if (cfg.runs == 0) throw ConfigError("sweep needs at least one run");
  if (cfg.methods.empty()) throw ConfigError("sweep needs at least one method");
  for (double v : cfg.values) apply_sweep_value(cfg.base, cfg.experiment, v);

  const std::size_t n_methods = cfg.methods.size();
  const std::size_t cells = cfg.values.size() * cfg.runs;
  SweepResult result;
  result.experiment = cfg.experiment;
  result.records.resize(cells * n_methods);

  parallel_for(cells, cfg.threads, [&](std::size_t cell) {
    const std::size_t vi = cell / cfg.runs;
    const std::size_t run = cell % cfg.runs;
    const double value = cfg.values[vi];
    const std::uint64_t seed = cell_seed(cfg.base.seed, cfg.experiment, value, run);
    for (std::size_t m = 0; m < n_methods; ++m) {
      auto& rec = result.records[cell * n_methods + m];
      rec.experiment = cfg.experiment;
      rec.value = value;
      rec.method = cfg.methods[m];
      rec.run = run;
      rec.seed = seed;
    }
    LabeledDataset data;
    try {
      auto sbm = apply_sweep_value(cfg.base, cfg.experiment, value);
      sbm.seed = seed;
      data = generate_dataset(sbm);
    } catch (const std::exception& e) {
      for (std::size_t m = 0; m < n_methods; ++m) result.records[cell * n_methods + m].error = e.what();
      return;
    }
    for (std::size_t m = 0; m < n_methods; ++m) {
      auto& rec = result.records[cell * n_methods + m];
      try {
        PipelineSpec spec = cfg.pipeline;
        spec.method = rec.method;
        spec.seed = seed;
        spec.threads = 1;
        const auto res = run_pipeline(uses_graph(rec.method) ? &data.graph : nullptr, data.attributes, spec);
        rec.ami = ami(data.truth.labels, res.eval_labels);
        rec.n_clusters = res.n_clusters;
        rec.n_noise = res.n_noise;
        rec.eps = res.eps;
        if (res.embedding) {
          rec.initial_kl = res.embedding->initial_kl;
          rec.final_kl = res.embedding->kl;
        }
        rec.ok = true;
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
    }
  });

  for (std::size_t vi = 0; vi < cfg.values.size(); ++vi)
    for (std::size_t m = 0; m < n_methods; ++m) {
      SweepSummaryRow row;
      row.value = cfg.values[vi];
      row.method = cfg.methods[m];
      std::vector<double> amis;
      for (std::size_t run = 0; run < cfg.runs; ++run) {
        const auto& rec = result.records[(vi * cfg.runs + run) * n_methods + m];
        if (rec.ok)
          amis.push_back(rec.ami);
        else
          ++row.n_failed;
      }
      row.n_ok = amis.size();
      if (!amis.empty()) {
        double sum = 0.0;
        for (double a : amis) sum += a;
        row.mean = sum / static_cast<double>(amis.size());
        double var = 0.0;
        for (double a : amis) var += (a - row.mean) * (a - row.mean);
        row.std = std::sqrt(var / static_cast<double>(amis.size()));
      } else {
        row.mean = row.std = std::nan("");
      }
      result.summary.push_back(row);
    }
  return result;
}

std::string format_sweep_csv(const SweepResult& result) {
  const bool failures = !result.complete();
  std::string out = failures ? "experiment,value,method,run,ami,status,error\n" : "experiment,value,method,run,ami\n";
  for (const auto& r : result.records) {
    out += to_string(r.experiment) + ',' + format_double(r.value) + ',' + to_string(r.method) + ',' +
           std::to_string(r.run) + ',' + (r.ok ? format_double(r.ami) : std::string());
    if (failures) {
      std::string err = r.error;
      std::replace(err.begin(), err.end(), ',', ';');
      std::replace(err.begin(), err.end(), '\n', ' ');
      out += std::string(r.ok ? ",ok," : ",failed,") + err;
    }
    out += '\n';
  }
  return out;
}

std::string format_summary_csv(const SweepResult& result) {
  std::string out = "experiment,value,method,mean,std,n_ok,n_failed\n";
  for (const auto& r : result.summary)
    out += to_string(result.experiment) + ',' + format_double(r.value) + ',' + to_string(r.method) + ',' +
           (r.n_ok ? format_double(r.mean) : std::string()) + ',' + (r.n_ok ? format_double(r.std) : std::string()) +
           ',' + std::to_string(r.n_ok) + ',' + std::to_string(r.n_failed) + '\n';
  return out;
}

namespace {

std::string axis_label(Experiment e) {
  switch (e) {
    case Experiment::sigma: return "observation noise sigma";
    case Experiment::dout: return "d_out";
    case Experiment::nodes: return "|V|";
    case Experiment::nobs: return "|O|";
  }
  return "";
}

}  // namespace

ValidationSummary reproduce_validation(const ValidationOptions& options) {
  ValidationSummary report;
  const std::filesystem::path dir(options.out_dir);
  std::filesystem::create_directories(dir);

  const std::pair<Experiment, const std::vector<double>*> plan[] = {
      {Experiment::sigma, &options.sigma_values},
      {Experiment::dout, &options.dout_values},
      {Experiment::nodes, &options.nodes_values},
      {Experiment::nobs, &options.nobs_values},
  };
  for (const auto& [experiment, values] : plan) {
    SweepConfig cfg;
    cfg.experiment = experiment;
    cfg.values = *values;
    cfg.runs = options.runs;
    cfg.base = options.base;
    cfg.methods = options.methods;
    cfg.pipeline = options.pipeline;
    cfg.threads = options.threads;
    auto result = sweep(cfg);
    const auto name = to_string(experiment);
    write_file((dir / (name + "_runs.csv")).string(), format_sweep_csv(result));
    write_file((dir / (name + "_summary.csv")).string(), format_summary_csv(result));

    LinePlot plot;
    plot.title = "AMI vs " + axis_label(experiment);
    plot.x_label = axis_label(experiment);
    plot.y_label = "AMI";
    for (auto m : options.methods) {
      LineSeries s;
      s.name = to_string(m);
      for (const auto& row : result.summary)
        if (row.method == m && row.n_ok > 0) {
          s.x.push_back(row.value);
          s.mean.push_back(row.mean);
          s.std.push_back(row.std);
        }
      plot.series.push_back(std::move(s));
    }
    write_file((dir / (name + ".svg")).string(), render_line_plot(plot));

    for (const auto& row : result.summary)
      if (row.n_failed > 0)
        report.incomplete.push_back(name + " value " + format_double(row.value) + " method " + to_string(row.method) +
                                    ": " + std::to_string(row.n_failed) + " failed runs");
    report.sweeps.push_back(std::move(result));
  }

  std::string table = "method,sigma,dout,nodes,nobs\n";
  for (auto m : options.methods) {
    std::vector<double> cols;
    table += to_string(m);
    for (const auto& s : report.sweeps) {
      cols.push_back(s.overall_mean(m));
      table += ',' + format_double(cols.back());
    }
    table += '\n';
    report.table.emplace_back(m, std::move(cols));
  }
  write_file((dir / "summary_table.csv").string(), table);

  nlohmann::ordered_json j;
  j["runs"] = options.runs;
  j["base"] = {{"k", options.base.k},
               {"community_size", options.base.community_size},
               {"avg_degree", options.base.avg_degree},
               {"d_out", options.base.d_out},
               {"sigma", options.base.sigma},
               {"n_obs", options.base.n_obs},
               {"seed", options.base.seed}};
  j["dbscan"] = {{"min_pts", options.pipeline.dbscan.min_pts},
                 {"eps_mode", options.pipeline.dbscan.eps_mode == EpsMode::knee ? "knee" : "explicit"},
                 {"eps", options.pipeline.dbscan.eps}};
  j["tsne"] = {{"perplexity", options.pipeline.tsne.perplexity}, {"iterations", options.pipeline.tsne.iterations}};
  j["ami_normalization"] = "arithmetic";
  for (const auto& [m, cols] : report.table) {
    auto& row = j["table"][to_string(m)];
    const char* names[] = {"sigma", "dout", "nodes", "nobs"};
    for (std::size_t c = 0; c < cols.size(); ++c) row[names[c]] = cols[c];
  }
  j["incomplete"] = report.incomplete;
  write_file((dir / "report.json").string(), j.dump(2) + "\n");
  return report;
}

}  // namespace geclust
