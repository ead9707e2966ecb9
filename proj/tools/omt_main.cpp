// omt: streaming one-class recognition from a single labeled example.
//
// Subcommands: synth, run, sweep, bench, roc-nn. All randomness flows from
// --seed; output files are written atomically (temp file + rename).

#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "omt/eval.hpp"
#include "omt/io_util.hpp"
#include "omt/recognizer.hpp"
#include "omt/streams.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct ConfigFlags {
  double radius = 0.3;
  int k = 300;
  double sigma = 0.03;
  double gamma = omt::OmtConfig::default_sink_gamma();
  double epsilon = 0.5;
  double r0 = 0.05;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--radius", flags.radius, "Generalization radius R")
      ->envname("OMT_RADIUS")
      ->capture_default_str();
  cmd->add_option("--k", flags.k, "Representative budget k")
      ->envname("OMT_K")
      ->capture_default_str();
  cmd->add_option("--sigma", flags.sigma, "Heat parameter sigma")
      ->envname("OMT_SIGMA")
      ->capture_default_str();
  cmd->add_option("--gamma", flags.gamma, "Sink edge weight gamma")
      ->envname("OMT_GAMMA")
      ->capture_default_str();
  cmd->add_option("--epsilon", flags.epsilon, "Recognition threshold epsilon")
      ->envname("OMT_EPSILON")
      ->capture_default_str();
  cmd->add_option("--r0", flags.r0, "Initial cover radius r0")
      ->envname("OMT_R0")
      ->capture_default_str();
  cmd->set_config("--config", "", "Flat key=value config file; command-line flags win");
  cmd->allow_config_extras(false);
}

omt::OmtConfig make_config(const ConfigFlags& flags, const omt::FeatureVector& anchor) {
  omt::OmtConfig cfg;
  cfg.generalization_radius = flags.radius;
  cfg.max_representatives = flags.k;
  cfg.heat_sigma = flags.sigma;
  cfg.sink_gamma = flags.gamma;
  cfg.recognition_threshold = flags.epsilon;
  cfg.initial_cover_radius = flags.r0;
  cfg.labeled_anchor = anchor;
  cfg.validate();
  return cfg;
}

struct ReplayResult {
  std::vector<omt::ScoredFrame> frames;
  std::vector<omt::Prediction> predictions;
  omt::TimingReport timings;
  omt::CoverState final_cover;
  std::uint64_t steps = 0;
};

ReplayResult replay_detailed(const omt::Stream& stream, const omt::OmtConfig& cfg) {
  using clock = std::chrono::steady_clock;
  omt::OmtRecognizer rec(cfg);
  ReplayResult result;
  result.frames.reserve(stream.records.size());
  result.predictions.reserve(stream.records.size());
  result.timings.steps.reserve(stream.records.size());
  for (const auto& record : stream.records) {
    auto start = clock::now();
    omt::Prediction pred = rec.process_step(record.vector);
    auto stop = clock::now();
    double micros =
        static_cast<double>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count()) /
        1000.0;
    result.frames.push_back({pred.gated, pred.score.value_or(0.0), record.true_label});
    result.timings.steps.push_back({static_cast<std::uint64_t>(record.t), micros,
                                    rec.cover().size(), rec.cover().cover_radius});
    result.predictions.push_back(std::move(pred));
  }
  result.final_cover = rec.cover();
  result.steps = rec.step_count();
  return result;
}

double mean_step_micros(const omt::TimingReport& report) {
  if (report.steps.empty()) return 0.0;
  double total = 0.0;
  for (const auto& step : report.steps) total += step.micros;
  return total / static_cast<double>(report.steps.size());
}

void write_predictions_csv(const omt::Stream& stream, const std::vector<omt::Prediction>& preds,
                           std::ostream& out) {
  out << "t,label,gated,nearest,score,pred\n";
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto& pred = preds[i];
    out << stream.records[i].t << ',' << stream.records[i].true_label << ','
        << (pred.gated ? 1 : 0) << ',';
    if (pred.nearest_index) out << *pred.nearest_index;
    out << ',';
    if (pred.score) out << omt::format_double(*pred.score);
    out << ',' << pred.identity << '\n';
  }
}

// ---------------------------------------------------------------- synth ----

struct SynthArgs {
  omt::SynthSpec spec;
  std::string out;
  std::string format;
};

void setup_synth(CLI::App& app, SynthArgs& args) {
  auto* cmd = app.add_subcommand("synth", "Generate a deterministic synthetic stream");
  cmd->add_option("--seed", args.spec.seed, "RNG seed")->envname("OMT_SEED")
      ->capture_default_str();
  cmd->add_option("--steps", args.spec.n_steps, "Number of target frames")
      ->capture_default_str();
  cmd->add_option("--dim", args.spec.dim, "Feature dimension")->capture_default_str();
  cmd->add_option("--latent-dim", args.spec.latent_dim, "Dimension of the target patch")
      ->capture_default_str();
  cmd->add_option("--start-offset", args.spec.start_offset,
                  "Latent distance of the walk start from the anchor")
      ->capture_default_str();
  cmd->add_option("--drift", args.spec.drift, "Per-step latent step scale")
      ->capture_default_str();
  cmd->add_option("--noise", args.spec.noise, "Per-coordinate ambient jitter")
      ->capture_default_str();
  cmd->add_option("--extent", args.spec.extent, "Latent ball radius bounding the walk")
      ->capture_default_str();
  cmd->add_option("--clusters", args.spec.distractor_clusters, "Number of distractor clusters")
      ->capture_default_str();
  cmd->add_option("--spread", args.spec.distractor_spread, "Per-coordinate cluster scatter")
      ->capture_default_str();
  cmd->add_option("--min-distance", args.spec.distractor_min_distance,
                  "Chord distance of the nearest cluster center")
      ->capture_default_str();
  cmd->add_option("--max-distance", args.spec.distractor_max_distance,
                  "Chord distance of the farthest cluster center")
      ->capture_default_str();
  cmd->add_flag("--interleave", args.spec.interleave,
                "Insert one distractor frame after every target frame");
  cmd->add_option("--out", args.out, "Output stream file (.csv or .jsonl)")->required();
  cmd->add_option("--format", args.format, "csv|jsonl (default: from --out extension)")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  cmd->callback([&args] {
    omt::StreamFormat format = args.format.empty()
                                   ? omt::format_from_path(args.out)
                                   : (args.format == "jsonl" ? omt::StreamFormat::Jsonl
                                                             : omt::StreamFormat::Csv);
    omt::Stream stream = omt::synth_stream(args.spec);
    omt::emit_file(stream, args.out, format);
    std::cout << "wrote " << (stream.records.size() + 1) << " rows (1 anchor + "
              << stream.records.size() << " frames) to " << args.out << "\n";
  });
}

// ------------------------------------------------------------------ run ----

struct RunArgs {
  std::string stream_path;
  ConfigFlags flags;
  std::string out_predictions;
  std::string out_diagnostics;
  std::string out_summary;
  std::string snapshot_out;
  std::string dump_cover;
};

void setup_run(CLI::App& app, RunArgs& args) {
  auto* cmd = app.add_subcommand("run", "Replay a stream through the recognizer");
  cmd->add_option("--stream", args.stream_path, "Input stream file")->required();
  add_config_flags(cmd, args.flags);
  cmd->add_option("--out-predictions", args.out_predictions, "Per-step predictions CSV");
  cmd->add_option("--out-diagnostics", args.out_diagnostics, "Per-step timing/cover JSONL");
  cmd->add_option("--summary", args.out_summary, "Summary JSON path");
  cmd->add_option("--snapshot-out", args.snapshot_out, "Save the final recognizer state");
  cmd->add_option("--dump-cover", args.dump_cover, "Dump the final cover as CSV");
  cmd->callback([&args] {
    omt::Stream stream = omt::ingest_file(args.stream_path);
    omt::OmtConfig cfg = make_config(args.flags, stream.anchor);
    ReplayResult result = replay_detailed(stream, cfg);

    if (!args.out_predictions.empty())
      omt::atomic_write_file(args.out_predictions, [&](std::ostream& out) {
        write_predictions_csv(stream, result.predictions, out);
      });
    if (!args.out_diagnostics.empty())
      omt::atomic_write_file(args.out_diagnostics, [&](std::ostream& out) {
        omt::write_timings_jsonl(result.timings, out);
      });
    if (!args.snapshot_out.empty()) {
      omt::OmtRecognizer rec(cfg);  // reconstruct through the snapshot path
      for (const auto& record : stream.records) rec.process_step(record.vector);
      omt::atomic_write_file(args.snapshot_out,
                             [&](std::ostream& out) { rec.save_snapshot(out); });
    }
    if (!args.dump_cover.empty())
      omt::atomic_write_file(args.dump_cover, [&](std::ostream& out) {
        omt::dump_cover_csv(result.final_cover, out);
      });

    nlohmann::ordered_json summary;
    summary["stream"] = args.stream_path;
    summary["steps"] = result.steps;
    summary["scale"] = stream.scale;
    summary["epsilon"] = cfg.recognition_threshold;
    summary["final_cover_size"] = result.final_cover.size();
    summary["final_cover_radius"] = result.final_cover.cover_radius;
    summary["doubling_count"] = result.final_cover.doubling_count;
    std::size_t gated = 0;
    for (const auto& f : result.frames) gated += f.gated ? 1 : 0;
    summary["gated_fraction"] =
        result.frames.empty() ? 0.0
                              : static_cast<double>(gated) / static_cast<double>(result.frames.size());

    bool has_pos = false, has_neg = false;
    for (const auto& record : stream.records)
      (record.true_label == 1 ? has_pos : has_neg) = true;
    if (has_pos && has_neg) {
      std::vector<int> preds, labels;
      for (std::size_t i = 0; i < result.predictions.size(); ++i) {
        preds.push_back(result.predictions[i].identity);
        labels.push_back(stream.records[i].true_label);
      }
      auto [tpr, fpr] = omt::confusion(preds, labels);
      summary["tpr"] = tpr;
      summary["fpr"] = fpr;
      std::cout << "tpr " << omt::format_double(tpr) << " fpr " << omt::format_double(fpr)
                << " at epsilon " << omt::format_double(cfg.recognition_threshold) << "\n";
    } else {
      summary["tpr"] = nullptr;
      summary["fpr"] = nullptr;
      std::cout << "stream has a single label class, no rates\n";
    }
    std::cout << "cover " << result.final_cover.size() << " reps, r "
              << omt::format_double(result.final_cover.cover_radius) << ", mean step "
              << omt::format_double(mean_step_micros(result.timings)) << " us\n";

    if (!args.out_summary.empty())
      omt::atomic_write_file(args.out_summary,
                             [&](std::ostream& out) { out << summary.dump(2) << '\n'; });
  });
}

// ---------------------------------------------------------------- sweep ----

struct SweepArgs {
  std::string stream_path;
  std::string axis;
  std::vector<double> grid;
  ConfigFlags flags;
  std::string out;
  unsigned jobs = 1;
};

void sweep_parallel(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& work) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto runner = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        work(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  for (unsigned t = 0; t < std::min<unsigned>(jobs, static_cast<unsigned>(n)); ++t)
    pool.emplace_back(runner);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void setup_sweep(CLI::App& app, SweepArgs& args) {
  auto* cmd = app.add_subcommand("sweep", "Sweep epsilon, radius or k over a stream");
  cmd->add_option("--stream", args.stream_path, "Input stream file")->required();
  cmd->add_option("--axis", args.axis, "epsilon|radius|k")
      ->required()
      ->check(CLI::IsMember({"epsilon", "radius", "k"}));
  cmd->add_option("--grid", args.grid, "Comma-separated grid values")
      ->required()
      ->delimiter(',');
  cmd->add_option("--jobs", args.jobs, "Parallel replays")->capture_default_str();
  add_config_flags(cmd, args.flags);
  cmd->add_option("--out", args.out, "Output CSV")->required();
  cmd->callback([&args] {
    if (args.grid.empty()) throw CLI::ValidationError("--grid", "empty grid");
    omt::Stream stream = omt::ingest_file(args.stream_path);

    if (args.axis == "epsilon") {
      omt::OmtConfig cfg = make_config(args.flags, stream.anchor);
      omt::RocCurve curve = omt::roc_sweep_omt(stream, cfg, args.grid);
      omt::atomic_write_file(args.out,
                             [&](std::ostream& out) { omt::write_roc_csv(curve, out); });
      std::cout << "epsilon sweep: " << curve.points.size() << " points, auc "
                << omt::format_double(curve.auc) << "\n";
      return;
    }

    // radius and k sweeps re-run the whole pipeline per grid value and report
    // one row per value: the full-curve AUC, the gate operating point, the
    // interpolated TPR at 1% FPR, timing, and the final cover.
    struct Row {
      double value = 0.0;
      double auc = 0.0;
      double max_tpr = 0.0;
      double max_fpr = 0.0;
      double tpr_at_fpr_001 = 0.0;
      double mean_micros = 0.0;
      std::size_t cover_size = 0;
      double cover_radius = 0.0;
    };
    std::vector<Row> rows(args.grid.size());
    sweep_parallel(args.grid.size(), args.jobs, [&](std::size_t i) {
      ConfigFlags flags = args.flags;
      if (args.axis == "radius") {
        flags.radius = args.grid[i];
      } else {
        double k = args.grid[i];
        if (k < 1.0 || k != static_cast<double>(static_cast<int>(k)))
          throw omt::UsageError("sweep: k grid values must be positive integers");
        flags.k = static_cast<int>(k);
      }
      omt::OmtConfig cfg = make_config(flags, stream.anchor);
      ReplayResult result = replay_detailed(stream, cfg);
      omt::RocCurve curve = omt::roc_from_scores(result.frames, {});
      Row row;
      row.value = args.grid[i];
      row.auc = curve.auc;
      for (const auto& p : curve.points) {
        if (p.tpr > row.max_tpr) row.max_tpr = p.tpr;
        if (p.fpr > row.max_fpr) row.max_fpr = p.fpr;
      }
      row.tpr_at_fpr_001 = omt::tpr_at_fpr(curve, 0.01);
      row.mean_micros = mean_step_micros(result.timings);
      row.cover_size = result.final_cover.size();
      row.cover_radius = result.final_cover.cover_radius;
      rows[i] = row;
    });

    omt::atomic_write_file(args.out, [&](std::ostream& out) {
      out << args.axis
          << ",auc,max_tpr,max_fpr,tpr_at_fpr_001,mean_step_micros,final_cover_size,"
             "final_cover_radius\n";
      for (const auto& row : rows)
        out << omt::format_double(row.value) << ',' << omt::format_double(row.auc) << ','
            << omt::format_double(row.max_tpr) << ',' << omt::format_double(row.max_fpr) << ','
            << omt::format_double(row.tpr_at_fpr_001) << ','
            << omt::format_double(row.mean_micros) << ',' << row.cover_size << ','
            << omt::format_double(row.cover_radius) << '\n';
    });
    std::cout << args.axis << " sweep: " << rows.size() << " rows written to " << args.out
              << "\n";
  });
}

// ---------------------------------------------------------------- bench ----

struct BenchArgs {
  omt::SynthSpec spec;
  ConfigFlags flags;
  std::string out;
  std::string out_summary;
};

void setup_bench(CLI::App& app, BenchArgs& args) {
  // saturating defaults: a wide fast walk that fills the budget early
  args.spec.seed = 7;
  args.spec.n_steps = 20000;
  args.spec.latent_dim = 4;
  args.spec.drift = 0.1;
  args.spec.noise = 0.003;
  args.spec.extent = 0.25;

  auto* cmd = app.add_subcommand("bench", "Per-step cost benchmark on a synthetic stream");
  cmd->add_option("--seed", args.spec.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--steps", args.spec.n_steps, "Stream length")->capture_default_str();
  cmd->add_option("--dim", args.spec.dim, "Feature dimension")->capture_default_str();
  cmd->add_option("--latent-dim", args.spec.latent_dim, "Dimension of the target patch")
      ->capture_default_str();
  cmd->add_option("--drift", args.spec.drift, "Per-step latent step scale")
      ->capture_default_str();
  add_config_flags(cmd, args.flags);
  cmd->add_option("--out", args.out, "Per-step timings JSONL");
  cmd->add_option("--summary", args.out_summary, "Summary JSON path");
  cmd->callback([&args] {
    omt::Stream stream = omt::synth_stream(args.spec);
    omt::OmtConfig cfg = make_config(args.flags, stream.anchor);
    omt::TimingReport report = omt::bench_step_time(stream, cfg);
    if (!args.out.empty())
      omt::atomic_write_file(args.out, [&](std::ostream& out) {
        omt::write_timings_jsonl(report, out);
      });

    nlohmann::ordered_json summary;
    summary["steps"] = report.steps.size();
    summary["k"] = args.flags.k;
    summary["mean_step_micros"] = mean_step_micros(report);
    if (report.summary) {
      summary["early_mean_micros"] = report.summary->early_mean_micros;
      summary["late_mean_micros"] = report.summary->late_mean_micros;
      summary["late_to_early_ratio"] = report.summary->ratio;
      std::cout << "early mean " << omt::format_double(report.summary->early_mean_micros)
                << " us, late mean " << omt::format_double(report.summary->late_mean_micros)
                << " us, ratio " << omt::format_double(report.summary->ratio) << "\n";
    } else {
      std::cout << "stream shorter than 4000 steps, no early/late summary\n";
    }
    if (!args.out_summary.empty())
      omt::atomic_write_file(args.out_summary,
                             [&](std::ostream& out) { out << summary.dump(2) << '\n'; });
  });
}

// --------------------------------------------------------------- roc-nn ----

struct RocNnArgs {
  std::string stream_path;
  std::string anchors_path;
  std::vector<double> grid;
  std::string out;
};

void setup_roc_nn(CLI::App& app, RocNnArgs& args) {
  auto* cmd = app.add_subcommand("roc-nn", "Nearest-neighbor baseline ROC over radii");
  cmd->add_option("--stream", args.stream_path, "Input stream file")->required();
  cmd->add_option("--anchors", args.anchors_path,
                  "Optional stream file whose anchor and records become NN anchors");
  cmd->add_option("--grid", args.grid, "Comma-separated radius grid")
      ->required()
      ->delimiter(',');
  cmd->add_option("--out", args.out, "Output ROC CSV")->required();
  cmd->callback([&args] {
    if (args.grid.empty()) throw CLI::ValidationError("--grid", "empty grid");
    omt::Stream stream = omt::ingest_file(args.stream_path);
    std::vector<omt::FeatureVector> anchors;
    if (args.anchors_path.empty()) {
      anchors.push_back(stream.anchor);
    } else {
      omt::Stream extra = omt::ingest_file(args.anchors_path);
      anchors.push_back(extra.anchor);
      for (const auto& record : extra.records) anchors.push_back(record.vector);
    }
    omt::RocCurve curve = omt::roc_sweep_nn(stream, anchors, args.grid);
    omt::atomic_write_file(args.out, [&](std::ostream& out) { omt::write_roc_csv(curve, out); });
    std::cout << "nn sweep: " << curve.points.size() << " points, auc "
              << omt::format_double(curve.auc) << "\n";
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming one-class recognition from a single labeled example"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "omt 0.1.0");

  SynthArgs synth_args;
  RunArgs run_args;
  SweepArgs sweep_args;
  BenchArgs bench_args;
  RocNnArgs roc_nn_args;
  setup_synth(app, synth_args);
  setup_run(app, run_args);
  setup_sweep(app, sweep_args);
  setup_bench(app, bench_args);
  setup_roc_nn(app, roc_nn_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const omt::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const omt::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const omt::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
