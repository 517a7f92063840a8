// Command-line front end: generate datasets, run retrieval methods,
// sweep gamma, and break reports down by class and question type.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "graphhop/dataset_io.hpp"
#include "graphhop/harness.hpp"
#include "graphhop/synthgen.hpp"

namespace fs = std::filesystem;
using namespace graphhop;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

uint64_t resolve_seed(const std::optional<uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("GRAPHHOP_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("GRAPHHOP_SEED is not a number");
    }
  }
  return 0;
}

struct RunFlags {
  std::string dataset;
  std::string method = "bgr";
  std::string scorer = "bm25";
  double noise_p = 0.2;
  double gamma = 0.2;
  std::string fuse_mode = "union";
  std::optional<uint64_t> seed;
  int workers = 1;
  std::string out = "report.json";
  std::string external_reader;
  RetrievalConfig retrieval;
};

RunOptions to_options(const RunFlags& flags) {
  RunOptions options;
  options.method = method_from_string(flags.method);
  options.scorer.kind = scorer_kind_from_string(flags.scorer);
  options.scorer.noise_p = flags.noise_p;
  options.retrieval = flags.retrieval;
  options.gamma = flags.gamma;
  options.fuse_mode = fuse_mode_from_string(flags.fuse_mode);
  options.seed = resolve_seed(flags.seed);
  options.workers = flags.workers;
  options.external_reader = flags.external_reader;
  return options;
}

void add_retrieval_flags(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("--max-depth", flags.retrieval.max_depth, "Path depth limit");
  cmd->add_option("--max-nodes", flags.retrieval.max_nodes, "Graph node limit");
  cmd->add_option("--top-k", flags.retrieval.top_k_per_path,
                  "Accepted candidates per path step");
  cmd->add_option("--seed-k", flags.retrieval.backward_seed_k,
                  "Backward seed count");
}

int cmd_generate(const std::string& config_path, const std::string& out_dir,
                 std::optional<uint64_t> seed_flag) {
  GenConfig cfg = load_gen_config(config_path);
  if (seed_flag) cfg.rng_seed = *seed_flag;
  if (cfg.triples_path.empty()) {
    throw ConfigError("config is missing triples_path");
  }
  TripleStore store = TripleStore::load_file(cfg.triples_path);
  GeneratedDataset ds = generate(store, cfg);

  fs::create_directories(out_dir);
  write_dataset(ds.train, (fs::path(out_dir) / "train.jsonl").string());
  write_dataset(ds.dev, (fs::path(out_dir) / "dev.jsonl").string());
  write_dataset(ds.test, (fs::path(out_dir) / "test.jsonl").string());
  write_distribution_report(ds.report,
                            (fs::path(out_dir) / "distribution.json").string(),
                            (fs::path(out_dir) / "distribution.txt").string());
  std::cout << render_distribution_report(ds.report);
  return kExitOk;
}

int cmd_run(const RunFlags& flags) {
  std::vector<QAInstance> instances = read_dataset(flags.dataset);
  RunReport report = run_method(instances, to_options(flags));
  write_report(report, flags.out);
  std::cout << render_report_table(report);
  return kExitOk;
}

int cmd_sweep(const RunFlags& flags, const std::string& gammas_csv) {
  std::vector<QAInstance> instances = read_dataset(flags.dataset);
  std::vector<double> grid;
  for (const std::string& part : split(gammas_csv, ',')) {
    if (part.empty()) continue;
    try {
      grid.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw ConfigError("bad gamma value: " + part);
    }
  }
  std::vector<SweepRow> rows = run_sweep(instances, to_options(flags), grid);
  std::string tsv = render_sweep_tsv(rows);
  std::ofstream out(flags.out);
  if (!out) throw DataError("cannot write sweep: " + flags.out);
  out << tsv;
  std::cout << tsv;
  return kExitOk;
}

int cmd_breakdown(const std::string& report_path, const std::string& dataset_path,
                  const std::string& out_path) {
  RunReport report = load_report(report_path);
  std::vector<QAInstance> instances = read_dataset(dataset_path);
  Breakdown breakdown = compute_breakdown(report, instances);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw DataError("cannot write breakdown: " + out_path);
    out << breakdown_to_json(breakdown) << "\n";
  }
  std::cout << render_breakdown(breakdown);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-Hop retrieval toolkit"};
  app.require_subcommand(1);

  // generate
  std::string gen_config;
  std::string gen_out = "dataset";
  std::optional<uint64_t> gen_seed;
  CLI::App* generate_cmd =
      app.add_subcommand("generate", "Generate a synthetic dataset");
  generate_cmd->add_option("--config", gen_config, "Generator config (json)")
      ->required();
  generate_cmd->add_option("--out", gen_out, "Output directory");
  generate_cmd->add_option("--seed", gen_seed, "Seed override");

  // run
  RunFlags run_flags;
  std::optional<uint64_t> run_seed;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a retrieval method");
  run_cmd->add_option("--dataset", run_flags.dataset, "Dataset file (jsonl)")
      ->required();
  run_cmd->add_option("--method", run_flags.method,
                      "random|bm25-topk|forward|backward|bgr");
  run_cmd->add_option("--scorer", run_flags.scorer,
                      "bm25|random|oracle|noisy-oracle");
  run_cmd->add_option("--noise-p", run_flags.noise_p, "Noisy-oracle flip rate");
  run_cmd->add_option("--gamma", run_flags.gamma, "Fusion threshold");
  run_cmd->add_option("--fuse-mode", run_flags.fuse_mode, "union|intersection");
  run_cmd->add_option("--seed", run_seed, "Run seed (else GRAPHHOP_SEED, else 0)");
  run_cmd->add_option("--workers", run_flags.workers, "Worker threads");
  run_cmd->add_option("--out", run_flags.out, "Report path (json)");
  run_cmd->add_option("--external-reader", run_flags.external_reader,
                      "Shell command reading evidence on stdin");
  add_retrieval_flags(run_cmd, run_flags);

  // sweep
  RunFlags sweep_flags;
  std::optional<uint64_t> sweep_seed;
  std::string gammas = "0.0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0";
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Gamma sweep curve");
  sweep_cmd->add_option("--dataset", sweep_flags.dataset, "Dataset file (jsonl)")
      ->required();
  sweep_cmd->add_option("--scorer", sweep_flags.scorer,
                        "bm25|random|oracle|noisy-oracle");
  sweep_cmd->add_option("--noise-p", sweep_flags.noise_p, "Noisy-oracle flip rate");
  sweep_cmd->add_option("--gammas", gammas, "Comma-separated grid");
  sweep_cmd->add_option("--fuse-mode", sweep_flags.fuse_mode, "union|intersection");
  sweep_cmd->add_option("--seed", sweep_seed, "Run seed");
  sweep_cmd->add_option("--out", sweep_flags.out, "Curve file (tsv)");
  add_retrieval_flags(sweep_cmd, sweep_flags);
  sweep_flags.out = "sweep.tsv";

  // breakdown
  std::string bd_report, bd_dataset, bd_out;
  CLI::App* breakdown_cmd =
      app.add_subcommand("breakdown", "Per-class and per-type tables");
  breakdown_cmd->add_option("--report", bd_report, "Report file (json)")->required();
  breakdown_cmd->add_option("--dataset", bd_dataset, "Dataset file (jsonl)")
      ->required();
  breakdown_cmd->add_option("--out", bd_out, "Breakdown json path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate_cmd->parsed()) return cmd_generate(gen_config, gen_out, gen_seed);
    if (run_cmd->parsed()) {
      run_flags.seed = run_seed;
      return cmd_run(run_flags);
    }
    if (sweep_cmd->parsed()) {
      sweep_flags.seed = sweep_seed;
      return cmd_sweep(sweep_flags, gammas);
    }
    if (breakdown_cmd->parsed()) return cmd_breakdown(bd_report, bd_dataset, bd_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const GenerationError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
