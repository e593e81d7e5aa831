// Copyright 2026 The seqtouch Authors
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

#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "seqtouch/dagger.hpp"
#include "seqtouch/dataset.hpp"
#include "seqtouch/env.hpp"
#include "seqtouch/evaluate.hpp"
#include "seqtouch/experts.hpp"
#include "seqtouch/io_util.hpp"
#include "seqtouch/policy.hpp"
#include "seqtouch/run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace seqtouch;

namespace {

std::string timestamp_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  localtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y%m%d-%H%M%S");
  return out.str();
}

// runs/<timestamp>-seed<S>/ with the fully resolved config inside. File
// contents carry no timestamps; only the directory name does.
fs::path make_run_dir(const RunConfig& cfg) {
  const fs::path base(cfg.out_dir);
  fs::create_directories(base);
  const std::string stem = timestamp_now() + "-seed" + std::to_string(cfg.seed);
  fs::path dir = base / stem;
  int n = 1;
  while (fs::exists(dir)) dir = base / (stem + "-" + std::to_string(n++));
  fs::create_directories(dir);
  write_text_file((dir / "resolved_config.json").string(),
                  cfg.to_json_text());
  return dir;
}

struct Common {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  std::string arch;
  bool oracle = false;
  std::string noise;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* arch_opt = nullptr;
  CLI::Option* oracle_opt = nullptr;
  CLI::Option* noise_opt = nullptr;
};

void add_common(CLI::App* sc, Common& c) {
  sc->add_option("--config", c.config_path, "Run config JSON file");
  c.seed_opt = sc->add_option("--seed", c.seed, "Master seed override");
  c.out_opt = sc->add_option("--out", c.out, "Output directory root");
  c.arch_opt = sc->add_option("--arch", c.arch, "Model architecture")
                   ->check(CLI::IsMember({"transformer", "lstm", "bc"}));
  c.oracle_opt = sc->add_flag(
      "--oracle", c.oracle, "Supervise the bottleneck with the true pose");
  c.noise_opt = sc->add_option("--noise", c.noise, "Sensor noise")
                    ->check(CLI::IsMember({"on", "off"}));
}

// Config file first, explicit flags on top.
RunConfig resolve(const Common& c) {
  RunConfig cfg;
  if (!c.config_path.empty()) cfg = load_run_config(c.config_path);
  if (c.seed_opt->count() > 0) cfg.seed = c.seed;
  if (c.out_opt->count() > 0) cfg.out_dir = c.out;
  if (c.arch_opt->count() > 0) cfg.model.arch = arch_from_name(c.arch);
  if (c.oracle_opt->count() > 0) cfg.model.latent_supervised = true;
  if (c.noise_opt->count() > 0) cfg.env.noise_enabled = (c.noise == "on");
  cfg.validate();
  return cfg;
}

// Checkpoints written by train/dagger keep their model config alongside;
// prefer it, but let explicit --arch/--oracle flags win.
void apply_checkpoint_model(RunConfig& cfg, const std::string& checkpoint,
                            const Common& c) {
  const fs::path sibling = fs::path(checkpoint).parent_path() / "model.json";
  if (fs::exists(sibling)) {
    cfg.model = ModelConfig::from_json_text(read_text_file(sibling.string()));
    if (c.arch_opt->count() > 0) cfg.model.arch = arch_from_name(c.arch);
    if (c.oracle_opt->count() > 0) cfg.model.latent_supervised = true;
    cfg.model.validate();
  }
}

double mean_demo_loss(Policy& policy, const std::vector<DemoRecord>& demos) {
  double sum = 0.0;
  for (const DemoRecord& d : demos) {
    ad::Tape tape;
    sum += policy.demo_loss(tape, d).data()[0];
  }
  return demos.empty() ? 0.0 : sum / static_cast<double>(demos.size());
}

json action_json(const Action& a) { return json::array({a.dx, a.dy, a.dphi}); }

void run_collect_templates(const Common& c, int n) {
  RunConfig cfg = resolve(c);
  const fs::path dir = make_run_dir(cfg);
  json j;
  j["canonical"] = json::array();
  for (const ExplorationTemplate& t : exploration_templates()) {
    json jt;
    jt["id"] = t.id;
    jt["actions"] = json::array();
    for (const Action& a : t.actions) jt["actions"].push_back(action_json(a));
    j["canonical"].push_back(jt);
  }
  if (n > 0) {
    Rng rng(derive_seed(cfg.seed, 9));
    j["sampled"] = json::array();
    for (const ExplorationTemplate& t : sampled_templates(n, rng)) {
      json jt;
      jt["id"] = t.id;
      jt["actions"] = json::array();
      for (const Action& a : t.actions) jt["actions"].push_back(action_json(a));
      j["sampled"].push_back(jt);
    }
  }
  write_text_file((dir / "templates.json").string(), j.dump(2) + "\n");
  std::cout << json{{"run_dir", dir.string()},
                    {"templates",
                     static_cast<int>(exploration_templates().size())},
                    {"sampled", n}}
                   .dump()
            << "\n";
}

void run_collect_demos(const Common& c, int n) {
  RunConfig cfg = resolve(c);
  if (n < 1) throw std::invalid_argument("collect-demos: --n must be >= 1");
  const fs::path dir = make_run_dir(cfg);
  ContactEnv env(cfg.env);
  const auto& templates = exploration_templates();

  std::vector<DemoRecord> demos;
  long long interactions = 0;
  int attempt = 0;
  const int max_attempts = 20 * n;
  while (static_cast<int>(demos.size()) < n && attempt < max_attempts) {
    const std::uint64_t episode_seed =
        derive_seed(cfg.seed, 0xD000 + static_cast<std::uint64_t>(attempt));
    WorldState start = env.reset(episode_seed).first;
    const int tid = attempt % static_cast<int>(templates.size());
    Rng jitter(
        derive_seed(cfg.seed, 0xD100 + static_cast<std::uint64_t>(attempt)));
    ExplorationTemplate tpl = jittered_template(templates[tid], jitter);
    ExplorationRollout probe = run_exploration(env, start, tpl);
    SkillPlan plan = oracle_skill(start.hidden);
    PlanExecution ex = execute_plan(env, probe.state, plan, cfg.skill_budget);
    interactions +=
        static_cast<long long>(tpl.actions.size()) + ex.steps_used;
    ++attempt;
    if (!ex.success) continue;
    DemoRecord record;
    record.seed = episode_seed;
    record.hidden = start.hidden;
    record.source = DemoSource::kExpert;
    record.template_id = tid;
    record.exploration = probe.traj;
    record.skill = plan;
    demos.push_back(std::move(record));
  }
  if (static_cast<int>(demos.size()) < n) {
    throw std::runtime_error("collect-demos: expert kept failing; got " +
                             std::to_string(demos.size()) + " of " +
                             std::to_string(n));
  }
  save_dataset((dir / "demos.jsonl").string(), demos);
  json summary{{"run_dir", dir.string()},
               {"kept", n},
               {"attempts", attempt},
               {"interactions", interactions}};
  write_text_file((dir / "summary.json").string(), summary.dump(2) + "\n");
  std::cout << summary.dump() << "\n";
}

void run_train(const Common& c, const std::string& dataset, int epochs_flag,
               CLI::Option* epochs_opt) {
  RunConfig cfg = resolve(c);
  if (epochs_opt->count() > 0) cfg.train_epochs = epochs_flag;
  const fs::path dir = make_run_dir(cfg);
  std::vector<DemoRecord> demos = load_dataset(dataset);
  FineTuneConfig ft;
  ft.epochs = cfg.train_epochs;
  ft.adam = cfg.adam;
  auto policy = train_policy(cfg.model, demos, ft, derive_seed(cfg.seed, 4));
  policy->save((dir / "checkpoint.bin").string());
  write_text_file((dir / "model.json").string(), cfg.model.to_json_text());
  json summary{{"run_dir", dir.string()},
               {"records", static_cast<int>(demos.size())},
               {"epochs", cfg.train_epochs},
               {"mean_loss", mean_demo_loss(*policy, demos)}};
  write_text_file((dir / "summary.json").string(), summary.dump(2) + "\n");
  std::cout << summary.dump() << "\n";
}

void run_dagger(const Common& c, const std::string& dataset,
                const std::string& checkpoint, int budget_flag,
                CLI::Option* budget_opt) {
  RunConfig cfg = resolve(c);
  if (budget_opt->count() > 0) cfg.budget = budget_flag;
  if (!checkpoint.empty()) apply_checkpoint_model(cfg, checkpoint, c);
  const fs::path dir = make_run_dir(cfg);
  ContactEnv env(cfg.env);

  std::vector<DemoRecord> demos;
  if (!dataset.empty()) demos = load_dataset(dataset);

  std::unique_ptr<Policy> policy;
  if (!checkpoint.empty()) {
    policy = make_policy(cfg.model, derive_seed(cfg.seed, 4));
    policy->load(checkpoint);
  } else if (!demos.empty()) {
    FineTuneConfig ft;
    ft.epochs = cfg.train_epochs;
    ft.adam = cfg.adam;
    policy = train_policy(cfg.model, demos, ft, derive_seed(cfg.seed, 4));
  } else {
    policy = make_policy(cfg.model, derive_seed(cfg.seed, 4));
  }

  DaggerConfig dc;
  dc.budget = cfg.budget;
  dc.stop_consecutive = cfg.stop_consecutive;
  dc.skill_budget = cfg.skill_budget;
  dc.ft_epochs = cfg.ft_epochs;
  dc.adam = cfg.adam;
  DaggerResult result =
      dagger_run(env, *policy, demos, dc, derive_seed(cfg.seed, 6),
                 (dir / "dagger_log.jsonl").string());

  policy->save((dir / "checkpoint.bin").string());
  write_text_file((dir / "model.json").string(), cfg.model.to_json_text());
  save_dataset((dir / "dataset.jsonl").string(), result.dataset);
  const std::vector<DemoRecord> corrections(
      result.dataset.begin() + static_cast<long>(demos.size()),
      result.dataset.end());
  save_dataset((dir / "corrections.jsonl").string(), corrections);

  SampleEfficiencyReport eff = sample_efficiency_report(
      read_text_file((dir / "dagger_log.jsonl").string()));
  write_text_file((dir / "sample_efficiency.json").string(),
                  eff.to_json_text());
  write_text_file((dir / "sample_efficiency.csv").string(), eff.to_csv());

  json summary{{"run_dir", dir.string()},
               {"episodes", result.episodes},
               {"successes", result.successes},
               {"corrections", result.corrections},
               {"interactions", result.interactions},
               {"converged", result.converged},
               {"dataset_size", static_cast<int>(result.dataset.size())}};
  write_text_file((dir / "summary.json").string(), summary.dump(2) + "\n");
  std::cout << summary.dump() << "\n";
}

void run_eval(const Common& c, const std::string& checkpoint, int trials_flag,
              CLI::Option* trials_opt) {
  RunConfig cfg = resolve(c);
  if (trials_opt->count() > 0) cfg.episodes = trials_flag;
  apply_checkpoint_model(cfg, checkpoint, c);
  const fs::path dir = make_run_dir(cfg);
  ContactEnv env(cfg.env);
  auto policy = make_policy(cfg.model, derive_seed(cfg.seed, 4));
  policy->load(checkpoint);
  const auto seeds = eval_seeds(derive_seed(cfg.seed, 5), cfg.episodes);
  EvalReport report = evaluate(env, *policy, seeds, cfg.skill_budget);
  write_text_file((dir / "report.json").string(), report.to_json_text());
  write_text_file((dir / "report.csv").string(), report.to_csv());
  std::cout << json{{"run_dir", dir.string()},
                    {"trials", report.trials},
                    {"successes", report.successes},
                    {"success_rate", report.success_rate}}
                   .dump()
            << "\n";
}

void run_ablate(const Common& c, const std::string& pool_path,
                std::vector<int> counts, CLI::Option* counts_opt,
                int trials_flag, CLI::Option* trials_opt) {
  RunConfig cfg = resolve(c);
  if (counts_opt->count() > 0) cfg.demo_counts = counts;
  if (trials_opt->count() > 0) cfg.ablation_trials = trials_flag;
  const fs::path dir = make_run_dir(cfg);
  ContactEnv env(cfg.env);
  std::vector<DemoRecord> pool = load_dataset(pool_path);
  FineTuneConfig ft;
  ft.epochs = cfg.train_epochs;
  ft.adam = cfg.adam;
  const auto seeds =
      eval_seeds(derive_seed(cfg.seed, 5), cfg.ablation_trials);
  auto points = demo_ablation(env, cfg.model, pool, cfg.demo_counts, ft,
                              seeds, derive_seed(cfg.seed, 7),
                              cfg.skill_budget);
  json j = json::array();
  std::ostringstream csv;
  csv << "demos,trials,successes,success_rate\n";
  for (const AblationPoint& p : points) {
    j.push_back({{"demos", p.demo_count},
                 {"trials", p.report.trials},
                 {"successes", p.report.successes},
                 {"success_rate", p.report.success_rate}});
    csv << p.demo_count << "," << p.report.trials << ","
        << p.report.successes << "," << p.report.success_rate << "\n";
  }
  write_text_file((dir / "ablation.json").string(), j.dump(2) + "\n");
  write_text_file((dir / "ablation.csv").string(), csv.str());
  std::cout << json{{"run_dir", dir.string()},
                    {"points", static_cast<int>(points.size())}}
                   .dump()
            << "\n";
}

void run_probe_estimate(const Common& c, const std::string& checkpoint,
                        int episodes_flag, CLI::Option* episodes_opt) {
  RunConfig cfg = resolve(c);
  if (episodes_opt->count() > 0) cfg.estimation_episodes = episodes_flag;
  apply_checkpoint_model(cfg, checkpoint, c);
  const fs::path dir = make_run_dir(cfg);
  ContactEnv env(cfg.env);
  auto policy = make_policy(cfg.model, derive_seed(cfg.seed, 4));
  policy->load(checkpoint);
  EstimationCurve curve = state_estimation_curve(
      env, *policy, cfg.estimation_episodes, derive_seed(cfg.seed, 8));
  write_text_file((dir / "estimation.json").string(), curve.to_json_text());
  std::ostringstream csv;
  csv << "step,mse,count\n";
  for (std::size_t t = 0; t < curve.mean_sq_err.size(); ++t) {
    csv << (t + 1) << "," << curve.mean_sq_err[t] << "," << curve.counts[t]
        << "\n";
  }
  write_text_file((dir / "estimation.csv").string(), csv.str());
  std::cout << json{{"run_dir", dir.string()},
                    {"early_mse", curve.early_mse},
                    {"late_mse", curve.late_mse},
                    {"ratio", curve.ratio},
                    {"unsupervised_warning", curve.unsupervised_warning}}
                   .dump()
            << "\n";
}

int run_replay(const Common& c, const std::string& dataset, int index) {
  RunConfig cfg = resolve(c);
  const fs::path dir = make_run_dir(cfg);
  std::vector<DemoRecord> demos = load_dataset(dataset);
  if (index < 0 || index >= static_cast<int>(demos.size())) {
    throw std::invalid_argument("replay: --index out of range (dataset has " +
                                std::to_string(demos.size()) + " records)");
  }
  const DemoRecord& record = demos[index];
  ContactEnv env(cfg.env);
  WorldState state = env.reset_with_hidden(record.seed, record.hidden).first;
  int first_mismatch = -1;
  for (std::size_t t = 0; t < record.exploration.size(); ++t) {
    auto [ns, obs] = env.step(state, record.exploration[t].action);
    state = ns;
    const auto got = obs.flat();
    const auto want = record.exploration[t].obs.flat();
    for (int d = 0; d < kObsDim; ++d) {
      if (got[d] != want[d]) {
        first_mismatch = static_cast<int>(t);
        break;
      }
    }
    if (first_mismatch >= 0) break;
  }
  const bool match = first_mismatch < 0;
  json j{{"run_dir", dir.string()},
         {"index", index},
         {"steps", static_cast<int>(record.exploration.size())},
         {"match", match},
         {"first_mismatch", first_mismatch}};
  write_text_file((dir / "replay.json").string(), j.dump(2) + "\n");
  std::cout << j.dump() << "\n";
  return match ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tactile exploration and via-point skill learning toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  Common c_templates;
  int n_templates = 0;
  auto* sc_templates = app.add_subcommand(
      "collect-templates", "Write the probing routines as JSON");
  add_common(sc_templates, c_templates);
  sc_templates->add_option("--n", n_templates, "Extra jittered instances");
  sc_templates->callback(
      [&] { run_collect_templates(c_templates, n_templates); });

  Common c_demos;
  int n_demos = 100;
  auto* sc_demos = app.add_subcommand(
      "collect-demos", "Record expert probe+insert demonstrations");
  add_common(sc_demos, c_demos);
  sc_demos->add_option("--n", n_demos, "Demonstrations to keep");
  sc_demos->callback([&] { run_collect_demos(c_demos, n_demos); });

  Common c_train;
  std::string train_dataset;
  int train_epochs = 0;
  auto* sc_train =
      app.add_subcommand("train", "Fit a policy to a recorded dataset");
  add_common(sc_train, c_train);
  sc_train->add_option("--dataset", train_dataset, "Dataset JSONL")
      ->required();
  auto* train_epochs_opt =
      sc_train->add_option("--epochs", train_epochs, "Training epochs");
  sc_train->callback([&] {
    run_train(c_train, train_dataset, train_epochs, train_epochs_opt);
  });

  Common c_dagger;
  std::string dagger_dataset;
  std::string dagger_checkpoint;
  int dagger_budget = 0;
  auto* sc_dagger = app.add_subcommand(
      "dagger", "Incremental corrections until the stop rule fires");
  add_common(sc_dagger, c_dagger);
  sc_dagger->add_option("--dataset", dagger_dataset, "Initial dataset JSONL");
  sc_dagger->add_option("--checkpoint", dagger_checkpoint,
                        "Warm-start checkpoint");
  auto* dagger_budget_opt =
      sc_dagger->add_option("--budget", dagger_budget, "Episode cap");
  sc_dagger->callback([&] {
    run_dagger(c_dagger, dagger_dataset, dagger_checkpoint, dagger_budget,
               dagger_budget_opt);
  });

  Common c_eval;
  std::string eval_checkpoint;
  int eval_trials = 0;
  auto* sc_eval =
      app.add_subcommand("eval", "Score a checkpoint on fresh poses");
  add_common(sc_eval, c_eval);
  sc_eval->add_option("--checkpoint", eval_checkpoint, "Checkpoint file")
      ->required();
  auto* eval_trials_opt =
      sc_eval->add_option("--episodes,--trials", eval_trials, "Trial count");
  sc_eval->callback(
      [&] { run_eval(c_eval, eval_checkpoint, eval_trials, eval_trials_opt); });

  Common c_ablate;
  std::string ablate_pool;
  std::vector<int> ablate_counts;
  int ablate_trials = 0;
  auto* sc_ablate = app.add_subcommand(
      "ablate-demos", "Success rate versus demonstration count");
  add_common(sc_ablate, c_ablate);
  sc_ablate->add_option("--pool", ablate_pool, "Demonstration pool JSONL")
      ->required();
  auto* ablate_counts_opt =
      sc_ablate->add_option("--counts", ablate_counts, "Demo counts");
  auto* ablate_trials_opt =
      sc_ablate->add_option("--trials", ablate_trials, "Trials per count");
  sc_ablate->callback([&] {
    run_ablate(c_ablate, ablate_pool, ablate_counts, ablate_counts_opt,
               ablate_trials, ablate_trials_opt);
  });

  Common c_probe;
  std::string probe_checkpoint;
  int probe_episodes = 0;
  auto* sc_probe = app.add_subcommand(
      "probe-estimate", "Per-step hidden-pose estimation error");
  add_common(sc_probe, c_probe);
  sc_probe->add_option("--checkpoint", probe_checkpoint, "Checkpoint file")
      ->required();
  auto* probe_episodes_opt =
      sc_probe->add_option("--episodes", probe_episodes, "Probe episodes");
  sc_probe->callback([&] {
    run_probe_estimate(c_probe, probe_checkpoint, probe_episodes,
                       probe_episodes_opt);
  });

  Common c_replay;
  std::string replay_dataset;
  int replay_index = 0;
  auto* sc_replay = app.add_subcommand(
      "replay", "Re-execute a stored record and compare observations");
  add_common(sc_replay, c_replay);
  sc_replay->add_option("--dataset", replay_dataset, "Dataset JSONL")
      ->required();
  sc_replay->add_option("--index", replay_index, "Record index");
  sc_replay->callback(
      [&] { exit_code = run_replay(c_replay, replay_dataset, replay_index); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::string command = "unknown";
    for (const CLI::App* sc : app.get_subcommands()) {
      command = sc->get_name();
    }
    std::cerr << json{{"error", e.what()}, {"command", command}}.dump()
              << "\n";
    return 1;
  }
  return exit_code;
}
