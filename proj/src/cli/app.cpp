#include "phonemv/cli/app.hpp"

#include "phonemv/cli/model_store.hpp"
#include "phonemv/cli/run_manifest.hpp"
#include "phonemv/corpus/attributes.hpp"
#include "phonemv/corpus/synth.hpp"
#include "phonemv/errors.hpp"
#include "phonemv/eval/discrimination.hpp"
#include "phonemv/eval/verification.hpp"
#include "phonemv/gop/lattice_io.hpp"
#include "phonemv/net/bilstm.hpp"
#include "phonemv/net/grad_check.hpp"
#include "phonemv/train/run_config.hpp"
#include "phonemv/util/binary_io.hpp"
#include "phonemv/util/parallel.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

namespace phonemv::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kDataDirEnv = "PHONEMV_DATA_DIR";

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_output(OutputGuard& guard, const std::string& path, const std::string& text) {
  util::write_file_atomic(path, text);
  guard.add(path);
}

void finish(OutputGuard& guard, RunManifest manifest, const std::string& dir) {
  manifest.outputs = guard.files();
  write_output(guard, join(dir, kRunManifestJson), manifest.to_json());
  guard.commit();
}

corpus::AttributeInventory corpus_inventory(const corpus::SegmentSet& set) {
  const std::string path = join(set.root(), "inventory.json");
  return fs::exists(path) ? corpus::load_inventory(path) : corpus::default_inventory();
}

std::vector<Embedding> embed_all(const net::NetParams& net,
                                 const std::vector<FeatureMatrix>& inputs, int workers) {
  std::vector<Embedding> out(inputs.size());
  util::parallel_for(inputs.size(), workers,
                     [&](std::size_t i) { out[i] = net::embed(net, inputs[i]); });
  return out;
}

// ---- corpus ---------------------------------------------------------------

struct SynthArgs {
  std::string config;
  std::uint64_t seed = 1;
  std::string out;
};

int corpus_synth(const SynthArgs& a, std::ostream& out) {
  corpus::SynthConfig config;
  RunManifest manifest;
  manifest.command = "corpus synth";
  manifest.seed = a.seed;
  if (!a.config.empty()) {
    config = corpus::parse_synth_config(util::read_file(a.config));
    manifest.config_sha256 = file_digest(a.config);
  }
  OutputGuard guard;
  guard.make_dir(a.out);
  const auto summary = corpus::synth_corpus(config, a.seed, a.out);
  for (const char* name : {"manifest.jsonl", "inventory.json", "synth_config.json"}) {
    guard.add(join(a.out, name));
  }
  if (config.lattices) guard.add(join(a.out, "lattices.jsonl"));
  manifest.corpus_sha256 = corpus_digest(corpus::load_manifest(a.out));
  finish(guard, manifest, a.out);
  out << "wrote " << a.out << ": train " << summary.train << ", dev " << summary.dev
      << ", test " << summary.test << " (" << summary.mispronounced
      << " mispronounced)\n";
  return kExitOk;
}

int corpus_validate(const std::string& dir, std::ostream& out) {
  const auto set = corpus::load_manifest(dir);
  std::size_t views = 0;
  for (const auto& s : set.segments()) {
    for (const auto& [view, rel] : s.views) {
      (void)rel;
      set.load_view(s, view);
      ++views;
    }
  }
  const std::string inventory = join(set.root(), "inventory.json");
  if (fs::exists(inventory)) corpus::load_inventory(inventory);
  std::size_t lattices = 0;
  const std::string gop_items = join(set.root(), "lattices.jsonl");
  if (fs::exists(gop_items)) {
    for (const auto& item : gop::load_gop_items(gop_items)) {
      gop::read_lattice(item.lattice, item.states).validate();
      ++lattices;
    }
  }
  out << "ok: " << set.size() << " segments, " << views << " view files, " << lattices
      << " lattices\n";
  return kExitOk;
}

int corpus_stats(const std::string& dir, std::ostream& out) {
  const auto set = corpus::load_manifest(dir);
  std::map<std::string, std::map<PhoneId, std::size_t>> histogram;
  std::map<std::string, std::size_t> mispronounced;
  struct FrameStats {
    std::size_t count = 0;
    long long min = 0, max = 0, sum = 0;
    Eigen::Index dims = 0;
  };
  std::map<std::string, FrameStats> frames;
  for (const auto& s : set.segments()) {
    const std::string split = to_string(s.split);
    ++histogram[split][s.spoken];
    if (!s.correct()) ++mispronounced[split];
    for (const auto& [view, rel] : s.views) {
      (void)rel;
      const auto m = set.load_view(s, view);
      auto& f = frames[view];
      const long long n = m.rows();
      f.min = f.count == 0 ? n : std::min(f.min, n);
      f.max = f.count == 0 ? n : std::max(f.max, n);
      f.sum += n;
      f.dims = m.cols();
      ++f.count;
    }
  }
  out << "segments " << set.size() << "\n";
  for (const auto& [split, labels] : histogram) {
    out << "split " << split << " (mispronounced " << mispronounced[split] << ")\n";
    for (const auto& [label, n] : labels) out << "  " << label << " " << n << "\n";
  }
  for (const auto& [view, f] : frames) {
    char line[160];
    std::snprintf(line, sizeof line,
                  "view %s: files %zu, dims %ld, frames min %lld mean %.3f max %lld\n",
                  view.c_str(), f.count, static_cast<long>(f.dims), f.min,
                  static_cast<double>(f.sum) / static_cast<double>(f.count), f.max);
    out << line;
  }
  return kExitOk;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  std::string corpus;
  std::string config;
  std::string out;
  std::string mode;
  std::string view;
  std::string objective;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  bool quiet = false;
};

int train_cmd(const TrainArgs& a, std::ostream& err) {
  auto config = a.config.empty() ? train::RunConfig{} : train::load_run_config(a.config);
  if (!a.mode.empty()) config.mode = train::parse_mode(a.mode);
  if (!a.view.empty()) config.view = a.view;
  if (!a.objective.empty()) config.objective = losses::parse_objective(a.objective);
  if (a.seed) config.schedule.seed = *a.seed;
  config.validate();

  const auto set = corpus::load_manifest(a.corpus);
  RunManifest manifest;
  manifest.command = std::string("train --mode ") + train::to_string(config.mode);
  if (config.mode == train::TrainMode::kMulti) {
    manifest.command += " --view " + config.view + " --objective " +
                        losses::to_string(config.objective);
  }
  manifest.config_sha256 = a.config.empty() ? "" : file_digest(a.config);
  manifest.corpus_sha256 = corpus_digest(set);
  manifest.seed = config.schedule.seed;

  const bool multi = config.mode == train::TrainMode::kMulti;
  const auto data = train::prepare_corpus(set, config.pipeline,
                                          multi ? std::optional(config.view) : std::nullopt);
  train::TrainOptions options;
  options.workers = a.workers;
  options.on_epoch = [&](const train::HistoryEntry& e) {
    if (a.quiet || !e.dev_ap) return;
    char line[96];
    std::snprintf(line, sizeof line, "epoch %d loss %.6f dev_ap %.4f\n", e.epoch,
                  e.mean_loss, *e.dev_ap);
    err << line << std::flush;
  };
  const auto result =
      multi ? train::train_multi_view(data, config.objective, config.net, config.schedule,
                                      config.optimizer, options)
            : train::train_single_view(data, config.net, config.schedule, config.optimizer,
                                       options);
  OutputGuard guard;
  guard.make_dir(a.out);
  // Register before writing so a failure part way still removes them.
  try {
    guard.add(save_model(a.out, config, data, result));
  } catch (...) {
    for (const char* name : {"model.phnm", "f.phnm", "g.phnm", kHistoryCsv, kModelJson}) {
      guard.add(join(a.out, name));
    }
    throw;
  }
  finish(guard, manifest, a.out);
  if (!a.quiet && result.best_ap) {
    err << "best dev_ap " << format_double(*result.best_ap) << " at epoch "
        << result.best_epoch << "\n";
  }
  return kExitOk;
}

// ---- score ----------------------------------------------------------------

struct GopArgs {
  std::string lattices;
  double threshold = gop::kDefaultGopThreshold;
  std::string out;
};

int score_gop(const GopArgs& a, std::ostream& out) {
  const std::string path =
      fs::is_directory(a.lattices) ? join(a.lattices, "lattices.jsonl") : a.lattices;
  const auto items = gop::load_gop_items(path);
  std::string csv = "id,canonical,spoken,log_posterior,gop,best_competitor,decision\n";
  std::vector<eval::VerificationOutcome> outcomes;
  bool truth = !items.empty();
  for (const auto& item : items) {
    const auto lattice = gop::read_lattice(item.lattice, item.states);
    lattice.validate();
    const auto pool = lattice.phones();
    const auto r = gop::gop_score(lattice, {item.canonical, item.start, item.end}, pool);
    const Decision d = gop::gop_verify(r, a.threshold);
    csv += item.id + "," + item.canonical + "," + item.spoken.value_or("") + "," +
           format_double(r.log_posterior) + "," + format_double(r.gop) + "," +
           r.best_competitor + "," + to_string(d) + "\n";
    if (!item.spoken) {
      truth = false;
      continue;
    }
    eval::VerificationOutcome o;
    o.segment = item.id;
    o.canonical = item.canonical;
    o.distance = -r.gop;
    o.decision = d;
    o.truth_correct = *item.spoken == item.canonical;
    outcomes.push_back(o);
  }
  if (a.out.empty()) {
    out << csv;
    return kExitOk;
  }
  OutputGuard guard;
  guard.make_dir(a.out);
  write_output(guard, join(a.out, "gop.csv"), csv);
  if (truth) {
    const auto report = eval::compute_metrics(outcomes);
    write_output(guard, join(a.out, "metrics.json"),
                 eval::metrics_json(report, a.threshold, "gop", "").dump(2) + "\n");
  }
  RunManifest manifest;
  manifest.command = "score gop";
  manifest.corpus_sha256 = file_digest(path);
  finish(guard, manifest, a.out);
  return kExitOk;
}

struct EmbedArgs {
  std::string model;
  std::string corpus;
  std::string split = "test";
  std::string template_split = "train";
  double threshold = eval::kDefaultVerifyThreshold;
  std::string strategy = "centroid";
  std::string out;
  int workers = 1;
};

eval::References build_references(const Model& model, const corpus::SegmentSet& set,
                                  const EmbedArgs& a, eval::Strategy strategy) {
  if (strategy == eval::Strategy::kCentroid) {
    const auto native = set.filter(parse_split(a.template_split));
    std::vector<FeatureMatrix> inputs;
    std::vector<PhoneId> labels;
    for (const auto& s : native.segments()) {
      if (!s.correct()) continue;
      inputs.push_back(model.acoustic.apply(native.load_view(s, corpus::kAcousticView)));
      labels.push_back(s.spoken);
    }
    if (inputs.empty()) {
      throw ValidationError("no native segments in split '" + a.template_split + "'");
    }
    const auto emb = embed_all(model.f, inputs, a.workers);
    std::map<PhoneId, std::vector<Embedding>> groups;
    for (std::size_t i = 0; i < emb.size(); ++i) groups[labels[i]].push_back(emb[i]);
    return eval::references_from(eval::build_templates(groups));
  }
  if (!model.g || !model.multi || model.multi->view() != corpus::kAttributeView) {
    throw ValidationError("crossview strategy needs a multi-view attribute model");
  }
  const auto inventory = corpus_inventory(set);
  eval::References refs;
  for (const auto& s : set.segments()) {
    if (refs.contains(s.canonical)) continue;
    const auto pattern = corpus::encode_attribute_pattern(s.canonical, inventory);
    refs.emplace(s.canonical, net::embed(*model.g, model.multi->apply(pattern)));
  }
  return refs;
}

int score_embed(const EmbedArgs& a, std::ostream& out) {
  const auto model = load_model(a.model);
  const auto set = corpus::load_manifest(a.corpus);
  const auto strategy = eval::parse_strategy(a.strategy);
  const auto refs = build_references(model, set, a, strategy);
  const auto target = set.filter(parse_split(a.split));
  if (target.size() == 0) throw ValidationError("split '" + a.split + "' is empty");
  std::vector<FeatureMatrix> inputs;
  for (const auto& s : target.segments()) {
    inputs.push_back(model.acoustic.apply(target.load_view(s, corpus::kAcousticView)));
  }
  const auto emb = embed_all(model.f, inputs, a.workers);
  std::vector<eval::VerificationOutcome> outcomes;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const auto& s = target.at(i);
    outcomes.push_back(
        eval::verify_segment(s.id, emb[i], s.canonical, s.correct(), refs, a.threshold));
  }
  const auto report = eval::compute_metrics(outcomes);
  const auto metrics = eval::metrics_json(report, a.threshold, a.strategy,
                                          file_digest(primary_checkpoint(a.model)));
  OutputGuard guard;
  guard.make_dir(a.out);
  write_output(guard, join(a.out, "outcomes.csv"), eval::outcomes_csv(outcomes));
  write_output(guard, join(a.out, "metrics.json"), metrics.dump(2) + "\n");
  RunManifest manifest;
  manifest.command = "score embed --strategy " + a.strategy;
  manifest.config_sha256 = file_digest(join(a.model, kModelJson));
  manifest.corpus_sha256 = corpus_digest(set);
  finish(guard, manifest, a.out);
  out << metrics.dump(2) << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string outcomes;
  double threshold = eval::kDefaultVerifyThreshold;
  std::string model;
  std::string out;
  bool pr_curve = false;
};

std::vector<eval::VerificationOutcome> parse_outcomes(const std::string& path) {
  std::istringstream in(util::read_file(path));
  std::string line;
  std::getline(in, line);
  if (line != "segment,canonical,distance,decision,truth_correct") {
    throw FormatError(path + ": not an outcomes CSV");
  }
  std::vector<eval::VerificationOutcome> out;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
    if (fields.size() != 5 || (fields[4] != "0" && fields[4] != "1")) {
      throw ParseError(path + ": malformed outcome row", number);
    }
    eval::VerificationOutcome o;
    o.segment = fields[0];
    o.canonical = fields[1];
    try {
      std::size_t used = 0;
      o.distance = std::stod(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(path + ": bad distance '" + fields[2] + "'", number);
    }
    o.truth_correct = fields[4] == "1";
    out.push_back(o);
  }
  return out;
}

int score_eval(const EvalArgs& a, std::ostream& out) {
  auto outcomes = parse_outcomes(a.outcomes);
  for (auto& o : outcomes) o.decision = eval::decide(o.distance, a.threshold);
  const auto report = eval::compute_metrics(outcomes);
  const std::string digest = a.model.empty() ? "" : file_digest(primary_checkpoint(a.model));
  const auto metrics = eval::metrics_json(report, a.threshold, "outcomes", digest);
  OutputGuard guard;
  guard.make_dir(a.out);
  write_output(guard, join(a.out, "metrics.json"), metrics.dump(2) + "\n");
  if (a.pr_curve) {
    // Correct pronunciations are the positives, ranked by distance.
    std::vector<eval::ScoredPair> pairs;
    for (const auto& o : outcomes) {
      pairs.push_back({o.segment, o.canonical, o.distance, o.truth_correct});
    }
    write_output(guard, join(a.out, "pr_curve.csv"),
                 eval::pr_curve_csv(eval::pr_curve(pairs)));
  }
  RunManifest manifest;
  manifest.command = "score eval";
  manifest.corpus_sha256 = file_digest(a.outcomes);
  finish(guard, manifest, a.out);
  out << metrics.dump(2) << "\n";
  return kExitOk;
}

struct ApArgs {
  std::string model;
  std::string corpus;
  std::string split = "dev";
  std::size_t max_pairs = eval::kDefaultMaxPairs;
  std::uint64_t seed = 1;
  int workers = 1;
};

int score_ap(const ApArgs& a, std::ostream& out) {
  const auto model = load_model(a.model);
  const auto set = corpus::load_manifest(a.corpus).filter(parse_split(a.split));
  std::vector<FeatureMatrix> inputs;
  for (const auto& s : set.segments()) {
    inputs.push_back(model.acoustic.apply(set.load_view(s, corpus::kAcousticView)));
  }
  const auto emb = embed_all(model.f, inputs, a.workers);
  const auto pairs = eval::discrimination_pairs(set, emb, a.max_pairs, a.seed);
  out << format_double(eval::average_precision(pairs)) << "\n";
  return kExitOk;
}

struct GradArgs {
  double tolerance = 1e-4;
  std::uint64_t seed = 1;
};

int gradcheck_cmd(const GradArgs& a, std::ostream& out) {
  net::GradCheckOptions options;
  options.tolerance = a.tolerance;
  options.seed = a.seed;
  const auto report = net::grad_check(options);
  out << report.to_text();
  return report.passed() ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-view phone embeddings and mispronunciation verification", "phonemv"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  std::function<int()> action;

  const std::vector<std::string> splits{"train", "dev", "test"};
  const std::vector<std::string> views{"attribute", "bottleneck"};
  const std::vector<std::string> objectives{"obj0", "obj1", "both"};

  auto* corpus_cmd = app.add_subcommand("corpus", "Synthesize, validate or describe a corpus");
  corpus_cmd->require_subcommand(1);
  SynthArgs synth;
  auto* synth_cmd = corpus_cmd->add_subcommand("synth", "Write a seeded synthetic corpus");
  synth_cmd->add_option("--config", synth.config, "Synthesis config JSON")->check(CLI::ExistingFile);
  synth_cmd->add_option("--seed", synth.seed, "Corpus seed");
  synth_cmd->add_option("--out", synth.out, "Output directory")->envname(kDataDirEnv)->required();
  synth_cmd->callback([&] { action = [&] { return corpus_synth(synth, out); }; });

  std::string corpus_dir;
  auto* validate_cmd = corpus_cmd->add_subcommand("validate", "Check manifest and feature files");
  validate_cmd->add_option("dir", corpus_dir, "Corpus directory or manifest")
      ->envname(kDataDirEnv)->required();
  validate_cmd->callback([&] { action = [&] { return corpus_validate(corpus_dir, out); }; });
  auto* stats_cmd = corpus_cmd->add_subcommand("stats", "Label histogram and frame statistics");
  stats_cmd->add_option("dir", corpus_dir, "Corpus directory or manifest")
      ->envname(kDataDirEnv)->required();
  stats_cmd->callback([&] { action = [&] { return corpus_stats(corpus_dir, out); }; });

  TrainArgs tr;
  auto* train_cmd_ = app.add_subcommand("train", "Train a single-view or multi-view model");
  train_cmd_->add_option("--corpus", tr.corpus, "Corpus directory")->envname(kDataDirEnv)->required();
  train_cmd_->add_option("--config", tr.config, "Run config JSON")->check(CLI::ExistingFile);
  train_cmd_->add_option("--out", tr.out, "Model directory")->required();
  train_cmd_->add_option("--mode", tr.mode, "single or multi")
      ->check(CLI::IsMember({"single", "multi"}));
  train_cmd_->add_option("--view", tr.view, "Multi-source view")->check(CLI::IsMember(views));
  train_cmd_->add_option("--objective", tr.objective, "obj0, obj1 or both")
      ->check(CLI::IsMember(objectives));
  train_cmd_->add_option("--seed", tr.seed, "Override schedule.seed");
  train_cmd_->add_option("--workers", tr.workers, "Threads")->check(CLI::PositiveNumber);
  train_cmd_->add_flag("--quiet", tr.quiet, "No progress output");
  train_cmd_->callback([&] { action = [&] { return train_cmd(tr, err); }; });

  auto* score_cmd = app.add_subcommand("score", "GOP scoring, verification and evaluation");
  score_cmd->require_subcommand(1);
  GopArgs gp;
  auto* gop_cmd = score_cmd->add_subcommand("gop", "GOP decisions from posterior lattices");
  gop_cmd->add_option("--lattices", gp.lattices, "lattices.jsonl or a corpus directory")
      ->envname(kDataDirEnv)->required();
  gop_cmd->add_option("--threshold", gp.threshold, "Accept iff GOP >= -threshold")
      ->check(CLI::NonNegativeNumber);
  gop_cmd->add_option("--out", gp.out, "Output directory (CSV to stdout when omitted)");
  gop_cmd->callback([&] { action = [&] { return score_gop(gp, out); }; });

  EmbedArgs em;
  auto* embed_cmd = score_cmd->add_subcommand("embed", "Embedding-distance verification");
  embed_cmd->add_option("--model", em.model, "Model directory")->required();
  embed_cmd->add_option("--corpus", em.corpus, "Corpus directory")->envname(kDataDirEnv)->required();
  embed_cmd->add_option("--split", em.split, "Split to verify")->check(CLI::IsMember(splits));
  embed_cmd->add_option("--template-split", em.template_split, "Split for centroid templates")
      ->check(CLI::IsMember(splits));
  embed_cmd->add_option("--threshold", em.threshold, "Accept iff distance < threshold");
  embed_cmd->add_option("--strategy", em.strategy, "centroid or crossview")
      ->check(CLI::IsMember({"centroid", "crossview"}));
  embed_cmd->add_option("--out", em.out, "Output directory")->required();
  embed_cmd->add_option("--workers", em.workers, "Threads")->check(CLI::PositiveNumber);
  embed_cmd->callback([&] { action = [&] { return score_embed(em, out); }; });

  EvalArgs ev;
  auto* eval_cmd = score_cmd->add_subcommand("eval", "Metrics from an outcomes CSV");
  eval_cmd->add_option("--outcomes", ev.outcomes, "outcomes.csv from score embed")
      ->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--threshold", ev.threshold, "Accept iff distance < threshold");
  eval_cmd->add_option("--model", ev.model, "Model directory, for the checkpoint digest");
  eval_cmd->add_option("--out", ev.out, "Output directory")->required();
  eval_cmd->add_flag("--pr-curve", ev.pr_curve, "Also write pr_curve.csv");
  eval_cmd->callback([&] { action = [&] { return score_eval(ev, out); }; });

  ApArgs ap;
  auto* ap_cmd = score_cmd->add_subcommand("ap", "Phone discrimination AP");
  ap_cmd->add_option("--model", ap.model, "Model directory")->required();
  ap_cmd->add_option("--corpus", ap.corpus, "Corpus directory")->envname(kDataDirEnv)->required();
  ap_cmd->add_option("--split", ap.split, "Split to score")->check(CLI::IsMember(splits));
  ap_cmd->add_option("--max-pairs", ap.max_pairs, "Pair sample size")->check(CLI::PositiveNumber);
  ap_cmd->add_option("--seed", ap.seed, "Pair sampling seed");
  ap_cmd->add_option("--workers", ap.workers, "Threads")->check(CLI::PositiveNumber);
  ap_cmd->callback([&] { action = [&] { return score_ap(ap, out); }; });

  GradArgs gc;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference gradient check");
  grad_cmd->add_option("--tolerance", gc.tolerance, "Worst relative error allowed")
      ->check(CLI::PositiveNumber);
  grad_cmd->add_option("--seed", gc.seed, "Check point seed");
  grad_cmd->callback([&] { action = [&] { return gradcheck_cmd(gc, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    return action();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace phonemv::cli
