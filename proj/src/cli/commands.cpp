#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "cli_internal.hpp"
#include "congae/anomaly_eval.hpp"
#include "congae/checkpoint.hpp"
#include "congae/cli.hpp"
#include "congae/dataset_io.hpp"
#include "congae/error.hpp"
#include "congae/synthetic.hpp"
#include "congae/training.hpp"
#include "../text.hpp"

namespace congae::cli {
namespace {

std::string fmt(double v) { return text::format_double(v); }

std::ifstream open_input(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot open '" + p.string() + "'");
  return in;
}

// ---------------------------------------------------------------- ingest

struct IngestOptions {
  std::string records, zones, out, test_out, split_at;
  std::size_t top_zones = 0;
  RecordSchema schema;
  std::string delimiter = ",";
};

void print_summary(std::ostream& out, const std::string& label, const Dataset& ds) {
  const double n = static_cast<double>(ds.node_count());
  const double t = static_cast<double>(ds.snapshots.size());
  const double edges = static_cast<double>(ds.edge_count());
  const double avg = t > 0 ? edges / t : 0.0;
  const double missing = (t > 0 && n > 1) ? 1.0 - edges / (t * n * (n - 1)) : 0.0;
  out << label << ": zones=" << ds.node_count() << " snapshots=" << ds.snapshots.size() << std::fixed
      << std::setprecision(1) << " avg_edges_per_graph=" << avg << std::setprecision(3)
      << " missing_rate=" << missing << std::defaultfloat << '\n';
}

int cmd_ingest(const IngestOptions& o, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  if (o.delimiter.size() != 1) throw ConfigError("--delimiter must be a single character");
  RecordSchema schema = o.schema;
  schema.delimiter = o.delimiter[0];
  if (!o.test_out.empty() && o.split_at.empty()) throw ConfigError("--test-out requires --split-at");

  auto rin = open_input(o.records);
  RecordParse parsed;
  try {
    parsed = parse_od_records(rin, schema);
  } catch (const DataError& e) {
    throw DataError(o.records + ": " + e.what());
  }
  for (const auto& e : parsed.errors) err << "warning: " << o.records << ": " << e.what() << '\n';
  auto zin = open_input(o.zones);
  std::vector<ZoneFeatures> all_zones;
  try {
    all_zones = read_zone_features(zin, schema.delimiter);
  } catch (const DataError& e) {
    throw DataError(o.zones + ": " + e.what());
  }

  std::vector<ODRecord> train_records, test_records;
  if (o.split_at.empty()) {
    train_records = std::move(parsed.records);
  } else {
    const auto cut = Timestamp::parse(o.split_at);
    for (auto& r : parsed.records) (r.timestamp < cut ? train_records : test_records).push_back(std::move(r));
  }
  if (train_records.empty()) throw DataError("no records before the split point");

  std::vector<std::string> ids;
  if (o.top_zones > 0) {
    ids = select_top_zones(train_records, o.top_zones);
  } else {
    for (const auto& z : all_zones) ids.push_back(z.zone_id);
    std::sort(ids.begin(), ids.end());
  }
  auto zones = prepare_zones(all_zones, ids);
  const std::set<std::string> keep(ids.begin(), ids.end());
  std::vector<ODRecord> fit_records;
  for (const auto& r : train_records)
    if (r.origin != r.dest && keep.count(r.origin) && keep.count(r.dest)) fit_records.push_back(r);
  if (fit_records.empty()) throw DataError("no records between the selected zones");
  const auto scaler = fit_weight_scaler(fit_records);

  const auto train_ds = build_snapshots(fit_records, zones, scaler);
  train_ds.validate();
  std::optional<Dataset> test_ds;
  if (!o.test_out.empty()) {
    test_ds = build_snapshots(test_records, zones, scaler);
    test_ds->validate();
  }

  save_dataset(o.out, train_ds);
  if (test_ds) save_dataset(o.test_out, *test_ds);
  print_summary(out, o.split_at.empty() ? "dataset" : "train", train_ds);
  if (test_ds) print_summary(out, "test", *test_ds);

  RunManifest m("ingest");
  std::string args;
  for (const auto& a : argv) args += (args.empty() ? "" : " ") + a;
  m.set("argv", args);
  m.add_input("records", o.records);
  m.add_input("zones", o.zones);
  m.set("split_at", o.split_at);
  m.set("top_zones", std::to_string(o.top_zones));
  m.set("scaler.inv_min", fmt(scaler.inv_min));
  m.set("scaler.inv_max", fmt(scaler.inv_max));
  m.add_output("dataset", o.out);
  if (test_ds) m.add_output("test_dataset", o.test_out);
  m.write_for(o.out);
  return 0;
}

// ---------------------------------------------------------------- model loading

ConGaeModel best_model_of(const TrainingState& s) {
  ConGaeModel m = s.model;
  m.params().assign_values(s.best_params);
  return m;
}

void check_model_matches(const ConGaeModel& model, const Dataset& ds, const std::string& model_path) {
  if (!(model.node_features() == ds.node_features()))
    throw DataError("dataset zones do not match the zones model '" + model_path + "' was trained on");
}

// ---------------------------------------------------------------- train

struct TrainOptions {
  std::string data, out, report, config_file, profile, variant, resume;
  std::vector<std::string> sets;
  std::optional<std::size_t> epochs, stop_after, threads;
  std::optional<std::uint64_t> seed;
};

int cmd_train(const TrainOptions& o, std::ostream& out) {
  const auto file = load_dataset(o.data);
  const Dataset& ds = file.dataset;

  TrainingState state;
  std::optional<Trainer> trainer;
  if (!o.resume.empty()) {
    if (!o.config_file.empty() || !o.profile.empty() || !o.variant.empty() || !o.sets.empty() || o.epochs || o.seed)
      throw ConfigError("--resume continues with the checkpoint's configuration; only --threads and --stop-after apply");
    state = load_checkpoint(o.resume);
    if (o.threads) state.config.threads = *o.threads;
    check_model_matches(state.model, ds, o.resume);
    trainer.emplace(ds, std::move(state));
  } else {
    ConfigSources src;
    src.profile = o.profile;
    src.file = o.config_file;
    if (!o.variant.empty()) src.flags.emplace_back("variant", o.variant);
    for (const auto& s : o.sets) src.flags.push_back(split_assignment(s));
    if (o.epochs) src.flags.emplace_back("epochs", std::to_string(*o.epochs));
    if (o.seed) src.flags.emplace_back("seed", std::to_string(*o.seed));
    if (o.threads) src.flags.emplace_back("threads", std::to_string(*o.threads));
    trainer.emplace(ds, resolve_train_config(src));
  }

  trainer->run(o.stop_after.value_or(std::numeric_limits<std::size_t>::max()));
  const auto& st = trainer->state();
  const std::string report = o.report.empty() ? o.out + ".report.csv" : o.report;
  save_checkpoint(o.out, st);
  write_file_atomic(report, st.report.to_csv());

  out << "epochs=" << st.epochs_done << " finished=" << (st.finished ? "true" : "false");
  if (st.report.best_epoch) out << " best_epoch=" << *st.report.best_epoch << " best_val_loss=" << st.best_val_loss;
  if (!st.report.stop_reason.empty()) out << " stop=" << st.report.stop_reason;
  out << '\n';

  RunManifest m("train");
  m.add_input("dataset", o.data);
  if (!o.resume.empty()) m.add_input("resume", o.resume);
  if (!o.config_file.empty()) m.add_input("config", o.config_file);
  m.set("profile", o.profile);
  m.set("seed", std::to_string(st.config.seed));
  m.add_config(st.config);
  m.set("epochs_done", std::to_string(st.epochs_done));
  m.add_output("checkpoint", o.out);
  m.add_output("report", report);
  m.write_for(o.out);
  return 0;
}

// ---------------------------------------------------------------- score

struct ScoreOptions {
  std::string data, model, out;
  std::size_t threads = 1;
};

int cmd_score(const ScoreOptions& o, std::ostream& out, std::ostream& err) {
  const auto file = load_dataset(o.data);
  const auto state = load_checkpoint(o.model);
  const auto model = best_model_of(state);
  check_model_matches(model, file.dataset, o.model);
  const auto scores = anomaly_scores(file.dataset, model, o.threads);

  std::ostringstream csv;
  csv << "timestamp,score,label\n";
  std::size_t skipped = 0;
  double sum = 0.0;
  for (std::size_t t = 0; t < scores.size(); ++t) {
    const auto& s = file.dataset.snapshots[t];
    if (!scores[t]) {
      err << "warning: snapshot " << s.timestamp.to_string() << " has no edges; skipped\n";
      ++skipped;
      continue;
    }
    sum += *scores[t];
    csv << s.timestamp.to_string() << ',' << fmt(*scores[t]) << ',';
    if (file.has_labels) csv << file.labels[t];
    csv << '\n';
  }
  write_file_atomic(o.out, csv.str());
  const std::size_t scored = scores.size() - skipped;
  out << "scored=" << scored << " skipped=" << skipped
      << " mean_score=" << (scored ? sum / static_cast<double>(scored) : 0.0) << '\n';

  RunManifest m("score");
  m.add_input("dataset", o.data);
  m.add_input("model", o.model);
  m.add_output("scores", o.out);
  m.write_for(o.out);
  return 0;
}

// ---------------------------------------------------------------- resample / inject

struct ResampleOptions {
  std::string data, out;
  std::uint64_t seed = 0;
};

int cmd_resample(const ResampleOptions& o, std::ostream& out) {
  const auto file = load_dataset(o.data);
  const auto clean = synth_clean_testset(file.dataset, o.seed);
  save_dataset(o.out, clean);
  print_summary(out, "clean", clean);
  RunManifest m("resample");
  m.add_input("dataset", o.data);
  m.set("seed", std::to_string(o.seed));
  m.add_output("dataset", o.out);
  m.write_for(o.out);
  return 0;
}

struct InjectOptions {
  std::string data, out, type;
  InjectionConfig cfg;
};

int cmd_inject(const InjectOptions& o, std::ostream& out) {
  const auto type = anomaly_type_from_string(o.type);
  const auto file = load_dataset(o.data);
  const auto labeled = inject(type, file.dataset, o.cfg);
  labeled.validate();
  save_dataset(o.out, labeled.dataset, &labeled.labels);
  const auto positives = std::count(labeled.labels.begin(), labeled.labels.end(), 1);
  out << "slices=" << labeled.labels.size() << " anomalous=" << positives << '\n';

  RunManifest m("inject");
  m.add_input("dataset", o.data);
  m.set("inject.type", o.type);
  m.set("inject.alpha", fmt(o.cfg.alpha));
  m.set("inject.beta", fmt(o.cfg.beta));
  m.set("inject.gamma", fmt(o.cfg.gamma));
  m.set("seed", std::to_string(o.cfg.seed));
  m.add_output("dataset", o.out);
  m.write_for(o.out);
  return 0;
}

// ---------------------------------------------------------------- eval

struct EvalOptions {
  std::string data, out, ha_train;
  std::vector<std::string> models, names;
  std::size_t threads = 1;
};

std::map<std::string, std::string> sibling_manifest(const fs::path& data) {
  std::map<std::string, std::string> out;
  const auto p = manifest_path(data);
  if (fs::exists(p))
    for (auto& [k, v] : read_key_values(p)) out[k] = v;
  return out;
}

// Empty when the dataset was not produced by `inject`.
std::string manifest_number(const std::map<std::string, std::string>& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) return "";
  const auto v = text::parse_double(it->second);
  if (!v) throw DataError("manifest value for '" + key + "' is not a number");
  return fmt(*v);
}

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  if (o.models.empty() && o.ha_train.empty()) throw ConfigError("eval needs at least one --model or --ha-train");
  if (!o.names.empty() && o.names.size() != o.models.size())
    throw ConfigError("--name must be given once per --model");
  const auto file = load_dataset(o.data);
  if (!file.has_labels) throw DataError("'" + o.data + "' carries no labels; run inject first");

  const auto info = sibling_manifest(o.data);
  const auto type_it = info.find("inject.type");
  const std::string type = type_it == info.end() ? "unknown" : type_it->second;
  const auto seed_it = info.find("seed");
  const std::string seed = seed_it == info.end() ? "" : seed_it->second;

  std::ostringstream csv;
  csv << "anomaly_type,alpha,beta,gamma,method,auc_mean,auc_std,repeats,seed\n";
  auto row = [&](const std::string& method, double auc) {
    csv << type << ',' << manifest_number(info, "inject.alpha") << ',' << manifest_number(info, "inject.beta")
        << ',' << manifest_number(info, "inject.gamma") << ',' << method << ',' << fmt(auc) << ",0,1," << seed << '\n';
    out << method << " auc=" << auc << '\n';
  };

  for (std::size_t i = 0; i < o.models.size(); ++i) {
    const auto state = load_checkpoint(o.models[i]);
    const auto model = best_model_of(state);
    check_model_matches(model, file.dataset, o.models[i]);
    const auto scores = anomaly_scores(file.dataset, model, o.threads);
    std::vector<double> s;
    std::vector<int> l;
    for (std::size_t t = 0; t < scores.size(); ++t)
      if (scores[t]) {
        s.push_back(*scores[t]);
        l.push_back(file.labels[t]);
      }
    const std::string name = o.names.empty() ? state.config.variant.name() : o.names[i];
    row(name, roc_auc(s, l));
  }
  if (!o.ha_train.empty()) {
    const auto train_file = load_dataset(o.ha_train);
    const auto stats = HourOfWeekStats::fit(train_file.dataset);
    const auto ha = ha_scores(file.dataset, stats);
    row("ha", roc_auc(ha.scores, file.labels));
  }
  write_file_atomic(o.out, csv.str());

  RunManifest m("eval");
  m.add_input("dataset", o.data);
  for (std::size_t i = 0; i < o.models.size(); ++i) m.add_input("model." + std::to_string(i), o.models[i]);
  if (!o.ha_train.empty()) m.add_input("ha_train", o.ha_train);
  m.add_output("results", o.out);
  m.write_for(o.out);
  return 0;
}

// ---------------------------------------------------------------- report

struct ReportOptions {
  std::string manifest, out;
  std::optional<std::size_t> threads;
};

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

ExperimentCell parse_cell(const std::string& text) {
  const auto parts = split_list(text, ':');
  if (parts.size() != 4) throw ConfigError("grid cell '" + text + "' must be type:alpha:beta:gamma");
  ExperimentCell c;
  c.type = anomaly_type_from_string(parts[0]);
  try {
    c.alpha = std::stod(parts[1]);
    c.beta = std::stod(parts[2]);
    c.gamma = std::stod(parts[3]);
  } catch (const std::exception&) {
    throw ConfigError("grid cell '" + text + "' has a non-numeric field");
  }
  return c;
}

int cmd_report(const ReportOptions& o, std::ostream& out) {
  const fs::path base = fs::path(o.manifest).parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

  std::string train_path, test_path, variants = "congae", cells, profile, config_file;
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
  bool with_ha = true;
  ConfigSources src;
  for (const auto& [k, v] : read_key_values(o.manifest)) {
    if (k == "train") train_path = resolve(v).string();
    else if (k == "test") test_path = resolve(v).string();
    else if (k == "variants") variants = v;
    else if (k == "grid") cells = v;
    else if (k == "repeats") repeats = static_cast<std::size_t>(std::stoul(v));
    else if (k == "experiment_seed") seed = std::stoull(v);
    else if (k == "ha") with_ha = v == "true" || v == "1";
    else if (k == "profile") src.profile = v;
    else if (k == "config") src.file = resolve(v).string();
    else src.flags.emplace_back(k, v);
  }
  if (train_path.empty() || test_path.empty()) throw ConfigError("experiment manifest needs train= and test=");
  if (o.threads) src.flags.emplace_back("threads", std::to_string(*o.threads));
  const TrainConfig cfg = resolve_train_config(src);
  std::vector<ExperimentCell> grid;
  for (const auto& c : split_list(cells, ';')) grid.push_back(parse_cell(c));
  if (grid.empty()) throw ConfigError("experiment manifest needs grid=type:alpha:beta:gamma[;...]");

  const auto train_ds = load_dataset(train_path).dataset;
  const auto raw_test = load_dataset(test_path).dataset;
  std::vector<NamedModel> models;
  for (const auto& v : split_list(variants, ',')) {
    TrainConfig c = cfg;
    c.variant = ModelVariant::named(v);
    auto result = train(train_ds, c);
    out << v << ": epochs=" << result.report.epochs.size() << " stop=" << result.report.stop_reason << '\n';
    models.push_back({v, std::move(result.model)});
  }
  const auto stats = HourOfWeekStats::fit(train_ds);
  EvaluationInputs in;
  in.models = models;
  in.ha_stats = with_ha ? &stats : nullptr;
  in.raw_test = &raw_test;
  in.repeats = repeats;
  in.seed = seed;
  in.threads = cfg.threads;
  const auto table = evaluate_grid(in, grid);
  write_file_atomic(o.out, table.to_csv());
  out << table.to_csv();

  RunManifest m("report");
  m.add_input("experiment", o.manifest);
  m.add_input("train", train_path);
  m.add_input("test", test_path);
  m.set("variants", variants);
  m.set("grid", cells);
  m.set("repeats", std::to_string(repeats));
  m.set("seed", std::to_string(seed));
  m.add_config(cfg);
  m.add_output("results", o.out);
  m.write_for(o.out);
  return 0;
}

// ---------------------------------------------------------------- synth

struct SynthOptions {
  std::string records, zones;
  SyntheticCityConfig cfg;
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  const auto city = generate_city(o.cfg);
  std::ostringstream r, z;
  write_records_csv(r, city.records);
  write_zones_csv(z, city.zones);
  write_file_atomic(o.records, r.str());
  write_file_atomic(o.zones, z.str());
  out << "zones=" << city.zones.size() << " records=" << city.records.size() << '\n';
  RunManifest m("synth");
  m.set("seed", std::to_string(o.cfg.seed));
  m.set("weeks", std::to_string(o.cfg.weeks));
  m.set("grid", std::to_string(o.cfg.zones_x) + "x" + std::to_string(o.cfg.zones_y));
  m.set("noise_cv", fmt(o.cfg.noise_cv));
  m.add_output("records", o.records);
  m.add_output("zones", o.zones);
  m.write_for(o.records);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contextual graph autoencoder for OD travel-time anomaly detection", "congae"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  IngestOptions ing;
  auto* c_ingest = app.add_subcommand("ingest", "Build a snapshot dataset from OD records and zone boxes");
  c_ingest->add_option("--records", ing.records, "OD record CSV")->required();
  c_ingest->add_option("--zones", ing.zones, "Zone bounding-box CSV")->required();
  c_ingest->add_option("--out", ing.out, "Dataset output (train part when splitting)")->required();
  c_ingest->add_option("--split-at", ing.split_at, "Records at or after this hour go to --test-out");
  c_ingest->add_option("--test-out", ing.test_out, "Raw test dataset output");
  c_ingest->add_option("--top-zones", ing.top_zones, "Keep the K best connected zones (0 = all)");
  c_ingest->add_option("--origin-col", ing.schema.origin_column);
  c_ingest->add_option("--dest-col", ing.schema.dest_column);
  c_ingest->add_option("--timestamp-col", ing.schema.timestamp_column);
  c_ingest->add_option("--date-col", ing.schema.date_column);
  c_ingest->add_option("--hour-col", ing.schema.hour_column);
  c_ingest->add_option("--travel-time-col", ing.schema.travel_time_column);
  c_ingest->add_option("--delimiter", ing.delimiter);
  c_ingest->add_flag("--lenient", ing.schema.lenient, "Skip malformed rows with a warning");

  TrainOptions tr;
  auto* c_train = app.add_subcommand("train", "Train a model and write a checkpoint");
  c_train->add_option("--data", tr.data)->required();
  c_train->add_option("--out", tr.out, "Checkpoint output")->required();
  c_train->add_option("--report", tr.report, "Per-epoch CSV (default <out>.report.csv)");
  c_train->add_option("--config", tr.config_file, "key=value config file");
  c_train->add_option("--profile", tr.profile, "uber, nyc, chicago or desk");
  c_train->add_option("--variant", tr.variant, "congae, sp, t, fc, noncontextdec, nonweightedenc");
  c_train->add_option("--set", tr.sets, "Override one config key (key=value)");
  c_train->add_option("--epochs", tr.epochs);
  c_train->add_option("--seed", tr.seed);
  c_train->add_option("--threads", tr.threads);
  c_train->add_option("--resume", tr.resume, "Continue from a checkpoint");
  c_train->add_option("--stop-after", tr.stop_after, "Run at most this many epochs now");

  ScoreOptions sc;
  auto* c_score = app.add_subcommand("score", "Anomaly score per snapshot");
  c_score->add_option("--data", sc.data)->required();
  c_score->add_option("--model", sc.model)->required();
  c_score->add_option("--out", sc.out)->required();
  c_score->add_option("--threads", sc.threads);

  ResampleOptions rs;
  auto* c_resample = app.add_subcommand("resample", "Gaussian-resampled clean test set from raw test data");
  c_resample->add_option("--data", rs.data)->required();
  c_resample->add_option("--out", rs.out)->required();
  c_resample->add_option("--seed", rs.seed);

  InjectOptions inj;
  auto* c_inject = app.add_subcommand("inject", "Inject spatial or temporal anomalies");
  c_inject->add_option("--data", inj.data)->required();
  c_inject->add_option("--out", inj.out)->required();
  c_inject->add_option("--type", inj.type)->required();
  c_inject->add_option("--alpha", inj.cfg.alpha);
  c_inject->add_option("--beta", inj.cfg.beta);
  c_inject->add_option("--gamma", inj.cfg.gamma);
  c_inject->add_option("--seed", inj.cfg.seed);

  EvalOptions ev;
  auto* c_eval = app.add_subcommand("eval", "AUC of models (and HA) on a labeled dataset");
  c_eval->add_option("--data", ev.data)->required();
  c_eval->add_option("--model", ev.models);
  c_eval->add_option("--name", ev.names, "Method name per --model");
  c_eval->add_option("--ha-train", ev.ha_train, "Training dataset for the historical-average baseline");
  c_eval->add_option("--out", ev.out)->required();
  c_eval->add_option("--threads", ev.threads);

  ReportOptions rp;
  auto* c_report = app.add_subcommand("report", "Train variants and evaluate an injection grid");
  c_report->add_option("--manifest", rp.manifest, "Experiment key=value file")->required();
  c_report->add_option("--out", rp.out)->required();
  c_report->add_option("--threads", rp.threads);

  SynthOptions sy;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic city");
  c_synth->add_option("--records", sy.records)->required();
  c_synth->add_option("--zones", sy.zones)->required();
  c_synth->add_option("--zones-x", sy.cfg.zones_x);
  c_synth->add_option("--zones-y", sy.cfg.zones_y);
  c_synth->add_option("--weeks", sy.cfg.weeks);
  c_synth->add_option("--seed", sy.cfg.seed);
  c_synth->add_option("--noise", sy.cfg.noise_cv);

  std::vector<std::string> args(argv, argv + argc);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*c_ingest) return cmd_ingest(ing, args, out, err);
    if (*c_train) return cmd_train(tr, out);
    if (*c_score) return cmd_score(sc, out, err);
    if (*c_resample) return cmd_resample(rs, out);
    if (*c_inject) return cmd_inject(inj, out);
    if (*c_eval) return cmd_eval(ev, out);
    if (*c_report) return cmd_report(rp, out);
    if (*c_synth) return cmd_synth(sy, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::data);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::data);
  }
  return 1;
}

}  // namespace congae::cli

namespace congae {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return cli::run(argc, argv, out, err);
}

}  // namespace congae
