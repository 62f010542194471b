#include "congae/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "congae/error.hpp"
#include "congae/loss.hpp"
#include "congae/parallel.hpp"
#include "text.hpp"

namespace congae {
namespace {

// Stream keys for RngStream::fork, so every consumer draws independently.
enum StreamKey : std::uint64_t { kInitStream = 1, kShuffleStream = 2, kSampleStream = 3 };

std::string join_dims(const std::vector<std::size_t>& dims) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "," : "") + std::to_string(dims[i]);
  return s;
}

std::size_t parse_count(std::string_view key, std::string_view v) {
  auto n = text::parse_int(v);
  if (!n || *n < 0) throw ConfigError("config key '" + std::string(key) + "' expects a non-negative integer, got '" + std::string(v) + "'");
  return static_cast<std::size_t>(*n);
}

double parse_real(std::string_view key, std::string_view v) {
  auto d = text::parse_double(v);
  if (!d || !std::isfinite(*d)) throw ConfigError("config key '" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
  return *d;
}

bool parse_flag(std::string_view key, std::string_view v) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw ConfigError("config key '" + std::string(key) + "' expects true/false");
}

}  // namespace

void TrainConfig::validate() const {
  if (!(p_e_drop >= 0.0 && p_e_drop < 1.0)) throw ConfigError("p_e_drop must lie in [0, 1)");
  if (!(p_drop >= 0.0 && p_drop < 1.0)) throw ConfigError("p_drop must lie in [0, 1)");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
    throw ConfigError("validation_fraction must lie in (0, 1)");
  if (batch_size == 0) throw ConfigError("batch_size must be at least 1");
  if (lr_decay_every_epochs == 0) throw ConfigError("lr_decay_every must be at least 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (!(lr_decay_factor > 0.0)) throw ConfigError("lr_decay_factor must be positive");
  dims.validate();
  variant.validate();
}

double TrainConfig::learning_rate_at(std::size_t epoch) const {
  return learning_rate * std::pow(lr_decay_factor, static_cast<double>(epoch / lr_decay_every_epochs));
}

TrainConfig TrainConfig::profile(std::string_view name) {
  TrainConfig c;
  if (name == "uber") {
    return c;
  }
  if (name == "nyc") {
    c.dims.layer_dims = {150, 50};
    c.dims.graph_dim = 50;
    c.dims.edge_hidden_dim = 50;
    c.learning_rate = 1e-3;
    c.lr_decay_every_epochs = 20;
    return c;
  }
  if (name == "chicago") {
    c.dims.layer_dims = {300, 25};
    c.dims.hour_dim = c.dims.week_dim = 200;
    c.dims.graph_dim = 25;
    c.dims.edge_hidden_dim = 25;
    c.p_e_drop = c.p_drop = 0.1;
    c.learning_rate = 1e-3;
    c.lr_decay_every_epochs = 20;
    return c;
  }
  if (name == "desk") {
    c.dims.layer_dims = {32, 32};
    c.dims.hour_dim = c.dims.week_dim = 16;
    c.dims.graph_dim = 32;
    c.dims.edge_hidden_dim = 64;
    c.dims.use_bias = true;
    c.p_e_drop = c.p_drop = 0.1;
    c.learning_rate = 2e-3;
    c.lr_decay_every_epochs = 40;
    c.epochs = 100;
    c.early_stop_patience = 20;
    return c;
  }
  throw ConfigError("unknown profile '" + std::string(name) + "' (expected uber, nyc, chicago or desk)");
}

std::vector<std::pair<std::string, std::string>> config_entries(const TrainConfig& c) {
  using text::format_double;
  return {
      {"epochs", std::to_string(c.epochs)},
      {"batch_size", std::to_string(c.batch_size)},
      {"validation_fraction", format_double(c.validation_fraction)},
      {"learning_rate", format_double(c.learning_rate)},
      {"lr_decay_factor", format_double(c.lr_decay_factor)},
      {"lr_decay_every", std::to_string(c.lr_decay_every_epochs)},
      {"p_e_drop", format_double(c.p_e_drop)},
      {"p_drop", format_double(c.p_drop)},
      {"feature_dim", std::to_string(c.dims.feature_dim)},
      {"layer_dims", join_dims(c.dims.layer_dims)},
      {"hour_dim", std::to_string(c.dims.hour_dim)},
      {"week_dim", std::to_string(c.dims.week_dim)},
      {"graph_dim", std::to_string(c.dims.graph_dim)},
      {"edge_hidden_dim", std::to_string(c.dims.edge_hidden_dim)},
      {"use_bias", c.dims.use_bias ? "true" : "false"},
      {"use_context", c.variant.use_context ? "true" : "false"},
      {"graph_layers", std::string(to_string(c.variant.graph_layers))},
      {"context_in_decoder", c.variant.context_in_decoder ? "true" : "false"},
      {"seed", std::to_string(c.seed)},
      {"early_stop_patience", std::to_string(c.early_stop_patience)},
      {"adam_beta1", format_double(c.adam_beta1)},
      {"adam_beta2", format_double(c.adam_beta2)},
      {"adam_epsilon", format_double(c.adam_epsilon)},
  };
}

void set_config_value(TrainConfig& c, std::string_view key, std::string_view raw) {
  const auto v = text::trim(raw);
  if (key == "epochs") c.epochs = parse_count(key, v);
  else if (key == "batch_size") c.batch_size = parse_count(key, v);
  else if (key == "validation_fraction") c.validation_fraction = parse_real(key, v);
  else if (key == "learning_rate") c.learning_rate = parse_real(key, v);
  else if (key == "lr_decay_factor") c.lr_decay_factor = parse_real(key, v);
  else if (key == "lr_decay_every") c.lr_decay_every_epochs = parse_count(key, v);
  else if (key == "p_e_drop") c.p_e_drop = parse_real(key, v);
  else if (key == "p_drop") c.p_drop = parse_real(key, v);
  else if (key == "feature_dim") c.dims.feature_dim = parse_count(key, v);
  else if (key == "layer_dims") {
    c.dims.layer_dims.clear();
    std::string_view rest = v;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      c.dims.layer_dims.push_back(parse_count(key, rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (c.dims.layer_dims.empty()) throw ConfigError("layer_dims must list at least one width");
  } else if (key == "hour_dim") c.dims.hour_dim = parse_count(key, v);
  else if (key == "week_dim") c.dims.week_dim = parse_count(key, v);
  else if (key == "graph_dim") c.dims.graph_dim = parse_count(key, v);
  else if (key == "edge_hidden_dim") c.dims.edge_hidden_dim = parse_count(key, v);
  else if (key == "use_bias") c.dims.use_bias = parse_flag(key, v);
  else if (key == "use_context") c.variant.use_context = parse_flag(key, v);
  else if (key == "graph_layers") c.variant.graph_layers = graph_layers_from_string(v);
  else if (key == "context_in_decoder") c.variant.context_in_decoder = parse_flag(key, v);
  else if (key == "variant") c.variant = ModelVariant::named(v);
  else if (key == "seed") c.seed = parse_count(key, v);
  else if (key == "early_stop_patience") c.early_stop_patience = parse_count(key, v);
  else if (key == "adam_beta1") c.adam_beta1 = parse_real(key, v);
  else if (key == "adam_beta2") c.adam_beta2 = parse_real(key, v);
  else if (key == "adam_epsilon") c.adam_epsilon = parse_real(key, v);
  else if (key == "threads") c.threads = parse_count(key, v);
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::string config_to_text(const TrainConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : config_entries(cfg)) out += k + "=" + v + "\n";
  return out;
}

TrainConfig config_from_text(std::string_view text) {
  TrainConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text::trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    set_config_value(cfg, text::trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

std::string TrainReport::to_csv() const {
  std::ostringstream os;
  os << "epoch,train_loss,val_loss,lr\n";
  for (const auto& e : epochs)
    os << e.epoch << ',' << text::format_double(e.train_loss) << ',' << text::format_double(e.val_loss)
       << ',' << text::format_double(e.learning_rate) << '\n';
  return os.str();
}

DataSplit chronological_split(const Dataset& ds, double validation_fraction) {
  std::vector<std::size_t> usable;
  for (std::size_t t = 0; t < ds.snapshots.size(); ++t)
    if (!ds.snapshots[t].edges.empty()) usable.push_back(t);
  const auto n_val = static_cast<std::size_t>(
      std::ceil(validation_fraction * static_cast<double>(usable.size())));
  if (usable.empty() || n_val == 0 || n_val >= usable.size())
    throw ConfigError("dataset of " + std::to_string(usable.size()) +
                      " non-empty snapshots cannot be split into train and validation parts");
  DataSplit s;
  s.train.assign(usable.begin(), usable.end() - static_cast<std::ptrdiff_t>(n_val));
  s.validation.assign(usable.end() - static_cast<std::ptrdiff_t>(n_val), usable.end());
  return s;
}

ConGaeModel initial_model(const Dataset& dataset, const TrainConfig& config) {
  RngStream init = RngStream(config.seed).fork({kInitStream});
  return ConGaeModel::create(config.dims, config.variant, dataset.node_features(), init);
}

Trainer::Trainer(const Dataset& dataset, TrainConfig config) : dataset_(dataset) {
  config.validate();
  state_.config = std::move(config);
  state_.model = initial_model(dataset, state_.config);
  state_.adam = AdamState::for_params(state_.model.params(), state_.config.learning_rate,
                                      state_.config.adam_beta1, state_.config.adam_beta2,
                                      state_.config.adam_epsilon);
  state_.best_params = state_.model.params();
  init_split();
  if (state_.config.epochs == 0) {
    state_.finished = true;
    state_.report.stop_reason = "max_epochs";
  }
}

Trainer::Trainer(const Dataset& dataset, TrainingState state)
    : dataset_(dataset), state_(std::move(state)) {
  state_.config.validate();
  require_dims(state_.model.num_nodes() == dataset.node_count(),
               "checkpoint model has " + std::to_string(state_.model.num_nodes()) +
                   " nodes, dataset has " + std::to_string(dataset.node_count()));
  init_split();
}

void Trainer::init_split() { split_ = chronological_split(dataset_, state_.config.validation_fraction); }

double Trainer::validation_loss(const ConGaeModel& model) const {
  std::vector<double> losses(split_.validation.size());
  parallel_for(losses.size(), state_.config.threads, [&](std::size_t k) {
    const auto& s = dataset_.snapshots[split_.validation[k]];
    RngStream unused;
    losses[k] = graph_loss(s, s.edges, model, RunMode::eval(), unused);
  });
  double sum = 0.0;
  for (double l : losses) sum += l;
  return sum / static_cast<double>(losses.size());
}

void Trainer::run_epoch() {
  if (state_.finished) return;
  auto& cfg = state_.config;
  const std::size_t epoch = state_.epochs_done;
  const double lr = cfg.learning_rate_at(epoch);
  state_.adam.learning_rate = lr;

  const RngStream root(cfg.seed);
  std::vector<std::size_t> order = split_.train;
  RngStream shuffle = root.fork({kShuffleStream, epoch});
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle.below(i)]);

  auto& model = state_.model;
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.threads, cfg.batch_size));
  std::vector<GradientBuffer> buffers(workers, GradientBuffer(model.params()));
  std::vector<double> sample_losses(order.size(), 0.0);

  for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
    const std::size_t end = std::min(order.size(), start + cfg.batch_size);
    const double scale = 1.0 / static_cast<double>(end - start);
    model.params().zero_grad();
    // Each sample's gradient lands in a zeroed buffer and is summed in sample
    // order, so the result is independent of the worker count.
    for (std::size_t chunk = start; chunk < end; chunk += workers) {
      const std::size_t chunk_end = std::min(end, chunk + workers);
      parallel_for(chunk_end - chunk, workers, [&](std::size_t k) {
        const std::size_t pos = chunk + k;
        auto& buf = buffers[k];
        buf.zero();
        RngStream rng = root.fork({kSampleStream, epoch, pos});
        const auto masked = edge_dropout(dataset_.snapshots[order[pos]], cfg.p_e_drop, rng);
        sample_losses[pos] = accumulate_loss_gradients(masked.input, masked.targets, model,
                                                       RunMode::train(cfg.p_drop), rng, buf, scale);
      });
      for (std::size_t k = 0; k < chunk_end - chunk; ++k) buffers[k].add_to(model.params());
    }
    adam_step(model.params(), state_.adam);
  }

  double train_loss = 0.0;
  for (double l : sample_losses) train_loss += l;
  train_loss /= static_cast<double>(sample_losses.size());
  const double val_loss = validation_loss(model);
  if (!std::isfinite(val_loss) || !std::isfinite(train_loss))
    throw NumericError("training diverged at epoch " + std::to_string(epoch));

  state_.report.epochs.push_back({epoch, train_loss, val_loss, lr});
  ++state_.epochs_done;
  if (val_loss < state_.best_val_loss) {
    state_.best_val_loss = val_loss;
    state_.best_params.assign_values(model.params());
    state_.report.best_epoch = epoch;
    state_.epochs_since_improvement = 0;
  } else {
    ++state_.epochs_since_improvement;
  }
  if (cfg.early_stop_patience > 0 && state_.epochs_since_improvement >= cfg.early_stop_patience) {
    state_.finished = true;
    state_.report.stop_reason = "early_stop";
  } else if (state_.epochs_done >= cfg.epochs) {
    state_.finished = true;
    state_.report.stop_reason = "max_epochs";
  }
}

std::size_t Trainer::run(std::size_t max_epochs) {
  std::size_t ran = 0;
  while (!state_.finished && ran < max_epochs) {
    run_epoch();
    ++ran;
  }
  return ran;
}

ConGaeModel Trainer::best_model() const {
  ConGaeModel m = state_.model;
  m.params().assign_values(state_.best_params);
  m.params().zero_grad();
  return m;
}

TrainResult train(const Dataset& dataset, const TrainConfig& config) {
  Trainer t(dataset, config);
  t.run();
  return {t.best_model(), t.report()};
}

}  // namespace congae
