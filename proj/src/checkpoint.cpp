#include "congae/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "congae/dataset_io.hpp"
#include "congae/error.hpp"

namespace congae {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[8] = {'C', 'O', 'N', 'G', 'A', 'E', 'C', 'K'};

std::uint64_t fnv1a(const char* data, std::size_t n) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 1099511628211ULL;
  }
  return h;
}

class Writer {
 public:
  template <typename T>
  void pod(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void u64(std::uint64_t v) { pod(v); }
  void f64(double v) { pod(v); }
  void str(const std::string& s) {
    u64(s.size());
    out_ += s;
  }
  void mat(const Matrix& m) {
    u64(m.rows());
    u64(m.cols());
    for (double v : m.values()) f64(v);
  }
  void params(const ModelParams& p) {
    u64(p.size());
    for (const auto& param : p) {
      str(param.name);
      mat(param.value);
    }
  }
  std::string finish() {
    const auto h = fnv1a(out_.data(), out_.size());
    u64(h);
    return std::move(out_);
  }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(const std::string& bytes, std::size_t end) : bytes_(bytes), end_(end) {}

  template <typename T>
  T pod() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::uint64_t u64() { return pod<std::uint64_t>(); }
  double f64() { return pod<double>(); }
  bool flag() {
    const auto b = pod<std::uint8_t>();
    if (b > 1) throw DataError("corrupt checkpoint: bad flag byte");
    return b == 1;
  }
  std::string str() {
    const auto n = u64();
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  Matrix mat() {
    const auto r = u64();
    const auto c = u64();
    if (c != 0 && r > (end_ - pos_) / 8 / c) throw DataError("corrupt checkpoint: matrix size exceeds payload");
    std::vector<double> v(r * c);
    for (auto& x : v) x = f64();
    return Matrix(r, c, std::move(v));
  }
  ModelParams params() {
    ModelParams p;
    const auto n = u64();
    for (std::uint64_t i = 0; i < n; ++i) {
      auto name = str();
      p.add(std::move(name), mat());
    }
    return p;
  }
  bool at_end() const { return pos_ == end_; }

 private:
  void need(std::size_t n) const {
    if (n > end_ - pos_) throw DataError("corrupt checkpoint: truncated payload");
  }

  const std::string& bytes_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string serialize_checkpoint(const TrainingState& s) {
  Writer w;
  for (char c : kMagic) w.pod(c);
  w.pod(kCheckpointVersion);
  w.str(config_to_text(s.config));
  w.mat(s.model.node_features());
  w.params(s.model.params());

  w.u64(s.adam.step);
  w.f64(s.adam.beta1);
  w.f64(s.adam.beta2);
  w.f64(s.adam.epsilon);
  w.f64(s.adam.learning_rate);
  for (const auto* moments : {&s.adam.m, &s.adam.v}) {
    w.u64(moments->size());
    for (const auto& m : *moments) w.mat(m);
  }

  w.u64(s.epochs_done);
  w.pod<std::uint8_t>(s.finished ? 1 : 0);
  w.f64(s.best_val_loss);
  w.u64(s.epochs_since_improvement);
  w.pod<std::uint8_t>(s.report.best_epoch ? 1 : 0);
  w.u64(s.report.best_epoch.value_or(0));
  w.str(s.report.stop_reason);
  w.params(s.best_params);
  w.u64(s.report.epochs.size());
  for (const auto& e : s.report.epochs) {
    w.u64(e.epoch);
    w.f64(e.train_loss);
    w.f64(e.val_loss);
    w.f64(e.learning_rate);
  }
  return w.finish();
}

TrainingState deserialize_checkpoint(const std::string& bytes, const TrainConfig* expected) {
  if (bytes.size() < sizeof(kMagic) + 4 + 8 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw DataError("not a checkpoint file");
  const std::size_t body = bytes.size() - 8;
  std::uint64_t stored_hash;
  std::memcpy(&stored_hash, bytes.data() + body, 8);

  Reader r(bytes, body);
  for (std::size_t i = 0; i < sizeof(kMagic); ++i) r.pod<char>();
  const auto version = r.pod<std::uint32_t>();
  if (version != kCheckpointVersion)
    throw DataError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                    std::to_string(kCheckpointVersion) + ")");
  if (fnv1a(bytes.data(), body) != stored_hash) throw DataError("corrupt checkpoint: checksum mismatch");

  TrainingState s;
  s.config = config_from_text(r.str());
  if (expected) s.config.threads = expected->threads;
  Matrix features = r.mat();
  ModelParams stored = r.params();

  const TrainConfig& shape_cfg = expected ? *expected : s.config;
  RngStream unused;
  s.model = ConGaeModel::create(shape_cfg.dims, shape_cfg.variant, std::move(features), unused);
  if (stored.size() != s.model.params().size())
    throw DimensionError("checkpoint holds " + std::to_string(stored.size()) + " parameters, config expects " +
                         std::to_string(s.model.params().size()));
  s.model.params().assign_values(stored);

  s.adam.step = r.u64();
  s.adam.beta1 = r.f64();
  s.adam.beta2 = r.f64();
  s.adam.epsilon = r.f64();
  s.adam.learning_rate = r.f64();
  for (auto* moments : {&s.adam.m, &s.adam.v}) {
    const auto n = r.u64();
    if (n != s.model.params().size()) throw DataError("corrupt checkpoint: optimizer state size");
    for (std::uint64_t i = 0; i < n; ++i) {
      moments->push_back(r.mat());
      const auto& v = s.model.params()[i].value;
      if (moments->back().rows() != v.rows() || moments->back().cols() != v.cols())
        throw DimensionError("optimizer state for parameter '" + s.model.params()[i].name + "' has the wrong shape");
    }
  }

  s.epochs_done = r.u64();
  s.finished = r.flag();
  s.best_val_loss = r.f64();
  s.epochs_since_improvement = r.u64();
  const bool has_best = r.flag();
  const auto best_epoch = r.u64();
  if (has_best) s.report.best_epoch = best_epoch;
  s.report.stop_reason = r.str();
  s.best_params = s.model.params();
  s.best_params.assign_values(r.params());
  const auto n_epochs = r.u64();
  for (std::uint64_t i = 0; i < n_epochs; ++i) {
    EpochRecord e{};
    e.epoch = r.u64();
    e.train_loss = r.f64();
    e.val_loss = r.f64();
    e.learning_rate = r.f64();
    s.report.epochs.push_back(e);
  }
  if (!r.at_end()) throw DataError("corrupt checkpoint: trailing bytes");
  if (s.report.epochs.size() != s.epochs_done) throw DataError("corrupt checkpoint: report length");
  if (expected && (!(expected->dims == s.config.dims) || !(expected->variant == s.config.variant)))
    throw ConfigError("checkpoint was trained with a different architecture");
  return s;
}

void save_checkpoint(const std::filesystem::path& path, const TrainingState& state) {
  write_file_atomic(path, serialize_checkpoint(state));
}

TrainingState load_checkpoint(const std::filesystem::path& path, const TrainConfig* expected) {
  return deserialize_checkpoint(read_file(path), expected);
}

}  // namespace congae
