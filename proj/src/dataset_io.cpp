#include "congae/dataset_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "text.hpp"

namespace congae {
namespace {

constexpr const char* kMagic = "congae-dataset";
constexpr int kVersion = 1;

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
    if (i < line.size() && line[i] == '\r') break;
  }
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::vector<std::string_view> expect(std::string_view keyword, std::size_t min_fields) {
    if (!std::getline(in_, line_)) fail("unexpected end of file, expected '" + std::string(keyword) + "'");
    ++line_no_;
    auto t = tokens(line_);
    if (t.empty() || t[0] != keyword) fail("expected '" + std::string(keyword) + "'");
    if (t.size() < min_fields + 1) fail("too few fields");
    return t;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw RowError(line_no_, "dataset container: " + why);
  }

  double real(std::string_view s) const {
    auto v = text::parse_double(s);
    if (!v) fail("bad number '" + std::string(s) + "'");
    return *v;
  }
  long long integer(std::string_view s) const {
    auto v = text::parse_int(s);
    if (!v) fail("bad integer '" + std::string(s) + "'");
    return *v;
  }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t line_no_ = 0;
};

}  // namespace

void write_dataset(std::ostream& out, const Dataset& ds, const std::vector<int>* labels) {
  using text::format_double;
  if (labels && labels->size() != ds.snapshots.size())
    throw DataError("label count does not match snapshot count");
  out << kMagic << ' ' << kVersion << '\n';
  out << "scaler " << format_double(ds.scaler.inv_min) << ' ' << format_double(ds.scaler.inv_max) << '\n';
  out << "zones " << ds.zones.size() << '\n';
  for (const auto& z : ds.zones) {
    if (z.zone_id.empty() || z.zone_id.find_first_of(" \t\r\n") != std::string::npos)
      throw DataError("zone id '" + z.zone_id + "' cannot be serialized (whitespace)");
    out << "zone " << z.zone_id << ' ' << format_double(z.min_lat) << ' ' << format_double(z.min_lon)
        << ' ' << format_double(z.max_lat) << ' ' << format_double(z.max_lon);
    for (double s : z.scaled) out << ' ' << format_double(s);
    out << '\n';
  }
  out << "labels " << (labels ? 1 : 0) << '\n';
  out << "snapshots " << ds.snapshots.size() << '\n';
  for (std::size_t t = 0; t < ds.snapshots.size(); ++t) {
    const auto& s = ds.snapshots[t];
    out << "snapshot " << s.timestamp.to_string() << ' ' << s.context.hour << ' ' << s.context.dow
        << ' ' << s.edges.size();
    if (labels) out << ' ' << (*labels)[t];
    out << '\n';
    for (const auto& e : s.edges)
      out << "edge " << e.origin << ' ' << e.dest << ' ' << format_double(e.weight) << ' '
          << format_double(e.travel_time) << '\n';
  }
  out << "end\n";
}

DatasetFile read_dataset(std::istream& in) {
  LineReader r(in);
  DatasetFile f;
  auto head = r.expect(kMagic, 1);
  if (r.integer(head[1]) != kVersion) r.fail("unsupported container version");
  auto sc = r.expect("scaler", 2);
  f.dataset.scaler = {r.real(sc[1]), r.real(sc[2])};
  const auto n = r.integer(r.expect("zones", 1)[1]);
  if (n < 0) r.fail("negative zone count");
  for (long long i = 0; i < n; ++i) {
    auto t = r.expect("zone", 9);
    ZoneFeatures z;
    z.zone_id = std::string(t[1]);
    z.min_lat = r.real(t[2]);
    z.min_lon = r.real(t[3]);
    z.max_lat = r.real(t[4]);
    z.max_lon = r.real(t[5]);
    for (int k = 0; k < 4; ++k) z.scaled[k] = r.real(t[6 + k]);
    f.dataset.zones.push_back(std::move(z));
  }
  f.has_labels = r.integer(r.expect("labels", 1)[1]) != 0;
  const auto count = r.integer(r.expect("snapshots", 1)[1]);
  if (count < 0) r.fail("negative snapshot count");
  for (long long t = 0; t < count; ++t) {
    auto h = r.expect("snapshot", f.has_labels ? 5 : 4);
    ODSnapshot s;
    s.node_count = f.dataset.zones.size();
    try {
      s.timestamp = Timestamp::parse(h[1]);
    } catch (const DataError& e) {
      r.fail(e.what());
    }
    s.context = {static_cast<int>(r.integer(h[2])), static_cast<int>(r.integer(h[3]))};
    const auto edges = r.integer(h[4]);
    if (f.has_labels) f.labels.push_back(static_cast<int>(r.integer(h[5])));
    if (edges < 0) r.fail("negative edge count");
    s.edges.reserve(static_cast<std::size_t>(edges));
    for (long long k = 0; k < edges; ++k) {
      auto e = r.expect("edge", 4);
      const auto o = r.integer(e[1]), d = r.integer(e[2]);
      if (o < 0 || d < 0) r.fail("negative node index");
      s.edges.push_back({static_cast<std::uint32_t>(o), static_cast<std::uint32_t>(d), r.real(e[3]),
                         r.real(e[4])});
    }
    f.dataset.snapshots.push_back(std::move(s));
  }
  r.expect("end", 0);
  f.dataset.validate();
  return f;
}

std::string serialize_dataset(const Dataset& ds, const std::vector<int>* labels) {
  std::ostringstream os;
  write_dataset(os, ds, labels);
  return os.str();
}

void save_dataset(const std::filesystem::path& path, const Dataset& ds, const std::vector<int>* labels) {
  write_file_atomic(path, serialize_dataset(ds, labels));
}

DatasetFile load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset '" + path.string() + "'");
  try {
    return read_dataset(in);
  } catch (const RowError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw DataError("write failed for '" + path.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace congae
