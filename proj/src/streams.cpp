#include "omt/streams.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "omt/io_util.hpp"
#include "omt/rng.hpp"

namespace omt {

namespace {

// Sequential-order helpers: the generator must produce the same bits on every
// platform, so reductions are written as plain loops instead of Eigen
// reductions whose evaluation order can vary with SIMD width.
double seq_dot(const FeatureVector& a, const FeatureVector& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double seq_norm(const FeatureVector& v) { return std::sqrt(seq_dot(v, v)); }

FeatureVector to_sphere(FeatureVector v) {
  double n = seq_norm(v);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] /= n;
  return v;
}

// Unit vector orthogonal to all of `basis`, from repeated deterministic draws.
FeatureVector orthonormal_draw(Rng& rng, int dim, const std::vector<FeatureVector>& basis) {
  for (;;) {
    FeatureVector v = rng.gaussian_vector(dim);
    for (const auto& b : basis) {
      double c = seq_dot(v, b);
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
    double n = seq_norm(v);
    if (n > 1e-6) {
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] /= n;
      return v;
    }
  }
}

}  // namespace

void SynthSpec::validate() const {
  if (dim < 2) throw UsageError("synth: dim must be >= 2");
  if (n_steps < 0) throw UsageError("synth: n_steps must be >= 0");
  if (latent_dim < 1 || latent_dim > dim - 1)
    throw UsageError("synth: latent_dim must be in [1, dim-1]");
  if (start_offset < 0.0 || drift < 0.0 || noise < 0.0 || extent < 0.0)
    throw UsageError("synth: magnitudes must be >= 0");
  if (distractor_spread < 0.0) throw UsageError("synth: distractor_spread must be >= 0");
  if (!(distractor_min_distance >= 0.0 && distractor_max_distance >= distractor_min_distance))
    throw UsageError("synth: distractor distance range is invalid");
  if (distractor_max_distance > 2.0)
    throw UsageError("synth: distractor distances are chords on the unit sphere, max is 2");
  if (interleave && distractor_clusters < 1)
    throw UsageError("synth: interleaving requires at least one distractor cluster");
}

Stream synth_stream(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  // Anchor direction and an orthonormal tangent frame for the latent patch.
  FeatureVector anchor_dir = to_sphere(rng.gaussian_vector(spec.dim));
  std::vector<FeatureVector> frame{anchor_dir};
  std::vector<FeatureVector> tangent;
  tangent.reserve(spec.latent_dim);
  for (int j = 0; j < spec.latent_dim; ++j) {
    FeatureVector b = orthonormal_draw(rng, spec.dim, frame);
    frame.push_back(b);
    tangent.push_back(std::move(b));
  }

  // Distractor cluster centers on the sphere at controlled chord distances
  // from the anchor: chord c maps to the angle with cos = 1 - c^2/2.
  std::vector<FeatureVector> centers;
  centers.reserve(spec.distractor_clusters);
  for (int c = 0; c < spec.distractor_clusters; ++c) {
    double chord = spec.distractor_min_distance +
                   rng.unit() * (spec.distractor_max_distance - spec.distractor_min_distance);
    FeatureVector e = orthonormal_draw(rng, spec.dim, {anchor_dir});
    double cos_a = 1.0 - chord * chord / 2.0;
    double sin_a = std::sqrt(std::max(0.0, 1.0 - cos_a * cos_a));
    FeatureVector center(spec.dim);
    for (Eigen::Index i = 0; i < center.size(); ++i)
      center[i] = anchor_dir[i] * cos_a + e[i] * sin_a;
    centers.push_back(std::move(center));
  }

  auto embed = [&](const Eigen::VectorXd& latent, const FeatureVector& jitter) {
    FeatureVector v = anchor_dir;
    for (int j = 0; j < spec.latent_dim; ++j)
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] += latent[j] * tangent[j][i];
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] += spec.noise * jitter[i];
    return to_sphere(std::move(v));
  };

  Stream stream;
  stream.anchor = anchor_dir;

  Eigen::VectorXd latent = Eigen::VectorXd::Zero(spec.latent_dim);
  latent[0] = spec.start_offset;

  std::int64_t t = 0;
  stream.records.reserve(static_cast<std::size_t>(spec.n_steps) * (spec.interleave ? 2 : 1));
  for (int step = 0; step < spec.n_steps; ++step) {
    for (int j = 0; j < spec.latent_dim; ++j) latent[j] += spec.drift * rng.gaussian();
    double extent_norm = seq_norm(latent);
    if (extent_norm > spec.extent && extent_norm > 0.0)
      for (int j = 0; j < spec.latent_dim; ++j) latent[j] *= spec.extent / extent_norm;

    stream.records.push_back({t++, embed(latent, rng.gaussian_vector(spec.dim)), 1});

    if (spec.interleave) {
      auto cluster = rng.index(static_cast<std::uint64_t>(spec.distractor_clusters));
      FeatureVector v = centers[cluster];
      FeatureVector jitter = rng.gaussian_vector(spec.dim);
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] += spec.distractor_spread * jitter[i];
      stream.records.push_back({t++, to_sphere(std::move(v)), 0});
    }
  }

  // Everything lives on the unit sphere, so this is a recorded no-op; raw
  // external data would be rescaled here instead.
  std::vector<FeatureVector> all;
  all.reserve(stream.records.size() + 1);
  all.push_back(stream.anchor);
  for (const auto& rec : stream.records) all.push_back(rec.vector);
  NormalizedDataset normalized = normalize_dataset(std::move(all));
  stream.scale = normalized.scale;
  stream.anchor = std::move(normalized.vectors[0]);
  for (std::size_t i = 0; i < stream.records.size(); ++i)
    stream.records[i].vector = std::move(normalized.vectors[i + 1]);
  return stream;
}

StreamFormat format_from_path(const std::string& path) {
  auto dot = path.find_last_of('.');
  if (dot != std::string::npos) {
    std::string ext = path.substr(dot + 1);
    if (ext == "jsonl" || ext == "ndjson") return StreamFormat::Jsonl;
  }
  return StreamFormat::Csv;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

struct RawRow {
  std::int64_t t;
  int label;
  FeatureVector x;
};

RawRow parse_csv_row(const std::string& line, const std::string& where) {
  auto fields = split_csv(line);
  if (fields.size() < 3) throw DataError(where + ": expected t,label and at least one feature");
  RawRow row;
  row.t = parse_int(fields[0], where + " (t)");
  auto label = parse_int(fields[1], where + " (label)");
  row.label = static_cast<int>(label);
  row.x.resize(static_cast<Eigen::Index>(fields.size() - 2));
  for (std::size_t i = 2; i < fields.size(); ++i)
    row.x[static_cast<Eigen::Index>(i - 2)] = parse_double(fields[i], where + " (f" +
                                                           std::to_string(i - 2) + ")");
  return row;
}

RawRow parse_jsonl_row(const std::string& line, const std::string& where) {
  nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) throw DataError(where + ": not a JSON object");
  if (!obj.contains("t") || !obj.contains("label") || !obj.contains("x"))
    throw DataError(where + ": missing one of the fields t, label, x");
  if (!obj["t"].is_number_integer() || !obj["label"].is_number_integer() || !obj["x"].is_array())
    throw DataError(where + ": wrong field types (want integer t, integer label, array x)");
  RawRow row;
  row.t = obj["t"].get<std::int64_t>();
  row.label = obj["label"].get<int>();
  const auto& arr = obj["x"];
  if (arr.empty()) throw DataError(where + ": empty feature array");
  row.x.resize(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw DataError(where + ": x[" + std::to_string(i) + "] not a number");
    row.x[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return row;
}

}  // namespace

Stream ingest(std::istream& in, StreamFormat format, const std::string& name) {
  Stream stream;
  bool have_anchor = false;
  std::int64_t last_t = -1;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = name + ":" + std::to_string(line_no);

    if (format == StreamFormat::Csv && !header_seen) {
      header_seen = true;
      if (line.rfind("t,label", 0) != 0) throw DataError(where + ": expected header t,label,f0,...");
      continue;
    }

    RawRow row = format == StreamFormat::Csv ? parse_csv_row(line, where)
                                             : parse_jsonl_row(line, where);
    if (!all_finite(row.x)) throw DataError(where + ": non-finite feature value");

    if (row.t == -1) {
      if (have_anchor) throw DataError(where + ": duplicate anchor row (t = -1)");
      if (row.label != 1) throw DataError(where + ": anchor row must have label 1");
      stream.anchor = std::move(row.x);
      have_anchor = true;
      continue;
    }
    if (row.t < 0) throw DataError(where + ": negative t is reserved for the anchor row");
    if (row.t <= last_t) throw DataError(where + ": t must be strictly increasing");
    last_t = row.t;
    stream.records.push_back({row.t, std::move(row.x), row.label});
  }

  if (!have_anchor) throw DataError(name + ": no anchor row (t = -1) found");
  const auto dim = stream.anchor.size();
  for (std::size_t i = 0; i < stream.records.size(); ++i) {
    if (stream.records[i].vector.size() != dim)
      throw DataError(name + ": record t=" + std::to_string(stream.records[i].t) +
                      " has dimension " + std::to_string(stream.records[i].vector.size()) +
                      ", anchor has " + std::to_string(dim));
  }

  std::vector<FeatureVector> all;
  all.reserve(stream.records.size() + 1);
  all.push_back(std::move(stream.anchor));
  for (auto& rec : stream.records) all.push_back(std::move(rec.vector));
  NormalizedDataset normalized = normalize_dataset(std::move(all));
  stream.scale = normalized.scale;
  stream.anchor = std::move(normalized.vectors[0]);
  for (std::size_t i = 0; i < stream.records.size(); ++i)
    stream.records[i].vector = std::move(normalized.vectors[i + 1]);
  return stream;
}

Stream ingest_file(const std::string& path, StreamFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open stream file '" + path + "'");
  return ingest(in, format, path);
}

Stream ingest_file(const std::string& path) { return ingest_file(path, format_from_path(path)); }

void emit(const Stream& stream, std::ostream& out, StreamFormat format) {
  if (format == StreamFormat::Csv) {
    out << "t,label";
    for (Eigen::Index i = 0; i < stream.anchor.size(); ++i) out << ",f" << i;
    out << '\n';
    auto row = [&](std::int64_t t, int label, const FeatureVector& x) {
      out << t << ',' << label;
      for (Eigen::Index i = 0; i < x.size(); ++i) out << ',' << format_double(x[i]);
      out << '\n';
    };
    row(-1, 1, stream.anchor);
    for (const auto& rec : stream.records) row(rec.t, rec.true_label, rec.vector);
  } else {
    auto row = [&](std::int64_t t, int label, const FeatureVector& x) {
      nlohmann::ordered_json obj;
      obj["t"] = t;
      obj["label"] = label;
      auto arr = nlohmann::ordered_json::array();
      for (Eigen::Index i = 0; i < x.size(); ++i) arr.push_back(x[i]);
      obj["x"] = std::move(arr);
      out << obj.dump() << '\n';
    };
    row(-1, 1, stream.anchor);
    for (const auto& rec : stream.records) row(rec.t, rec.true_label, rec.vector);
  }
}

void emit_file(const Stream& stream, const std::string& path, StreamFormat format) {
  atomic_write_file(path, [&](std::ostream& out) { emit(stream, out, format); });
}

}  // namespace omt
