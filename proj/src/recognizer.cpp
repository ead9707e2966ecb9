#include "omt/recognizer.hpp"

#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "omt/io_util.hpp"

namespace omt {

OmtRecognizer::OmtRecognizer(OmtConfig cfg) : cfg_(std::move(cfg)), cover_(initial_cover(cfg_)) {}

OmtRecognizer::OmtRecognizer(OmtConfig cfg, CoverState cover, std::uint64_t step_count)
    : cfg_(std::move(cfg)), cover_(std::move(cover)), step_count_(step_count) {}

Prediction OmtRecognizer::process_step(const FeatureVector& x) {
  cover_ = quantize_step(std::move(cover_), x, cfg_, step_count_);
  Prediction pred = infer_identity(cover_, x, cfg_);
  ++step_count_;
  return pred;
}

namespace {
constexpr const char* kSnapshotMagic = "omt_snapshot";
constexpr int kSnapshotVersion = 1;

void write_vector(std::ostream& out, const FeatureVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << format_double(v[i]);
}

FeatureVector read_vector(const std::vector<std::string>& fields, std::size_t offset,
                          const std::string& where) {
  if (fields.size() <= offset) throw DataError(where + ": missing vector entries");
  FeatureVector v(static_cast<Eigen::Index>(fields.size() - offset));
  for (std::size_t i = offset; i < fields.size(); ++i)
    v[static_cast<Eigen::Index>(i - offset)] = parse_double(fields[i], where);
  return v;
}

std::vector<std::string> split(const std::string& line) {
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
}  // namespace

void OmtRecognizer::save_snapshot(std::ostream& out) const {
  out << kSnapshotMagic << ',' << kSnapshotVersion << '\n';
  out << "step_count," << step_count_ << '\n';
  out << "generalization_radius," << format_double(cfg_.generalization_radius) << '\n';
  out << "max_representatives," << cfg_.max_representatives << '\n';
  out << "initial_cover_radius," << format_double(cfg_.initial_cover_radius) << '\n';
  out << "heat_sigma," << format_double(cfg_.heat_sigma) << '\n';
  out << "sink_gamma," << format_double(cfg_.sink_gamma) << '\n';
  out << "recognition_threshold," << format_double(cfg_.recognition_threshold) << '\n';
  out << "anchor";
  write_vector(out, cfg_.labeled_anchor);
  out << '\n';
  out << "cover_radius," << format_double(cover_.cover_radius) << '\n';
  out << "doubling_count," << cover_.doubling_count << '\n';
  for (const auto& rep : cover_.representatives) {
    out << "rep," << rep.stream_index;
    write_vector(out, rep.vector);
    out << '\n';
  }
  out << "end\n";
}

OmtRecognizer OmtRecognizer::load_snapshot(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::vector<std::string> {
    if (!std::getline(in, line)) throw DataError("snapshot: truncated at line " +
                                                 std::to_string(line_no + 1));
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return split(line);
  };
  auto expect = [&](const std::vector<std::string>& fields, const std::string& key) {
    if (fields.empty() || fields[0] != key)
      throw DataError("snapshot:" + std::to_string(line_no) + ": expected '" + key + "'");
  };
  const std::string where_prefix = "snapshot";

  auto header = next_line();
  expect(header, kSnapshotMagic);
  if (header.size() != 2 || parse_int(header[1], where_prefix) != kSnapshotVersion)
    throw DataError("snapshot: unsupported version");

  auto scalar = [&](const std::string& key) {
    auto fields = next_line();
    expect(fields, key);
    if (fields.size() != 2) throw DataError("snapshot: malformed '" + key + "' line");
    return fields[1];
  };

  OmtConfig cfg;
  auto step_count = static_cast<std::uint64_t>(parse_int(scalar("step_count"), where_prefix));
  cfg.generalization_radius = parse_double(scalar("generalization_radius"), where_prefix);
  cfg.max_representatives =
      static_cast<int>(parse_int(scalar("max_representatives"), where_prefix));
  cfg.initial_cover_radius = parse_double(scalar("initial_cover_radius"), where_prefix);
  cfg.heat_sigma = parse_double(scalar("heat_sigma"), where_prefix);
  cfg.sink_gamma = parse_double(scalar("sink_gamma"), where_prefix);
  cfg.recognition_threshold = parse_double(scalar("recognition_threshold"), where_prefix);

  auto anchor_fields = next_line();
  expect(anchor_fields, "anchor");
  cfg.labeled_anchor = read_vector(anchor_fields, 1, where_prefix + " (anchor)");
  cfg.validate();

  CoverState cover;
  cover.cover_radius = parse_double(scalar("cover_radius"), where_prefix);
  cover.doubling_count = static_cast<int>(parse_int(scalar("doubling_count"), where_prefix));

  for (;;) {
    auto fields = next_line();
    if (!fields.empty() && fields[0] == "end") break;
    expect(fields, "rep");
    if (fields.size() < 3) throw DataError("snapshot: malformed rep line");
    Representative rep;
    rep.stream_index = static_cast<std::uint64_t>(parse_int(fields[1], where_prefix + " (rep)"));
    std::vector<std::string> rest(fields.begin() + 2, fields.end());
    rep.vector = read_vector(rest, 0, where_prefix + " (rep)");
    if (rep.vector.size() != cfg.labeled_anchor.size())
      throw DataError("snapshot: representative dimension mismatch");
    cover.representatives.push_back(std::move(rep));
  }
  if (!(cover.cover_radius > 0.0)) throw DataError("snapshot: nonpositive cover radius");

  return OmtRecognizer(std::move(cfg), std::move(cover), step_count);
}

NnRecognizer::NnRecognizer(std::vector<FeatureVector> anchors, double radius)
    : anchors_(std::move(anchors)), radius_(radius) {
  if (anchors_.empty()) throw UsageError("nn: at least one anchor is required");
  if (!(radius_ >= 0.0)) throw UsageError("nn: radius must be >= 0");
  for (std::size_t i = 1; i < anchors_.size(); ++i)
    if (anchors_[i].size() != anchors_[0].size())
      throw UsageError("nn: anchors have mismatched dimensions");
}

double NnRecognizer::score(const FeatureVector& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : anchors_) best = std::min(best, distance(x, a));
  return best;
}

int NnRecognizer::classify(const FeatureVector& x) const {
  return score(x) <= radius_ ? 1 : 0;
}

}  // namespace omt
