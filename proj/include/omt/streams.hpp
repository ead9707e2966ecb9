#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "omt/core.hpp"

namespace omt {

/// One stream frame. true_label identifies the source (1 = target class,
/// 0 = distractor) and is consumed only by evaluation, never by recognizers.
struct StreamRecord {
  std::int64_t t = 0;
  FeatureVector vector;
  int true_label = 0;
};

/// Parameters of the synthetic benchmark generator. The target class is a
/// bounded smooth random walk on a low-dimensional patch of the unit sphere;
/// distractors come from isolated clusters scattered around it. With
/// interleave on, every target frame is followed by one distractor frame.
struct SynthSpec {
  std::uint64_t seed = 0;
  int dim = 16;            ///< ambient feature dimension
  int n_steps = 1000;      ///< number of target frames
  int latent_dim = 2;      ///< dimension of the walked patch
  double start_offset = 0.0;  ///< latent distance of the walk start from the anchor
  double drift = 0.03;     ///< per-step latent step scale
  double noise = 0.004;    ///< per-coordinate ambient jitter
  double extent = 0.25;    ///< latent ball radius bounding the walk
  int distractor_clusters = 42;
  double distractor_spread = 0.015;        ///< per-coordinate cluster scatter
  double distractor_min_distance = 0.18;   ///< chord distance of nearest cluster center
  double distractor_max_distance = 1.2;    ///< chord distance of farthest cluster center
  bool interleave = false;

  void validate() const;  ///< throws UsageError
};

/// A labeled anchor plus the frame sequence, with the normalization factor
/// that was applied to reach max ||x||_2 == 1.
struct Stream {
  FeatureVector anchor;
  std::vector<StreamRecord> records;
  double scale = 1.0;
};

/// Deterministic synthesis; identical spec (including seed) gives a
/// bit-identical stream on any platform.
Stream synth_stream(const SynthSpec& spec);

enum class StreamFormat { Csv, Jsonl };

/// .jsonl/.ndjson -> Jsonl, anything else -> Csv.
StreamFormat format_from_path(const std::string& path);

/// Parse a stream file. Errors name the offending line. Vectors are rescaled
/// to max norm 1 and the factor recorded in Stream::scale.
Stream ingest(std::istream& in, StreamFormat format, const std::string& name = "<stream>");
Stream ingest_file(const std::string& path, StreamFormat format);
Stream ingest_file(const std::string& path);  ///< format from extension

/// Write a stream. CSV: header t,label,f0,...; the anchor row has t = -1 and
/// label = 1. JSONL: one {"t":..,"label":..,"x":[..]} object per line. Floats
/// are shortest-round-trip decimal, locale independent.
void emit(const Stream& stream, std::ostream& out, StreamFormat format);
void emit_file(const Stream& stream, const std::string& path, StreamFormat format);

}  // namespace omt
