#include <sstream>

#include <doctest.h>

#include "omt/streams.hpp"
#include "oracles.hpp"

using namespace omt;

TEST_SUITE_BEGIN("streams");

TEST_CASE("interleaved synthesis alternates labels, half negatives") {
  SynthSpec spec;
  spec.seed = 61;
  spec.n_steps = 200;
  spec.interleave = true;
  auto stream = synth_stream(spec);

  REQUIRE(stream.records.size() == 400);
  std::size_t negatives = 0;
  for (std::size_t i = 0; i < stream.records.size(); ++i) {
    const auto& rec = stream.records[i];
    CHECK(rec.t == static_cast<std::int64_t>(i));
    if (rec.true_label == 0) ++negatives;
    if (i > 0) CHECK(rec.true_label != stream.records[i - 1].true_label);
  }
  CHECK(negatives == 200);
}

TEST_CASE("non-interleaved synthesis is all targets") {
  SynthSpec spec;
  spec.seed = 62;
  spec.n_steps = 50;
  auto stream = synth_stream(spec);
  REQUIRE(stream.records.size() == 50);
  for (const auto& rec : stream.records) CHECK(rec.true_label == 1);
}

TEST_CASE("same seed gives byte-identical output") {
  SynthSpec spec;
  spec.seed = 63;
  spec.n_steps = 80;
  spec.interleave = true;
  auto emit_once = [&spec](StreamFormat format) {
    std::ostringstream out;
    emit(synth_stream(spec), out, format);
    return out.str();
  };
  CHECK(emit_once(StreamFormat::Csv) == emit_once(StreamFormat::Csv));
  CHECK(emit_once(StreamFormat::Jsonl) == emit_once(StreamFormat::Jsonl));
}

TEST_CASE("target frames are temporally smooth, distractors are not") {
  SynthSpec spec;
  spec.seed = 64;
  spec.n_steps = 1000;
  spec.interleave = true;
  auto stream = synth_stream(spec);

  std::vector<FeatureVector> targets;
  for (const auto& rec : stream.records)
    if (rec.true_label == 1) targets.push_back(rec.vector);
  REQUIRE(targets.size() == 1000);

  std::size_t close = 0;
  for (std::size_t i = 1; i < targets.size(); ++i)
    if (oracles::naive_distance(targets[i - 1], targets[i]) < 0.1) ++close;
  CHECK(static_cast<double>(close) / static_cast<double>(targets.size() - 1) >= 0.95);

  // consecutive frames of the interleaved stream belong to different sources
  std::size_t jumps = 0;
  for (std::size_t i = 1; i < stream.records.size(); ++i)
    if (oracles::naive_distance(stream.records[i - 1].vector, stream.records[i].vector) > 0.1)
      ++jumps;
  CHECK(jumps > stream.records.size() / 2);
}

TEST_CASE("synthesis emits normalized data") {
  SynthSpec spec;
  spec.seed = 65;
  spec.n_steps = 120;
  spec.interleave = true;
  auto stream = synth_stream(spec);
  CHECK(stream.scale == 1.0);
  double max_norm = stream.anchor.norm();
  for (const auto& rec : stream.records) max_norm = std::max(max_norm, rec.vector.norm());
  CHECK(max_norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("synth spec validation") {
  SynthSpec spec;
  spec.interleave = true;
  spec.distractor_clusters = 0;
  CHECK_THROWS_AS(synth_stream(spec), UsageError);
  spec = SynthSpec{};
  spec.latent_dim = 40;
  spec.dim = 8;
  CHECK_THROWS_AS(synth_stream(spec), UsageError);
  spec = SynthSpec{};
  spec.drift = -1.0;
  CHECK_THROWS_AS(synth_stream(spec), UsageError);
}

TEST_CASE("csv ingest: well formed") {
  std::istringstream in(
      "t,label,f0,f1\n"
      "-1,1,0.6,0.8\n"
      "0,1,0.6,0.7\n"
      "1,0,0.1,0.0\n");
  auto stream = ingest(in, StreamFormat::Csv, "mini.csv");
  CHECK(stream.anchor.size() == 2);
  REQUIRE(stream.records.size() == 2);
  CHECK(stream.records[0].true_label == 1);
  CHECK(stream.records[1].true_label == 0);
  CHECK(stream.scale == 1.0);  // max norm is already 1
  CHECK(stream.anchor[0] == 0.6);
}

TEST_CASE("csv ingest rescales unnormalized data and records the factor") {
  std::istringstream in(
      "t,label,f0,f1\n"
      "-1,1,3,4\n"
      "0,1,1,0\n");
  auto stream = ingest(in, StreamFormat::Csv, "big.csv");
  CHECK(stream.scale == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(stream.anchor.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stream.records[0].vector[0] == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("csv ingest: errors name the line") {
  SUBCASE("non-numeric field") {
    std::istringstream in("t,label,f0\n-1,1,0.5\n0,1,abc\n");
    CHECK_THROWS_WITH_AS(ingest(in, StreamFormat::Csv, "x.csv"),
                         doctest::Contains("x.csv:3"), DataError);
  }
  SUBCASE("missing anchor") {
    std::istringstream in("t,label,f0\n0,1,0.5\n");
    CHECK_THROWS_AS(ingest(in, StreamFormat::Csv, "x.csv"), DataError);
  }
  SUBCASE("duplicate anchor") {
    std::istringstream in("t,label,f0\n-1,1,0.5\n-1,1,0.4\n");
    CHECK_THROWS_AS(ingest(in, StreamFormat::Csv, "x.csv"), DataError);
  }
  SUBCASE("inconsistent dimension") {
    std::istringstream in("t,label,f0,f1\n-1,1,0.5,0.5\n0,1,0.5\n");
    CHECK_THROWS_AS(ingest(in, StreamFormat::Csv, "x.csv"), DataError);
  }
  SUBCASE("non-increasing t") {
    std::istringstream in("t,label,f0\n-1,1,0.5\n2,1,0.5\n1,1,0.4\n");
    CHECK_THROWS_AS(ingest(in, StreamFormat::Csv, "x.csv"), DataError);
  }
  SUBCASE("bad header") {
    std::istringstream in("a,b,c\n-1,1,0.5\n");
    CHECK_THROWS_AS(ingest(in, StreamFormat::Csv, "x.csv"), DataError);
  }
  SUBCASE("non-finite value") {
    std::istringstream in("t,label,f0\n-1,1,0.5\n0,1,nan\n");
    CHECK_THROWS_AS(ingest(in, StreamFormat::Csv, "x.csv"), DataError);
  }
}

TEST_CASE("jsonl ingest: well formed and malformed") {
  std::istringstream in(
      "{\"t\":-1,\"label\":1,\"x\":[0.6,0.8]}\n"
      "{\"t\":0,\"label\":0,\"x\":[0.1,0.2]}\n");
  auto stream = ingest(in, StreamFormat::Jsonl, "mini.jsonl");
  CHECK(stream.records.size() == 1);

  std::istringstream bad("{\"t\":-1,\"label\":1,\"x\":[0.6]}\nnot json\n");
  CHECK_THROWS_WITH_AS(ingest(bad, StreamFormat::Jsonl, "y.jsonl"),
                       doctest::Contains("y.jsonl:2"), DataError);

  std::istringstream wrong_type("{\"t\":-1,\"label\":1,\"x\":\"oops\"}\n");
  CHECK_THROWS_AS(ingest(wrong_type, StreamFormat::Jsonl, "z.jsonl"), DataError);
}

TEST_CASE("round trip: emit then ingest then emit is byte identical") {
  SynthSpec spec;
  spec.seed = 66;
  spec.n_steps = 40;
  spec.interleave = true;
  auto stream = synth_stream(spec);

  for (auto format : {StreamFormat::Csv, StreamFormat::Jsonl}) {
    std::ostringstream first;
    emit(stream, first, format);
    std::istringstream back(first.str());
    auto reparsed = ingest(back, format, "roundtrip");
    CHECK(reparsed.scale == 1.0);
    std::ostringstream second;
    emit(reparsed, second, format);
    CHECK(first.str() == second.str());
  }
}

TEST_CASE("format_from_path") {
  CHECK(format_from_path("a/b/stream.csv") == StreamFormat::Csv);
  CHECK(format_from_path("stream.jsonl") == StreamFormat::Jsonl);
  CHECK(format_from_path("stream.ndjson") == StreamFormat::Jsonl);
  CHECK(format_from_path("stream") == StreamFormat::Csv);
}

TEST_SUITE_END();
