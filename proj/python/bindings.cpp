#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "omt/eval.hpp"
#include "omt/recognizer.hpp"
#include "omt/streams.hpp"

namespace py = pybind11;
using namespace omt;

PYBIND11_MODULE(_omt, m) {
  m.doc() = "Streaming one-class recognition from a single labeled example";

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<OmtConfig>(m, "OmtConfig")
      .def(py::init<>())
      .def_readwrite("generalization_radius", &OmtConfig::generalization_radius)
      .def_readwrite("max_representatives", &OmtConfig::max_representatives)
      .def_readwrite("initial_cover_radius", &OmtConfig::initial_cover_radius)
      .def_readwrite("heat_sigma", &OmtConfig::heat_sigma)
      .def_readwrite("sink_gamma", &OmtConfig::sink_gamma)
      .def_readwrite("recognition_threshold", &OmtConfig::recognition_threshold)
      .def_readwrite("labeled_anchor", &OmtConfig::labeled_anchor)
      .def_static("default_sink_gamma", &OmtConfig::default_sink_gamma)
      .def("validate", &OmtConfig::validate);

  py::class_<Representative>(m, "Representative")
      .def_readonly("stream_index", &Representative::stream_index)
      .def_readonly("vector", &Representative::vector);

  py::class_<CoverState>(m, "CoverState")
      .def_readonly("representatives", &CoverState::representatives)
      .def_readonly("cover_radius", &CoverState::cover_radius)
      .def_readonly("doubling_count", &CoverState::doubling_count)
      .def("__len__", &CoverState::size);

  py::class_<Prediction>(m, "Prediction")
      .def_readonly("gated", &Prediction::gated)
      .def_readonly("nearest_index", &Prediction::nearest_index)
      .def_readonly("score", &Prediction::score)
      .def_readonly("identity", &Prediction::identity)
      .def("__repr__", [](const Prediction& p) {
        std::ostringstream out;
        out << "Prediction(gated=" << (p.gated ? "True" : "False")
            << ", identity=" << p.identity;
        if (p.score) out << ", score=" << *p.score;
        out << ")";
        return out.str();
      });

  py::class_<OmtRecognizer>(m, "OmtRecognizer")
      .def(py::init<OmtConfig>(), py::arg("config"))
      .def("process_step", &OmtRecognizer::process_step, py::arg("x"))
      .def_property_readonly("config", &OmtRecognizer::config)
      .def_property_readonly("cover", &OmtRecognizer::cover)
      .def_property_readonly("step_count", &OmtRecognizer::step_count)
      .def("save_snapshot",
           [](const OmtRecognizer& rec) {
             std::ostringstream out;
             rec.save_snapshot(out);
             return out.str();
           })
      .def_static("load_snapshot", [](const std::string& text) {
        std::istringstream in(text);
        return OmtRecognizer::load_snapshot(in);
      });

  py::class_<NnRecognizer>(m, "NnRecognizer")
      .def(py::init<std::vector<FeatureVector>, double>(), py::arg("anchors"), py::arg("radius"))
      .def("score", &NnRecognizer::score, py::arg("x"))
      .def("classify", &NnRecognizer::classify, py::arg("x"));

  m.def("distance", &distance, py::arg("a"), py::arg("b"));
  m.def("similarity", &similarity, py::arg("a"), py::arg("b"), py::arg("sigma"));
  m.def(
      "normalize_dataset",
      [](std::vector<FeatureVector> vectors) {
        auto result = normalize_dataset(std::move(vectors));
        return py::make_tuple(result.vectors, result.scale);
      },
      py::arg("vectors"));

  py::class_<StreamRecord>(m, "StreamRecord")
      .def_readonly("t", &StreamRecord::t)
      .def_readonly("vector", &StreamRecord::vector)
      .def_readonly("true_label", &StreamRecord::true_label);

  py::class_<SynthSpec>(m, "SynthSpec")
      .def(py::init<>())
      .def_readwrite("seed", &SynthSpec::seed)
      .def_readwrite("dim", &SynthSpec::dim)
      .def_readwrite("n_steps", &SynthSpec::n_steps)
      .def_readwrite("latent_dim", &SynthSpec::latent_dim)
      .def_readwrite("start_offset", &SynthSpec::start_offset)
      .def_readwrite("drift", &SynthSpec::drift)
      .def_readwrite("noise", &SynthSpec::noise)
      .def_readwrite("extent", &SynthSpec::extent)
      .def_readwrite("distractor_clusters", &SynthSpec::distractor_clusters)
      .def_readwrite("distractor_spread", &SynthSpec::distractor_spread)
      .def_readwrite("distractor_min_distance", &SynthSpec::distractor_min_distance)
      .def_readwrite("distractor_max_distance", &SynthSpec::distractor_max_distance)
      .def_readwrite("interleave", &SynthSpec::interleave);

  py::class_<Stream>(m, "Stream")
      .def_readonly("anchor", &Stream::anchor)
      .def_readonly("records", &Stream::records)
      .def_readonly("scale", &Stream::scale)
      .def("__len__", [](const Stream& s) { return s.records.size(); });

  m.def("synth_stream", &synth_stream, py::arg("spec"));
  m.def("ingest_file", py::overload_cast<const std::string&>(&ingest_file), py::arg("path"));
  m.def(
      "emit_file",
      [](const Stream& stream, const std::string& path) {
        emit_file(stream, path, format_from_path(path));
      },
      py::arg("stream"), py::arg("path"));

  py::class_<RocPoint>(m, "RocPoint")
      .def_readonly("threshold", &RocPoint::threshold)
      .def_readonly("tpr", &RocPoint::tpr)
      .def_readonly("fpr", &RocPoint::fpr);

  py::class_<RocCurve>(m, "RocCurve")
      .def_readonly("points", &RocCurve::points)
      .def_readonly("auc", &RocCurve::auc);

  m.def("confusion", &confusion, py::arg("predictions"), py::arg("labels"));
  m.def("roc_sweep_omt", &roc_sweep_omt, py::arg("stream"), py::arg("config"),
        py::arg("epsilons"));
  m.def("roc_sweep_nn", &roc_sweep_nn, py::arg("stream"), py::arg("anchors"), py::arg("radii"));
  m.def("tpr_at_fpr", &tpr_at_fpr, py::arg("curve"), py::arg("fpr"));
  m.def("cover_error", &cover_error, py::arg("gated_history"), py::arg("state"));

  m.attr("__version__") = "0.1.0";
}
