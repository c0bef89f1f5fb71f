#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "glassmsg/grammar.hpp"
#include "glassmsg/metrics.hpp"
#include "glassmsg/serialize.hpp"
#include "glassmsg/session.hpp"
#include "glassmsg/trace.hpp"
#include "glassmsg/utf8.hpp"
#include "glassmsg/wire.hpp"

namespace py = pybind11;
using namespace glassmsg;

namespace {

py::object to_py(const json& j) {
  return py::module_::import("json").attr("loads")(j.dump(-1, ' ', false, json::error_handler_t::replace));
}

json from_py(const py::handle& obj) {
  return json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

py::list effects_to_py(const std::vector<Effect>& effects) {
  py::list out;
  for (const auto& e : effects) out.append(to_py(to_json(e)));
  return out;
}

InterpreterMode mode_from(const std::string& mode) {
  if (mode == "command") return InterpreterMode::Command;
  if (mode == "dictation") return InterpreterMode::Dictation;
  throw std::invalid_argument("mode must be 'command' or 'dictation'");
}

py::tuple rational(const Rational& r) { return py::make_tuple(r.numerator(), r.denominator()); }

WireFrame frame_from(const std::string& type, std::string id, std::string from, std::string to, std::string body,
                     std::int64_t ts, std::int64_t seq) {
  const auto t = frame_type_from_string(type);
  if (!t) throw std::invalid_argument("unknown frame type: " + type);
  return WireFrame{.type = *t, .id = std::move(id), .from = std::move(from), .to = std::move(to),
                   .body = std::move(body), .ts = ts, .seq = seq};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Session engine, grammar, wire codec and metrics";

  py::register_exception<FrameError>(m, "FrameError", PyExc_ValueError);
  py::register_exception<TraceError>(m, "TraceError", PyExc_ValueError);

  m.def(
      "parse_utterance",
      [](const std::string& text, const std::string& mode, const std::vector<std::string>& contacts) {
        const Command c = parse_utterance(text, mode_from(mode), contacts);
        py::dict d;
        d["kind"] = std::string(to_string(c.kind));
        d["text"] = c.text;
        d["notification_id"] = c.notification_id ? py::cast(*c.notification_id) : py::none();
        return d;
      },
      py::arg("text"), py::arg("mode") = "command", py::arg("contacts") = std::vector<std::string>{});

  py::class_<Session>(m, "Session")
      .def(py::init([](const std::vector<std::string>& contacts, std::int64_t silence_gap_ms, std::int64_t start_ms) {
             SessionConfig cfg;
             cfg.silence_gap_ms = silence_gap_ms;
             return Session(cfg, contacts, start_ms);
           }),
           py::arg("contacts") = std::vector<std::string>{}, py::arg("silence_gap_ms") = 2000, py::arg("start_ms") = 0)
      .def(
          "event",
          [](Session& s, const py::object& payload, std::int64_t t) {
            return effects_to_py(dispatch(s, payload_from_json(from_py(payload)), t));
          },
          py::arg("payload"), py::arg("t"), "Applies a trace event such as {'kind': 'utterance', 'text': 'show chat'}.")
      .def(
          "utterance", [](Session& s, const std::string& text, std::int64_t t) { return effects_to_py(s.utterance(text, t)); },
          py::arg("text"), py::arg("t"))
      .def(
          "incoming",
          [](Session& s, const std::string& sender, const std::string& body, std::int64_t t, std::string id) {
            if (id.empty()) id = sender + "-" + std::to_string(t);
            return effects_to_py(s.incoming(Message{id, sender, s.config().self_name, body, t}, t));
          },
          py::arg("sender"), py::arg("body"), py::arg("t"), py::arg("id") = "")
      .def("tick", [](Session& s, std::int64_t t) { return effects_to_py(s.tick(t)); }, py::arg("t"))
      .def("state", [](const Session& s) { return to_py(to_json(s.state())); })
      .def("render", [](const Session& s) { return to_py(to_json(s.render())); })
      .def("effect_log", [](const Session& s) { return write_effect_log(s.log()); });

  m.def(
      "replay",
      [](const std::string& trace_text, std::optional<std::int64_t> silence_gap_ms) {
        const auto r = replay(parse_trace(trace_text), silence_gap_ms);
        py::dict d;
        d["report"] = to_py(to_json(r.report));
        d["final_state"] = to_py(to_json(r.final_state));
        d["effects"] = write_effect_log(r.log);
        return d;
      },
      py::arg("trace_text"), py::arg("silence_gap_ms") = py::none());

  m.def(
      "encode_frame",
      [](const std::string& type, std::string id, std::string from, std::string to, std::string body, std::int64_t ts,
         std::int64_t seq) { return encode(frame_from(type, id, from, to, body, ts, seq)); },
      py::arg("type"), py::arg("id") = "", py::arg("from_") = "", py::arg("to") = "", py::arg("body") = "",
      py::arg("ts") = 0, py::arg("seq") = 0);
  m.def(
      "decode_frame", [](const std::string& line) { return to_py(json::parse(encode(decode(line)))); },
      py::arg("line"));

  m.def(
      "error_rate", [](const std::string& produced, const std::string& reference) {
        return rational(error_rate(produced, reference));
      },
      py::arg("produced"), py::arg("reference"));
  m.def(
      "edit_distance",
      [](const std::string& a, const std::string& b) { return edit_distance(utf8::decode(a), utf8::decode(b)); },
      py::arg("a"), py::arg("b"));
}
