#include "core/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace combforge {

using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kOperatorSchema = "combforge.operator/1";
constexpr const char* kDecompositionSchema = "combforge.decomposition/1";
constexpr const char* kGroupSchema = "combforge.group/1";
constexpr const char* kRealizationSchema = "combforge.realization/1";

[[noreturn]] void schema_error(const std::string& msg) { throw Error(ErrorCode::Schema, msg); }

ojson parse_json(const std::string& text) {
  try {
    return ojson::parse(text);
  } catch (const std::exception& e) {
    schema_error(std::string("invalid JSON: ") + e.what());
  }
}

std::string kind_name(WireKind k) { return k == WireKind::Quantum ? "quantum" : "classical"; }

WireKind kind_from(const std::string& s) {
  if (s == "quantum") return WireKind::Quantum;
  if (s == "classical") return WireKind::Classical;
  schema_error("wire kind must be 'quantum' or 'classical', got '" + s + "'");
}

std::string direction_name(Direction d) {
  switch (d) {
    case Direction::Input: return "input";
    case Direction::Output: return "output";
    case Direction::None: return "none";
  }
  return "none";
}

Direction direction_from(const std::string& s) {
  if (s == "input") return Direction::Input;
  if (s == "output") return Direction::Output;
  if (s == "none") return Direction::None;
  schema_error("wire direction must be 'input', 'output' or 'none', got '" + s + "'");
}

ojson wires_to_json(const std::vector<AnnotatedWire>& wires) {
  ojson arr = ojson::array();
  for (const auto& aw : wires) {
    ojson w;
    w["label"] = aw.wire.label;
    w["dim"] = aw.wire.dim;
    w["kind"] = kind_name(aw.wire.kind);
    w["step"] = aw.step;
    w["direction"] = direction_name(aw.direction);
    arr.push_back(std::move(w));
  }
  return arr;
}

std::vector<AnnotatedWire> wires_from_json(const ojson& arr) {
  if (!arr.is_array()) schema_error("'wires' must be an array");
  std::vector<AnnotatedWire> out;
  std::set<std::string> seen;
  for (const auto& w : arr) {
    if (!w.is_object()) schema_error("wire entries must be objects");
    for (const char* key : {"label", "dim", "kind", "step", "direction"})
      if (!w.contains(key)) schema_error(std::string("wire entry is missing '") + key + "'");
    AnnotatedWire aw;
    if (!w["label"].is_string()) schema_error("wire label must be a string");
    aw.wire.label = w["label"].get<std::string>();
    if (aw.wire.label.empty()) schema_error("wire label must be nonempty");
    if (!seen.insert(aw.wire.label).second)
      schema_error("duplicate wire label '" + aw.wire.label + "'");
    if (!w["dim"].is_number_integer() || w["dim"].get<long>() < 1)
      schema_error("wire dim must be a positive integer");
    aw.wire.dim = w["dim"].get<int>();
    aw.wire.kind = kind_from(w["kind"].get<std::string>());
    if (!w["step"].is_number_integer() || w["step"].get<long>() < 0)
      schema_error("wire step must be a nonnegative integer");
    aw.step = w["step"].get<int>();
    aw.direction = direction_from(w["direction"].get<std::string>());
    out.push_back(std::move(aw));
  }
  return out;
}

ojson matrix_to_json(const Mat& m) {
  ojson re = ojson::array();
  ojson im = ojson::array();
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  ojson out;
  out["re"] = std::move(re);
  out["im"] = std::move(im);
  return out;
}

Mat matrix_from_json(const ojson& j, long dim) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    schema_error("'matrix' must be an object with 're' and 'im' arrays");
  const auto& re = j["re"];
  const auto& im = j["im"];
  if (!re.is_array() || !im.is_array()) schema_error("matrix 're'/'im' must be arrays");
  if (static_cast<long>(re.size()) != dim * dim || static_cast<long>(im.size()) != dim * dim)
    schema_error("matrix arrays have length " + std::to_string(re.size()) + ", expected " +
                 std::to_string(dim * dim));
  Mat m(dim, dim);
  long k = 0;
  for (long i = 0; i < dim; ++i)
    for (long j2 = 0; j2 < dim; ++j2, ++k) {
      if (!re[k].is_number() || !im[k].is_number()) schema_error("matrix entries must be numbers");
      double r = re[k].get<double>();
      double c = im[k].get<double>();
      if (!std::isfinite(r) || !std::isfinite(c)) schema_error("matrix entries must be finite");
      m(i, j2) = cxd(r, c);
    }
  return m;
}

long dim_of_wires(const std::vector<AnnotatedWire>& wires) {
  long d = 1;
  for (const auto& aw : wires) d *= aw.wire.dim;
  return d;
}

std::string dump(const ojson& j) { return j.dump() + "\n"; }

}  // namespace

// ----------------------------------------------------------- operator docs

LabeledOperator OperatorDoc::to_operator() const {
  std::vector<Wire> ws;
  for (const auto& aw : wires) ws.push_back(aw.wire);
  return LabeledOperator(ws, matrix);
}

CombValue OperatorDoc::to_comb() const {
  bool any_step = false;
  for (const auto& aw : wires) any_step = any_step || aw.step > 0;
  int n = 0;
  for (const auto& aw : wires) {
    // a direction-annotated document without steps is a single-step strategy
    int step = any_step ? aw.step : 1;
    if (step < 1) schema_error("comb wire '" + aw.wire.label + "' has no step");
    if (aw.direction == Direction::None)
      schema_error("comb wire '" + aw.wire.label + "' has no direction");
    n = std::max(n, step);
  }
  if (n < 1) schema_error("comb document has no steps");
  CombSignature sig;
  sig.steps.resize(n);
  for (const auto& aw : wires) {
    auto& step = sig.steps[(any_step ? aw.step : 1) - 1];
    (aw.direction == Direction::Input ? step.inputs : step.outputs).push_back(aw.wire);
  }
  for (int k = 1; k <= n; ++k)
    if (sig.steps[k - 1].inputs.empty() && sig.steps[k - 1].outputs.empty())
      schema_error("comb document is missing step " + std::to_string(k) +
                   " (dim-1 wires must be listed explicitly)");
  return CombValue(sig, to_operator());
}

ChoiMap OperatorDoc::to_choi() const {
  std::vector<std::string> ins, outs;
  for (const auto& aw : wires) {
    if (aw.direction == Direction::Input)
      ins.push_back(aw.wire.label);
    else if (aw.direction == Direction::Output)
      outs.push_back(aw.wire.label);
    else
      schema_error("choi wire '" + aw.wire.label + "' has no direction");
  }
  return ChoiMap(to_operator(), std::move(ins), std::move(outs));
}

OperatorDoc OperatorDoc::from_operator(const LabeledOperator& op) {
  OperatorDoc doc;
  for (const auto& w : op.wires()) doc.wires.push_back({w, 0, Direction::None});
  doc.matrix = op.mat();
  return doc;
}

OperatorDoc OperatorDoc::from_comb(const CombValue& comb) {
  OperatorDoc doc;
  for (int k = 1; k <= comb.sig.num_steps(); ++k) {
    for (const auto& w : comb.sig.steps[k - 1].inputs)
      doc.wires.push_back({w, k, Direction::Input});
    for (const auto& w : comb.sig.steps[k - 1].outputs)
      doc.wires.push_back({w, k, Direction::Output});
  }
  doc.matrix = comb.op.mat();  // CombValue stores the canonical order
  return doc;
}

OperatorDoc OperatorDoc::from_choi(const ChoiMap& choi) {
  OperatorDoc doc;
  std::set<std::string> ins(choi.ins.begin(), choi.ins.end());
  for (const auto& w : choi.op.wires())
    doc.wires.push_back({w, 0, ins.count(w.label) ? Direction::Input : Direction::Output});
  doc.matrix = choi.op.mat();
  return doc;
}

std::string serialize(const OperatorDoc& doc) {
  ojson j;
  j["schema"] = kOperatorSchema;
  j["wires"] = wires_to_json(doc.wires);
  j["matrix"] = matrix_to_json(doc.matrix);
  return dump(j);
}

OperatorDoc parse_operator(const std::string& text) {
  ojson j = parse_json(text);
  if (!j.is_object() || j.value("schema", "") != kOperatorSchema)
    schema_error(std::string("expected schema '") + kOperatorSchema + "'");
  if (!j.contains("wires") || !j.contains("matrix")) schema_error("missing 'wires' or 'matrix'");
  OperatorDoc doc;
  doc.wires = wires_from_json(j["wires"]);
  doc.matrix = matrix_from_json(j["matrix"], dim_of_wires(doc.wires));
  return doc;
}

// ------------------------------------------------------ decomposition docs

std::vector<LabeledOperator> DecompositionDoc::to_parts(const CombValue& target) const {
  std::vector<LabeledOperator> out;
  for (const auto& p : parts) {
    if (p.matrix.rows() != target.op.dim())
      schema_error("decomposition part has dimension " + std::to_string(p.matrix.rows()) +
                   ", the comb has " + std::to_string(target.op.dim()));
    out.emplace_back(target.op.wires(), p.matrix);
  }
  return out;
}

Decomposition DecompositionDoc::to_decomposition(const CombValue& target,
                                                 const std::vector<int>& use_steps) const {
  Decomposition d;
  d.steps = use_steps;
  for (const auto& p : parts) {
    if (p.index.size() != use_steps.size())
      schema_error("decomposition part index depth " + std::to_string(p.index.size()) +
                   " does not match the number of steps " + std::to_string(use_steps.size()));
    if (p.matrix.rows() != target.op.dim())
      schema_error("decomposition part has the wrong dimension");
    d.parts.push_back({p.index, LabeledOperator(target.op.wires(), p.matrix)});
  }
  return d;
}

std::string serialize(const DecompositionDoc& doc) {
  ojson j;
  j["schema"] = kDecompositionSchema;
  j["steps"] = doc.steps;
  ojson parts = ojson::array();
  for (const auto& p : doc.parts) {
    ojson pj;
    pj["index"] = p.index;
    pj["matrix"] = matrix_to_json(p.matrix);
    parts.push_back(std::move(pj));
  }
  j["parts"] = std::move(parts);
  return dump(j);
}

DecompositionDoc parse_decomposition(const std::string& text) {
  ojson j = parse_json(text);
  if (!j.is_object() || j.value("schema", "") != kDecompositionSchema)
    schema_error(std::string("expected schema '") + kDecompositionSchema + "'");
  DecompositionDoc doc;
  if (j.contains("steps")) {
    if (!j["steps"].is_array()) schema_error("'steps' must be an array");
    for (const auto& s : j["steps"]) {
      if (!s.is_number_integer()) schema_error("'steps' entries must be integers");
      doc.steps.push_back(s.get<int>());
    }
  }
  if (!j.contains("parts") || !j["parts"].is_array() || j["parts"].empty())
    schema_error("'parts' must be a nonempty array");
  for (const auto& pj : j["parts"]) {
    if (!pj.is_object() || !pj.contains("matrix")) schema_error("part entries need a 'matrix'");
    DecompositionDoc::Part p;
    if (pj.contains("index")) {
      if (!pj["index"].is_array()) schema_error("part 'index' must be an array");
      for (const auto& i : pj["index"]) {
        if (!i.is_number_integer() || i.get<long>() < 0)
          schema_error("part index entries must be nonnegative integers");
        p.index.push_back(i.get<int>());
      }
    } else {
      p.index.push_back(static_cast<int>(doc.parts.size()));
    }
    const auto& re = pj["matrix"].contains("re") ? pj["matrix"]["re"] : ojson();
    if (!re.is_array()) schema_error("part matrix must contain 're'/'im' arrays");
    auto dim = static_cast<long>(std::llround(std::sqrt(static_cast<double>(re.size()))));
    p.matrix = matrix_from_json(pj["matrix"], dim);
    doc.parts.push_back(std::move(p));
  }
  return doc;
}

// -------------------------------------------------------------- group docs

GroupRep GroupDoc::to_group() const {
  std::vector<Wire> ws;
  for (const auto& aw : wires) ws.push_back(aw.wire);
  GroupRep rep;
  for (const auto& e : elements) rep.elements.emplace_back(ws, e);
  if (rep.elements.empty()) schema_error("group document has no elements");
  return rep;
}

GroupDoc GroupDoc::from_group(const GroupRep& rep) {
  GroupDoc doc;
  const auto& wires = rep.elements.front().wires();
  for (const auto& w : wires) doc.wires.push_back({w, 0, Direction::None});
  for (const auto& e : rep.elements) doc.elements.push_back(e.aligned_to(wires).mat());
  return doc;
}

std::string serialize(const GroupDoc& doc) {
  ojson j;
  j["schema"] = kGroupSchema;
  j["wires"] = wires_to_json(doc.wires);
  ojson elems = ojson::array();
  for (const auto& e : doc.elements) elems.push_back(matrix_to_json(e));
  j["elements"] = std::move(elems);
  return dump(j);
}

GroupDoc parse_group(const std::string& text) {
  ojson j = parse_json(text);
  if (!j.is_object() || j.value("schema", "") != kGroupSchema)
    schema_error(std::string("expected schema '") + kGroupSchema + "'");
  if (!j.contains("wires") || !j.contains("elements")) schema_error("missing 'wires'/'elements'");
  GroupDoc doc;
  doc.wires = wires_from_json(j["wires"]);
  if (!j["elements"].is_array() || j["elements"].empty())
    schema_error("'elements' must be a nonempty array");
  long dim = dim_of_wires(doc.wires);
  for (const auto& e : j["elements"]) doc.elements.push_back(matrix_from_json(e, dim));
  return doc;
}

// -------------------------------------------------------- realization docs

RealizationDoc RealizationDoc::from_realization(const Realization& real) {
  RealizationDoc doc;
  doc.steps = static_cast<int>(real.channels.size());
  doc.completion_note = real.completion_note;
  for (size_t k = 0; k + 1 < real.channels.size(); ++k) {
    RealizationMemory mem;
    mem.after_step = static_cast<int>(k + 1);
    mem.quantum_dim = real.memory_dims[k].first;
    mem.classical_dim = real.memory_dims[k].second;
    // memory wires are the outputs of channel k shared with channel k+1
    for (const auto& w : real.channels[k].out_wires()) {
      for (const auto& l : real.channels[k + 1].ins)
        if (l == w.label) {
          if (w.kind == WireKind::Classical)
            mem.classical_label = w.label;
          else
            mem.quantum_label = w.label;
        }
    }
    doc.memories.push_back(std::move(mem));
  }
  for (const auto& ch : real.channels) doc.channels.push_back(OperatorDoc::from_choi(ch));
  return doc;
}

std::string serialize(const RealizationDoc& doc) {
  ojson j;
  j["schema"] = kRealizationSchema;
  j["steps"] = doc.steps;
  ojson mems = ojson::array();
  for (const auto& m : doc.memories) {
    ojson mj;
    mj["after_step"] = m.after_step;
    mj["quantum_label"] = m.quantum_label;
    mj["quantum_dim"] = m.quantum_dim;
    mj["classical_label"] = m.classical_label;
    mj["classical_dim"] = m.classical_dim;
    mems.push_back(std::move(mj));
  }
  j["memories"] = std::move(mems);
  j["completion"] = doc.completion_note;
  ojson chans = ojson::array();
  for (const auto& ch : doc.channels) {
    ojson cj;
    cj["wires"] = wires_to_json(ch.wires);
    cj["matrix"] = matrix_to_json(ch.matrix);
    chans.push_back(std::move(cj));
  }
  j["channels"] = std::move(chans);
  return dump(j);
}

RealizationDoc parse_realization(const std::string& text) {
  ojson j = parse_json(text);
  if (!j.is_object() || j.value("schema", "") != kRealizationSchema)
    schema_error(std::string("expected schema '") + kRealizationSchema + "'");
  RealizationDoc doc;
  doc.steps = j.value("steps", 0);
  doc.completion_note = j.value("completion", "");
  if (j.contains("memories"))
    for (const auto& mj : j["memories"]) {
      RealizationMemory m;
      m.after_step = mj.value("after_step", 0);
      m.quantum_label = mj.value("quantum_label", "");
      m.quantum_dim = mj.value("quantum_dim", 1);
      m.classical_label = mj.value("classical_label", "");
      m.classical_dim = mj.value("classical_dim", 1);
      doc.memories.push_back(std::move(m));
    }
  if (!j.contains("channels") || !j["channels"].is_array())
    schema_error("'channels' must be an array");
  for (const auto& cj : j["channels"]) {
    OperatorDoc ch;
    if (!cj.contains("wires") || !cj.contains("matrix"))
      schema_error("channel entries need 'wires' and 'matrix'");
    ch.wires = wires_from_json(cj["wires"]);
    ch.matrix = matrix_from_json(cj["matrix"], dim_of_wires(ch.wires));
    doc.channels.push_back(std::move(ch));
  }
  return doc;
}

// ------------------------------------------------------------------- misc

DocKind peek_kind(const std::string& text) {
  ojson j = parse_json(text);
  std::string schema = j.is_object() ? j.value("schema", "") : "";
  if (schema == kOperatorSchema) return DocKind::Operator;
  if (schema == kDecompositionSchema) return DocKind::Decomposition;
  if (schema == kGroupSchema) return DocKind::Group;
  if (schema == kRealizationSchema) return DocKind::Realization;
  schema_error("unknown or missing schema '" + schema + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

// ---------------------------------------------------------------- reports

std::string validation_report_json(const ValidationReport& rep) {
  ojson j;
  j["pass"] = rep.pass();
  j["tol"] = rep.tol;
  j["worst_defect"] = rep.worst();
  j["hermiticity_defect"] = rep.hermiticity_defect;
  j["psd_defect"] = rep.psd_defect;
  j["trace_defect"] = rep.trace_defect;
  j["step_defects"] = rep.step_defects;
  j["classical_defect"] = rep.classical_defect;
  return dump(j);
}

namespace {
ojson certificate_fragment(const CostCertificate& cert) {
  ojson j;
  ojson bounds = ojson::array();
  for (const auto& b : cert.bounds) {
    ojson bj;
    bj["step"] = b.step;
    bj["d_lo"] = b.d_lo;
    bj["d_hi"] = b.d_hi;
    bounds.push_back(std::move(bj));
  }
  j["bounds"] = std::move(bounds);
  j["max_d_hi"] = cert.max_d_hi();
  j["log2_max_d_hi"] = cert.log2_max_d_hi();
  j["evidence"] = evidence_name(cert.evidence);
  j["note"] = cert.note;
  j["tol"] = cert.tol;
  return j;
}
}  // namespace

std::string certificate_json(const CostCertificate& cert) {
  return dump(certificate_fragment(cert));
}

std::string certify_result_json(const CertifyResult& res) {
  ojson j;
  j["pass"] = res.pass;
  if (!res.pass) j["failure"] = res.failure;
  j["sum_defect"] = res.sum_defect;
  j["worst_part_defect"] = res.worst_part_defect;
  if (!res.part_ranks.empty()) j["part_ranks"] = res.part_ranks;
  if (res.pass) j["certificate"] = certificate_fragment(res.certificate);
  j["tol"] = res.certificate.tol;
  return dump(j);
}

}  // namespace combforge
