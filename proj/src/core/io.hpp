#ifndef COMBFORGE_CORE_IO_HPP
#define COMBFORGE_CORE_IO_HPP

#include <string>
#include <vector>

#include "core/comb.hpp"
#include "core/memcert.hpp"
#include "core/symmetry.hpp"

namespace combforge {

enum class Direction { Input, Output, None };

struct AnnotatedWire {
  Wire wire;
  int step = 0;  // 0 = not part of a comb signature
  Direction direction = Direction::None;
};

/// In-memory form of an operator document: a labeled matrix whose wires may
/// carry comb-signature annotations (step + direction).
struct OperatorDoc {
  std::vector<AnnotatedWire> wires;
  Mat matrix;

  LabeledOperator to_operator() const;
  CombValue to_comb() const;  // needs contiguous steps 1..N and directions
  ChoiMap to_choi() const;    // needs a direction on every wire

  static OperatorDoc from_operator(const LabeledOperator& op);
  static OperatorDoc from_comb(const CombValue& comb);
  static OperatorDoc from_choi(const ChoiMap& choi);
};

struct DecompositionDoc {
  std::vector<int> steps;  // informational; flags take precedence
  struct Part {
    std::vector<int> index;
    Mat matrix;
  };
  std::vector<Part> parts;

  /// Parts as operators on the target comb's wires (matrices must match the
  /// target dimension; wire metadata is inherited from the target).
  std::vector<LabeledOperator> to_parts(const CombValue& target) const;
  Decomposition to_decomposition(const CombValue& target, const std::vector<int>& steps) const;
};

struct GroupDoc {
  std::vector<AnnotatedWire> wires;
  std::vector<Mat> elements;

  GroupRep to_group() const;
  static GroupDoc from_group(const GroupRep& rep);
};

struct RealizationMemory {
  int after_step = 0;
  std::string quantum_label, classical_label;
  int quantum_dim = 1, classical_dim = 1;
};

struct RealizationDoc {
  int steps = 0;
  std::vector<RealizationMemory> memories;
  std::vector<OperatorDoc> channels;
  std::string completion_note;

  static RealizationDoc from_realization(const Realization& real);
};

// Canonical text form: fixed key order, compact JSON, trailing newline.
// serialize(parse(text)) is byte-identical for canonical files and
// parse(serialize(doc)) reproduces doc exactly.
std::string serialize(const OperatorDoc& doc);
std::string serialize(const DecompositionDoc& doc);
std::string serialize(const GroupDoc& doc);
std::string serialize(const RealizationDoc& doc);

enum class DocKind { Operator, Decomposition, Group, Realization };

DocKind peek_kind(const std::string& text);
OperatorDoc parse_operator(const std::string& text);
DecompositionDoc parse_decomposition(const std::string& text);
GroupDoc parse_group(const std::string& text);
RealizationDoc parse_realization(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Report fragments shared by the C API and tests.
std::string validation_report_json(const ValidationReport& rep);
std::string certificate_json(const CostCertificate& cert);
std::string certify_result_json(const CertifyResult& res);

}  // namespace combforge

#endif
