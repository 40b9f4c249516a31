#include "combforge/combforge.h"

#include <cstring>
#include <string>
#include <variant>

#include <json.hpp>

#include "core/discrimination.hpp"
#include "core/io.hpp"

using namespace combforge;
using ojson = nlohmann::ordered_json;

struct cf_object {
  std::variant<OperatorDoc, DecompositionDoc, GroupDoc, RealizationDoc> doc;
};

namespace {

thread_local std::string g_last_error = "no error";

cf_status fail(cf_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

cf_status from_error(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Io: return fail(CF_ERR_IO, e.what());
    case ErrorCode::Schema: return fail(CF_ERR_SCHEMA, e.what());
    case ErrorCode::Argument:
    case ErrorCode::WireMismatch: return fail(CF_ERR_ARG, e.what());
    case ErrorCode::Verification: return fail(CF_VERIFY_FAIL, e.what());
    case ErrorCode::Numeric: return fail(CF_ERR_INTERNAL, e.what());
  }
  return fail(CF_ERR_INTERNAL, e.what());
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
cf_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return from_error(e);
  } catch (const std::exception& e) {
    return fail(CF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CF_ERR_INTERNAL, "unknown error");
  }
}

cf_object* wrap_parsed(const std::string& text) {
  switch (peek_kind(text)) {
    case DocKind::Operator: return new cf_object{parse_operator(text)};
    case DocKind::Decomposition: return new cf_object{parse_decomposition(text)};
    case DocKind::Group: return new cf_object{parse_group(text)};
    case DocKind::Realization: return new cf_object{parse_realization(text)};
  }
  throw Error(ErrorCode::Schema, "unknown document kind");
}

std::string to_text(const cf_object& obj) {
  return std::visit([](const auto& doc) { return serialize(doc); }, obj.doc);
}

const OperatorDoc& as_operator_doc(const cf_object* obj, const char* what) {
  if (!obj) throw Error(ErrorCode::Argument, std::string(what) + ": null object");
  if (!std::holds_alternative<OperatorDoc>(obj->doc))
    throw Error(ErrorCode::Argument, std::string(what) + ": expected an operator document");
  return std::get<OperatorDoc>(obj->doc);
}

const DecompositionDoc& as_decomposition_doc(const cf_object* obj, const char* what) {
  if (!obj) throw Error(ErrorCode::Argument, std::string(what) + ": null object");
  if (!std::holds_alternative<DecompositionDoc>(obj->doc))
    throw Error(ErrorCode::Argument, std::string(what) + ": expected a decomposition document");
  return std::get<DecompositionDoc>(obj->doc);
}

const GroupDoc& as_group_doc(const cf_object* obj, const char* what) {
  if (!obj) throw Error(ErrorCode::Argument, std::string(what) + ": null object");
  if (!std::holds_alternative<GroupDoc>(obj->doc))
    throw Error(ErrorCode::Argument, std::string(what) + ": expected a group document");
  return std::get<GroupDoc>(obj->doc);
}

void require_out(void* p, const char* what) {
  if (!p) throw Error(ErrorCode::Argument, std::string(what) + ": null output pointer");
}

std::string dump_line(const ojson& j) { return j.dump() + "\n"; }

}  // namespace

extern "C" {

const char* cf_version(void) { return "combforge 1.0.0"; }

const char* cf_last_error(void) { return g_last_error.c_str(); }

void cf_string_free(char* s) { std::free(s); }

void cf_object_free(cf_object* obj) { delete obj; }

cf_status cf_object_parse(const char* json_text, cf_object** out) {
  return guarded([&]() {
    require_out(out, "cf_object_parse");
    if (!json_text) throw Error(ErrorCode::Argument, "cf_object_parse: null text");
    *out = wrap_parsed(json_text);
    return CF_OK;
  });
}

cf_status cf_object_read_file(const char* path, cf_object** out) {
  return guarded([&]() {
    require_out(out, "cf_object_read_file");
    if (!path) throw Error(ErrorCode::Argument, "cf_object_read_file: null path");
    *out = wrap_parsed(read_text_file(path));
    return CF_OK;
  });
}

cf_status cf_object_write_file(const cf_object* obj, const char* path) {
  return guarded([&]() {
    if (!obj || !path) throw Error(ErrorCode::Argument, "cf_object_write_file: null argument");
    write_text_file(path, to_text(*obj));
    return CF_OK;
  });
}

cf_status cf_object_to_json(const cf_object* obj, char** json_out) {
  return guarded([&]() {
    require_out(json_out, "cf_object_to_json");
    if (!obj) throw Error(ErrorCode::Argument, "cf_object_to_json: null object");
    *json_out = dup_string(to_text(*obj));
    return CF_OK;
  });
}

cf_status cf_object_kind_of(const cf_object* obj, cf_object_kind* kind_out) {
  return guarded([&]() {
    require_out(kind_out, "cf_object_kind_of");
    if (!obj) throw Error(ErrorCode::Argument, "cf_object_kind_of: null object");
    *kind_out = static_cast<cf_object_kind>(obj->doc.index());
    return CF_OK;
  });
}

cf_status cf_validate(const cf_object* comb, double tol, char** report_out) {
  return guarded([&]() {
    require_out(report_out, "cf_validate");
    CombValue r = as_operator_doc(comb, "cf_validate").to_comb();
    ValidationReport rep = validate_deterministic(r, tol);
    *report_out = dup_string(validation_report_json(rep));
    return rep.pass() ? CF_OK : fail(CF_VERIFY_FAIL, "comb validation failed");
  });
}

cf_status cf_reduce(const cf_object* comb, int k, cf_object** out) {
  return guarded([&]() {
    require_out(out, "cf_reduce");
    CombValue r = as_operator_doc(comb, "cf_reduce").to_comb();
    CombValue red = reduce(r, k);
    *out = new cf_object{OperatorDoc::from_comb(red)};
    return CF_OK;
  });
}

cf_status cf_link(const cf_object* a, const cf_object* b, cf_object** out) {
  return guarded([&]() {
    require_out(out, "cf_link");
    ChoiMap ca = as_operator_doc(a, "cf_link").to_choi();
    ChoiMap cb = as_operator_doc(b, "cf_link").to_choi();
    *out = new cf_object{OperatorDoc::from_choi(link(ca, cb))};
    return CF_OK;
  });
}

cf_status cf_realize(const cf_object* comb, double tol, cf_object** realization_out,
                     char** report_out) {
  return guarded([&]() {
    require_out(realization_out, "cf_realize");
    CombValue r = as_operator_doc(comb, "cf_realize").to_comb();
    Realization real = realize(r, tol);
    RealizationDoc doc = RealizationDoc::from_realization(real);
    double defect = (link_chain(real.channels) - r.op).max_abs();
    if (report_out) {
      ojson j;
      j["pass"] = true;
      j["steps"] = doc.steps;
      j["tol"] = tol;
      j["relink_defect"] = defect;
      ojson mems = ojson::array();
      for (const auto& m : doc.memories) {
        ojson mj;
        mj["after_step"] = m.after_step;
        mj["quantum_dim"] = m.quantum_dim;
        mj["classical_dim"] = m.classical_dim;
        mems.push_back(std::move(mj));
      }
      j["memories"] = std::move(mems);
      j["completion"] = doc.completion_note;
      *report_out = dup_string(dump_line(j));
    }
    *realization_out = new cf_object{std::move(doc)};
    return CF_OK;
  });
}

cf_status cf_realization_channel_count(const cf_object* realization, size_t* count_out) {
  return guarded([&]() {
    require_out(count_out, "cf_realization_channel_count");
    if (!realization || !std::holds_alternative<RealizationDoc>(realization->doc))
      throw Error(ErrorCode::Argument, "expected a realization document");
    *count_out = std::get<RealizationDoc>(realization->doc).channels.size();
    return CF_OK;
  });
}

cf_status cf_realization_channel(const cf_object* realization, size_t index, cf_object** out) {
  return guarded([&]() {
    require_out(out, "cf_realization_channel");
    if (!realization || !std::holds_alternative<RealizationDoc>(realization->doc))
      throw Error(ErrorCode::Argument, "expected a realization document");
    const auto& doc = std::get<RealizationDoc>(realization->doc);
    if (index >= doc.channels.size())
      throw Error(ErrorCode::Argument, "channel index out of range");
    *out = new cf_object{doc.channels[index]};
    return CF_OK;
  });
}

cf_status cf_certify(const cf_object* comb, const cf_object* decomposition, int step, int dim,
                     double tol, char** report_out) {
  return guarded([&]() {
    require_out(report_out, "cf_certify");
    CombValue r = as_operator_doc(comb, "cf_certify").to_comb();
    auto parts = as_decomposition_doc(decomposition, "cf_certify").to_parts(r);
    CertifyResult res = certify_step(r, step, parts, dim, tol);
    *report_out = dup_string(certify_result_json(res));
    return res.pass ? CF_OK : fail(CF_VERIFY_FAIL, res.failure);
  });
}

cf_status cf_certify_multi(const cf_object* comb, const cf_object* decomposition, const int* steps,
                           const int* dims, size_t count, double tol, char** report_out) {
  return guarded([&]() {
    require_out(report_out, "cf_certify_multi");
    if (!steps || !dims || count == 0)
      throw Error(ErrorCode::Argument, "cf_certify_multi: empty steps/dims");
    CombValue r = as_operator_doc(comb, "cf_certify_multi").to_comb();
    std::vector<int> steps_v(steps, steps + count), dims_v(dims, dims + count);
    Decomposition d =
        as_decomposition_doc(decomposition, "cf_certify_multi").to_decomposition(r, steps_v);
    CertifyResult res = certify_multi(r, d, dims_v, tol);
    *report_out = dup_string(certify_result_json(res));
    return res.pass ? CF_OK : fail(CF_VERIFY_FAIL, res.failure);
  });
}

cf_status cf_channel_cost(const cf_object* choi, int restarts, uint64_t seed, double tol,
                          char** report_out) {
  return guarded([&]() {
    require_out(report_out, "cf_channel_cost");
    ChoiMap c = as_operator_doc(choi, "cf_channel_cost").to_choi();
    ChannelCostOptions opts;
    opts.restarts = restarts;
    opts.seed = seed;
    opts.tol = tol;
    CostCertificate cert = channel_cost_bounds(c, opts);
    *report_out = dup_string(certificate_json(cert));
    return CF_OK;
  });
}

cf_status cf_symmetry_bound(const cf_object* comb, const cf_object* group, int step, uint64_t seed,
                            double tol, char** report_out) {
  return guarded([&]() {
    require_out(report_out, "cf_symmetry_bound");
    CombValue r = as_operator_doc(comb, "cf_symmetry_bound").to_comb();
    GroupRep rep = as_group_doc(group, "cf_symmetry_bound").to_group();
    CostCertificate cert = symmetry_bound(r, rep, step, tol, seed);
    *report_out = dup_string(certificate_json(cert));
    return CF_OK;
  });
}

cf_status cf_discriminate(const cf_object* r0, const cf_object* r1, const char* method, int iters,
                          uint64_t seed, char** report_out) {
  return guarded([&]() {
    require_out(report_out, "cf_discriminate");
    CombValue a = as_operator_doc(r0, "cf_discriminate").to_comb();
    CombValue b = as_operator_doc(r1, "cf_discriminate").to_comb();
    OpnormOptions opts;
    opts.iters = iters;
    opts.seed = seed;
    std::string m = method ? method : "seesaw";
    if (m == "seesaw")
      opts.method = OpnormMethod::Seesaw;
    else if (m == "sampled")
      opts.method = OpnormMethod::Sampled;
    else
      throw Error(ErrorCode::Argument, "method must be 'seesaw' or 'sampled'");
    OpnormBound bound = opnorm_lower_bound(a, b, opts);
    ojson j;
    j["lower_bound"] = bound.value;
    j["best_error_prob"] = bound.best_pe;
    j["method"] = m;
    j["iters"] = iters;
    j["seed"] = seed;
    j["note"] = bound.method_note + "; reported value is a lower bound";
    *report_out = dup_string(dump_line(j));
    return CF_OK;
  });
}

cf_status cf_example(const char* family, int d, double param, cf_object** out, char** report_out) {
  return guarded([&]() {
    require_out(out, "cf_example");
    if (!family) throw Error(ErrorCode::Argument, "cf_example: null family");
    std::string f = family;
    ojson rj;
    rj["family"] = f;
    if (f == "isotropic") {
      ChoiMap c = isotropic_channel(d, param);
      rj["d"] = d;
      rj["alpha"] = param;
      rj["cost_dim"] = isotropic_cost(d, param);
      rj["log2_cost_dim"] = std::log2(static_cast<double>(isotropic_cost(d, param)));
      *out = new cf_object{OperatorDoc::from_choi(c)};
    } else if (f == "werner") {
      ChoiMap c = werner_channel(d, param);
      rj["d"] = d;
      rj["gamma"] = param;
      rj["cost_dim"] = werner_cost(d, param);
      rj["log2_cost_dim"] = std::log2(static_cast<double>(werner_cost(d, param)));
      *out = new cf_object{OperatorDoc::from_choi(c)};
    } else if (f == "upb") {
      CombValue rho = upb_shifts_state();
      rj["steps"] = 3;
      rj["note"] = "two-way separable at either cut, no product decomposition across both";
      *out = new cf_object{OperatorDoc::from_comb(rho)};
    } else if (f == "delay") {
      CombValue r = delay_comb(d);
      rj["d"] = d;
      rj["cost_dim"] = d;
      rj["note"] = "pure comb: memory dimension is exactly d";
      *out = new cf_object{OperatorDoc::from_comb(r)};
    } else {
      throw Error(ErrorCode::Argument, "unknown family '" + f + "'");
    }
    if (report_out) *report_out = dup_string(dump_line(rj));
    return CF_OK;
  });
}

}  // extern "C"
