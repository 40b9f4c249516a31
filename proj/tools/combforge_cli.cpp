// Command-line front end for the combforge shared library. All verification
// logic lives behind the C API; this tool only parses arguments, moves JSON
// documents around and maps statuses to exit codes:
//   0 = pass/success, 1 = verification failure, 2 = I/O, schema or usage error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "combforge/combforge.h"

namespace {

using ojson = nlohmann::ordered_json;

struct ObjectDeleter {
  void operator()(cf_object* o) const { cf_object_free(o); }
};
using ObjectPtr = std::unique_ptr<cf_object, ObjectDeleter>;

struct StringDeleter {
  void operator()(char* s) const { cf_string_free(s); }
};
using StringPtr = std::unique_ptr<char, StringDeleter>;

int exit_code(cf_status status) {
  switch (status) {
    case CF_OK: return 0;
    case CF_VERIFY_FAIL: return 1;
    default: return 2;
  }
}

[[noreturn]] void bail(cf_status status) {
  ojson j;
  j["error"] = cf_last_error();
  j["status"] = static_cast<int>(status);
  std::cout << j.dump() << "\n";
  std::exit(exit_code(status));
}

ObjectPtr load(const std::string& path) {
  cf_object* obj = nullptr;
  cf_status st = cf_object_read_file(path.c_str(), &obj);
  if (st != CF_OK) bail(st);
  return ObjectPtr(obj);
}

void emit_object(const cf_object* obj, const std::string& out_path) {
  if (out_path.empty()) {
    char* text = nullptr;
    cf_status st = cf_object_to_json(obj, &text);
    if (st != CF_OK) bail(st);
    StringPtr guard(text);
    std::cout << text;
  } else {
    cf_status st = cf_object_write_file(obj, out_path.c_str());
    if (st != CF_OK) bail(st);
  }
}

double default_tol() {
  if (const char* env = std::getenv("COMBFORGE_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && v > 0) return v;
    std::cerr << "warning: ignoring invalid COMBFORGE_TOL\n";
  }
  return 1e-8;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"combforge: quantum comb calculus and memory-cost certificates"};
  app.require_subcommand(1);
  double tol = default_tol();

  // validate
  std::string validate_comb;
  auto* validate = app.add_subcommand("validate", "check the deterministic comb normalization");
  validate->add_option("comb", validate_comb, "comb operator file")->required();
  validate->add_option("--tol", tol, "numerical tolerance");

  // reduce
  std::string reduce_comb, reduce_out;
  int reduce_k = 0;
  auto* reduce = app.add_subcommand("reduce", "k-step reduced comb");
  reduce->add_option("comb", reduce_comb)->required();
  reduce->add_option("--k", reduce_k, "number of steps to keep")->required();
  reduce->add_option("-o,--out", reduce_out, "output file (stdout if omitted)");

  // link
  std::string link_a, link_b, link_out;
  auto* link_cmd = app.add_subcommand("link", "link product of two Choi documents");
  link_cmd->add_option("a", link_a)->required();
  link_cmd->add_option("b", link_b)->required();
  link_cmd->add_option("-o,--out", link_out);

  // realize
  std::string realize_comb, realize_dir;
  auto* realize = app.add_subcommand("realize", "channels-with-memory realization");
  realize->add_option("comb", realize_comb)->required();
  realize->add_option("--out-dir", realize_dir, "directory for channel files")->required();
  realize->add_option("--tol", tol);

  // certify
  std::string certify_comb, certify_decomp;
  int certify_step = 1, certify_dim = 1;
  auto* certify = app.add_subcommand("certify", "single-step memory certificate");
  certify->add_option("comb", certify_comb)->required();
  certify->add_option("decomp", certify_decomp)->required();
  certify->add_option("--step", certify_step)->required();
  certify->add_option("--dim", certify_dim)->required();
  certify->add_option("--tol", tol);

  // certify-multi
  std::string multi_comb, multi_decomp;
  std::vector<int> multi_steps, multi_dims;
  auto* certify_multi = app.add_subcommand("certify-multi", "nested multi-step certificate");
  certify_multi->add_option("comb", multi_comb)->required();
  certify_multi->add_option("decomp", multi_decomp)->required();
  certify_multi->add_option("--steps", multi_steps, "steps, ascending")->required();
  certify_multi->add_option("--dims", multi_dims, "target dimensions per step")->required();
  certify_multi->add_option("--tol", tol);

  // cost-channel
  std::string cost_choi;
  int cost_restarts = 0;
  std::uint64_t cost_seed = 0;
  auto* cost = app.add_subcommand("cost-channel", "memory bounds for a channel Choi operator");
  cost->add_option("choi", cost_choi)->required();
  cost->add_option("--restarts", cost_restarts, "decomposition search restarts (0 = off)");
  cost->add_option("--seed", cost_seed);
  cost->add_option("--tol", tol);

  // symmetry-bound
  std::string sym_comb, sym_group;
  int sym_step = 1;
  std::uint64_t sym_seed = 0;
  auto* sym = app.add_subcommand("symmetry-bound", "memory bound from a commuting group");
  sym->add_option("comb", sym_comb)->required();
  sym->add_option("group", sym_group)->required();
  sym->add_option("--step", sym_step)->required();
  sym->add_option("--seed", sym_seed);
  sym->add_option("--tol", tol);

  // discriminate
  std::string dis_r0, dis_r1, dis_method = "seesaw";
  int dis_iters = 50;
  std::uint64_t dis_seed = 0;
  auto* dis = app.add_subcommand("discriminate", "operational-distance lower bound");
  dis->add_option("r0", dis_r0)->required();
  dis->add_option("r1", dis_r1)->required();
  dis->add_option("--method", dis_method, "seesaw | sampled");
  dis->add_option("--iters", dis_iters);
  dis->add_option("--seed", dis_seed);

  // example
  auto* example = app.add_subcommand("example", "built-in channel and comb families");
  example->require_subcommand(1);
  int ex_d = 2;
  double ex_alpha = 1.0, ex_gamma = 0.5;
  std::string ex_out;
  auto* ex_iso = example->add_subcommand("isotropic", "U-U covariant channel");
  ex_iso->add_option("--d", ex_d)->required();
  ex_iso->add_option("--alpha", ex_alpha)->required();
  ex_iso->add_option("-o,--out", ex_out);
  auto* ex_wer = example->add_subcommand("werner", "U-U* covariant channel");
  ex_wer->add_option("--d", ex_d)->required();
  ex_wer->add_option("--gamma", ex_gamma)->required();
  ex_wer->add_option("-o,--out", ex_out);
  auto* ex_upb = example->add_subcommand("upb", "three-qubit Shifts complement state");
  ex_upb->add_option("-o,--out", ex_out);
  auto* ex_delay = example->add_subcommand("delay", "identity comb delaying one system");
  ex_delay->add_option("--d", ex_d)->required();
  ex_delay->add_option("-o,--out", ex_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // usage problems are I/O-class errors
  }

  if (*validate) {
    ObjectPtr comb = load(validate_comb);
    char* report = nullptr;
    cf_status st = cf_validate(comb.get(), tol, &report);
    if (report) {
      StringPtr guard(report);
      std::cout << report;
    }
    if (st != CF_OK && st != CF_VERIFY_FAIL) bail(st);
    return exit_code(st);
  }

  if (*reduce) {
    ObjectPtr comb = load(reduce_comb);
    cf_object* out = nullptr;
    cf_status st = cf_reduce(comb.get(), reduce_k, &out);
    if (st != CF_OK) bail(st);
    ObjectPtr guard(out);
    emit_object(out, reduce_out);
    return 0;
  }

  if (*link_cmd) {
    ObjectPtr a = load(link_a);
    ObjectPtr b = load(link_b);
    cf_object* out = nullptr;
    cf_status st = cf_link(a.get(), b.get(), &out);
    if (st != CF_OK) bail(st);
    ObjectPtr guard(out);
    emit_object(out, link_out);
    return 0;
  }

  if (*realize) {
    ObjectPtr comb = load(realize_comb);
    cf_object* real = nullptr;
    char* report = nullptr;
    cf_status st = cf_realize(comb.get(), tol, &real, &report);
    if (st != CF_OK) bail(st);
    ObjectPtr real_guard(real);
    StringPtr report_guard(report);

    std::error_code ec;
    std::filesystem::create_directories(realize_dir, ec);
    size_t count = 0;
    if (cf_realization_channel_count(real, &count) != CF_OK) bail(CF_ERR_INTERNAL);
    ojson manifest = ojson::parse(report);
    manifest["channels"] = ojson::array();
    for (size_t i = 0; i < count; ++i) {
      cf_object* ch = nullptr;
      if (cf_realization_channel(real, i, &ch) != CF_OK) bail(CF_ERR_INTERNAL);
      ObjectPtr ch_guard(ch);
      std::string name = "channel_" + std::to_string(i + 1) + ".json";
      std::string path = (std::filesystem::path(realize_dir) / name).string();
      cf_status wst = cf_object_write_file(ch, path.c_str());
      if (wst != CF_OK) bail(wst);
      manifest["channels"].push_back(name);
    }
    std::string manifest_path = (std::filesystem::path(realize_dir) / "realization.json").string();
    std::ofstream mf(manifest_path, std::ios::binary);
    if (!mf) bail(CF_ERR_IO);
    mf << manifest.dump() << "\n";
    std::cout << manifest.dump() << "\n";
    return 0;
  }

  if (*certify) {
    ObjectPtr comb = load(certify_comb);
    ObjectPtr decomp = load(certify_decomp);
    char* report = nullptr;
    cf_status st = cf_certify(comb.get(), decomp.get(), certify_step, certify_dim, tol, &report);
    if (report) {
      StringPtr guard(report);
      std::cout << report;
    }
    if (st != CF_OK && st != CF_VERIFY_FAIL) bail(st);
    return exit_code(st);
  }

  if (*certify_multi) {
    ObjectPtr comb = load(multi_comb);
    ObjectPtr decomp = load(multi_decomp);
    char* report = nullptr;
    cf_status st = cf_certify_multi(comb.get(), decomp.get(), multi_steps.data(),
                                    multi_dims.data(), multi_steps.size(), tol, &report);
    if (report) {
      StringPtr guard(report);
      std::cout << report;
    }
    if (st != CF_OK && st != CF_VERIFY_FAIL) bail(st);
    return exit_code(st);
  }

  if (*cost) {
    ObjectPtr choi = load(cost_choi);
    char* report = nullptr;
    cf_status st = cf_channel_cost(choi.get(), cost_restarts, cost_seed, tol, &report);
    if (st != CF_OK) bail(st);
    StringPtr guard(report);
    std::cout << report;
    return 0;
  }

  if (*sym) {
    ObjectPtr comb = load(sym_comb);
    ObjectPtr group = load(sym_group);
    char* report = nullptr;
    cf_status st = cf_symmetry_bound(comb.get(), group.get(), sym_step, sym_seed, tol, &report);
    if (st != CF_OK) bail(st);
    StringPtr guard(report);
    std::cout << report;
    return 0;
  }

  if (*dis) {
    ObjectPtr r0 = load(dis_r0);
    ObjectPtr r1 = load(dis_r1);
    char* report = nullptr;
    cf_status st =
        cf_discriminate(r0.get(), r1.get(), dis_method.c_str(), dis_iters, dis_seed, &report);
    if (st != CF_OK) bail(st);
    StringPtr guard(report);
    std::cout << report;
    return 0;
  }

  if (*example) {
    const char* family = nullptr;
    double param = 0.0;
    if (*ex_iso) {
      family = "isotropic";
      param = ex_alpha;
    } else if (*ex_wer) {
      family = "werner";
      param = ex_gamma;
    } else if (*ex_upb) {
      family = "upb";
    } else if (*ex_delay) {
      family = "delay";
    }
    cf_object* out = nullptr;
    char* report = nullptr;
    cf_status st = cf_example(family, ex_d, param, &out, &report);
    if (st != CF_OK) bail(st);
    ObjectPtr guard(out);
    StringPtr report_guard(report);
    emit_object(out, ex_out);
    if (!ex_out.empty() && report) std::cout << report;
    return 0;
  }

  return 2;
}
