#include "core/choi.hpp"

#include <algorithm>
#include <set>

#include "core/linalg.hpp"

namespace combforge {

namespace {

std::vector<Wire> pick_wires(const LabeledOperator& op, const std::vector<std::string>& labels) {
  std::vector<Wire> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(op.wire(l));
  return out;
}

long dim_of(const std::vector<Wire>& wires) {
  long d = 1;
  for (const auto& w : wires) d *= w.dim;
  return d;
}

}  // namespace

ChoiMap::ChoiMap(LabeledOperator o, std::vector<std::string> in_labels,
                 std::vector<std::string> out_labels)
    : op(std::move(o)), ins(std::move(in_labels)), outs(std::move(out_labels)) {
  std::set<std::string> seen;
  for (const auto& l : ins)
    if (!seen.insert(l).second)
      throw Error(ErrorCode::WireMismatch, "choi: label '" + l + "' listed twice");
  for (const auto& l : outs)
    if (!seen.insert(l).second)
      throw Error(ErrorCode::WireMismatch, "choi: label '" + l + "' both input and output");
  if (seen.size() != op.wires().size())
    throw Error(ErrorCode::WireMismatch, "choi: in/out labels do not cover the operator wires");
  for (const auto& l : ins) op.wire(l);
  for (const auto& l : outs) op.wire(l);
}

std::vector<Wire> ChoiMap::in_wires() const { return pick_wires(op, ins); }
std::vector<Wire> ChoiMap::out_wires() const { return pick_wires(op, outs); }
long ChoiMap::in_dim() const { return dim_of(in_wires()); }
long ChoiMap::out_dim() const { return dim_of(out_wires()); }

ChoiMap identity_channel(const Wire& in, const Wire& out) {
  if (in.dim != out.dim)
    throw Error(ErrorCode::WireMismatch, "identity channel needs equal dims");
  long d = in.dim;
  Mat c = Mat::Zero(d * d, d * d);
  // |I>><<I| on (out, in): entries [(n,n'),(m,m')] = delta_{n n'} delta_{m m'}
  for (long n = 0; n < d; ++n)
    for (long m = 0; m < d; ++m) c(n * d + n, m * d + m) = 1.0;
  return ChoiMap(LabeledOperator({out, in}, std::move(c)), {in.label}, {out.label});
}

ChoiMap choi_from_kraus(const std::vector<Mat>& kraus, const std::vector<Wire>& in_wires,
                        const std::vector<Wire>& out_wires) {
  long din = dim_of(in_wires);
  long dout = dim_of(out_wires);
  Mat c = Mat::Zero(dout * din, dout * din);
  for (const auto& k : kraus) {
    if (k.rows() != dout || k.cols() != din)
      throw Error(ErrorCode::WireMismatch, "kraus operator has wrong shape");
    Vec kk = vec(k);
    c += kk * kk.adjoint();
  }
  std::vector<Wire> wires = out_wires;
  wires.insert(wires.end(), in_wires.begin(), in_wires.end());
  std::vector<std::string> ins, outs;
  for (const auto& w : in_wires) ins.push_back(w.label);
  for (const auto& w : out_wires) outs.push_back(w.label);
  return ChoiMap(LabeledOperator(std::move(wires), std::move(c)), std::move(ins),
                 std::move(outs));
}

LabeledOperator apply(const ChoiMap& c, const LabeledOperator& rho) {
  std::set<std::string> want(c.ins.begin(), c.ins.end());
  std::set<std::string> got;
  for (const auto& w : rho.wires()) got.insert(w.label);
  if (want != got)
    throw Error(ErrorCode::WireMismatch, "apply: state wires do not match the map inputs");
  LabeledOperator rt = rho.partial_transpose(rho.labels()).embedded(c.op.wires());
  return (rt * c.op).partial_trace(c.ins);
}

LabeledOperator apply_adjoint(const ChoiMap& c, const LabeledOperator& y) {
  std::set<std::string> want(c.outs.begin(), c.outs.end());
  std::set<std::string> got;
  for (const auto& w : y.wires()) got.insert(w.label);
  if (want != got)
    throw Error(ErrorCode::WireMismatch, "apply_adjoint: operand wires do not match map outputs");
  LabeledOperator ye = y.embedded(c.op.wires());
  LabeledOperator contracted = (ye * c.op).partial_trace(c.outs);
  return contracted.transpose();
}

double cp_defect(const ChoiMap& c) {
  double lo = min_eigenvalue(c.op);
  return lo < 0.0 ? -lo : 0.0;
}

double tp_defect(const ChoiMap& c) {
  LabeledOperator marg = c.op.partial_trace(c.outs);
  LabeledOperator ident = LabeledOperator::identity(marg.wires());
  return (marg - ident).max_abs();
}

bool is_cp(const ChoiMap& c, double tol) { return cp_defect(c) <= tol; }
bool is_tp(const ChoiMap& c, double tol) { return tp_defect(c) <= tol; }

LabeledOperator link_operators(const LabeledOperator& a, const LabeledOperator& b) {
  std::vector<std::string> shared;
  for (const auto& w : b.wires())
    if (a.has_wire(w.label)) {
      if (a.wire(w.label).dim != w.dim)
        throw Error(ErrorCode::WireMismatch,
                    "link: shared wire '" + w.label + "' has mismatched dims");
      shared.push_back(w.label);
    }
  if (shared.empty()) return tensor(a, b);

  // Contract Tr_sh[(A (x) I)(I (x) B^{T_sh})] directly:
  //   R[(x,y),(x',y')] = sum_{s,s'} A[(x,s),(x',s')] B[(s,y),(s',y')]
  // as one matrix product over the reshuffled operands.
  std::vector<Wire> a_only, b_only, sh_wires;
  for (const auto& w : a.wires())
    if (std::find(shared.begin(), shared.end(), w.label) == shared.end())
      a_only.push_back(w);
    else
      sh_wires.push_back(w);
  for (const auto& w : b.wires())
    if (!a.has_wire(w.label)) b_only.push_back(w);

  std::vector<std::string> a_order, b_order;
  for (const auto& w : a_only) a_order.push_back(w.label);
  for (const auto& w : sh_wires) a_order.push_back(w.label);
  for (const auto& w : sh_wires) b_order.push_back(w.label);
  for (const auto& w : b_only) b_order.push_back(w.label);

  Mat am = a.permute_wires(a_order).mat();
  Mat bm = b.permute_wires(b_order).mat();
  long ds = 1;
  for (const auto& w : sh_wires) ds *= w.dim;
  long da = am.rows() / ds;
  long db = bm.rows() / ds;

  Mat a2(da * da, ds * ds);
  for (long x = 0; x < da; ++x)
    for (long xp = 0; xp < da; ++xp)
      for (long s = 0; s < ds; ++s)
        for (long sp = 0; sp < ds; ++sp)
          a2(x * da + xp, s * ds + sp) = am(x * ds + s, xp * ds + sp);
  Mat b2(ds * ds, db * db);
  for (long s = 0; s < ds; ++s)
    for (long sp = 0; sp < ds; ++sp)
      for (long y = 0; y < db; ++y)
        for (long yp = 0; yp < db; ++yp)
          b2(s * ds + sp, y * db + yp) = bm(s * db + y, sp * db + yp);
  Mat r2 = a2 * b2;
  Mat r(da * db, da * db);
  for (long x = 0; x < da; ++x)
    for (long xp = 0; xp < da; ++xp)
      for (long y = 0; y < db; ++y)
        for (long yp = 0; yp < db; ++yp)
          r(x * db + y, xp * db + yp) = r2(x * da + xp, y * db + yp);

  std::vector<Wire> wires = a_only;
  wires.insert(wires.end(), b_only.begin(), b_only.end());
  return LabeledOperator(std::move(wires), std::move(r));
}

ChoiMap link(const ChoiMap& c, const ChoiMap& d) {
  std::set<std::string> c_in(c.ins.begin(), c.ins.end());
  std::set<std::string> c_out(c.outs.begin(), c.outs.end());
  std::set<std::string> connect;
  for (const auto& l : d.ins) {
    if (c_in.count(l))
      throw Error(ErrorCode::WireMismatch, "link: wire '" + l + "' is an input of both operands");
    if (c_out.count(l)) connect.insert(l);
  }
  for (const auto& l : d.outs) {
    if (c_out.count(l))
      throw Error(ErrorCode::WireMismatch, "link: wire '" + l + "' is an output of both operands");
    if (c_in.count(l)) connect.insert(l);
  }

  LabeledOperator op = link_operators(c.op, d.op);

  std::vector<std::string> ins, outs;
  for (const auto& l : c.ins)
    if (!connect.count(l)) ins.push_back(l);
  for (const auto& l : d.ins)
    if (!connect.count(l)) ins.push_back(l);
  for (const auto& l : c.outs)
    if (!connect.count(l)) outs.push_back(l);
  for (const auto& l : d.outs)
    if (!connect.count(l)) outs.push_back(l);
  return ChoiMap(std::move(op), std::move(ins), std::move(outs));
}

}  // namespace combforge
