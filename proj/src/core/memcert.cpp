#include "core/memcert.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <unsupported/Eigen/MatrixFunctions>

#include "core/linalg.hpp"
#include "core/rng.hpp"

namespace combforge {

std::string evidence_name(Evidence e) {
  switch (e) {
    case Evidence::Decomposition: return "decomposition";
    case Evidence::PureSchmidt: return "pure-schmidt";
    case Evidence::PptWitness: return "ppt-witness";
    case Evidence::SymmetryProjectors: return "symmetry-projectors";
    case Evidence::ClosedForm: return "closed-form";
  }
  return "unknown";
}

int CostCertificate::max_d_hi() const {
  int d = 1;
  for (const auto& b : bounds) d = std::max(d, b.d_hi);
  return d;
}

double CostCertificate::log2_max_d_hi() const { return std::log2(static_cast<double>(max_d_hi())); }

double DetAfterReport::worst() const {
  double w = psd_defect;
  for (double d : step_defects) w = std::max(w, d);
  return w;
}

DetAfterReport verify_det_after_k(const LabeledOperator& q, const CombSignature& sig, int k,
                                  double tol) {
  DetAfterReport rep;
  rep.psd_defect = std::max(0.0, -min_eigenvalue(q.hermitized()));
  rep.step_defects = det_after_defects(q, sig, k);
  rep.pass = rep.worst() <= tol;
  return rep;
}

namespace {

LabeledOperator reduce_part(const LabeledOperator& q, const CombSignature& sig, int k) {
  std::vector<std::string> traced;
  double divisor = 1.0;
  for (int j = k + 1; j <= sig.num_steps(); ++j) {
    for (const auto& w : sig.step_wires(j)) traced.push_back(w.label);
    divisor *= static_cast<double>(sig.input_dim(j));
  }
  LabeledOperator t = traced.empty() ? q : q.partial_trace(traced);
  return t.scaled(1.0 / divisor);
}

std::string index_string(const std::vector<int>& idx) {
  std::string s = "(";
  for (size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
  return s + ")";
}

}  // namespace

CertifyResult certify_step(const CombValue& r, int k, const std::vector<LabeledOperator>& parts,
                           int d, double tol) {
  CertifyResult res;
  if (k < 1 || k > r.sig.num_steps()) throw Error(ErrorCode::Argument, "certify_step: bad step");
  if (parts.empty()) throw Error(ErrorCode::Argument, "certify_step: empty decomposition");

  auto target_rep = validate_deterministic(r, tol);
  if (!target_rep.pass()) {
    res.failure = "target is not a deterministic comb (worst defect " +
                  std::to_string(target_rep.worst()) + ")";
    return res;
  }

  auto full = r.sig.all_wires();
  LabeledOperator total = parts.front().aligned_to(full);
  for (size_t j = 1; j < parts.size(); ++j) total = total + parts[j].aligned_to(full);
  res.sum_defect = (total - r.op).max_abs();
  if (res.sum_defect > tol) {
    res.failure = "sum defect " + std::to_string(res.sum_defect) + " exceeds tolerance";
    return res;
  }

  int d_hi = 1;
  for (size_t j = 0; j < parts.size(); ++j) {
    auto rep = verify_det_after_k(parts[j].aligned_to(full), r.sig, k, tol);
    res.worst_part_defect = std::max(res.worst_part_defect, rep.worst());
    if (!rep.pass) {
      res.failure = "part " + std::to_string(j) + " is not deterministic after step " +
                    std::to_string(k) + " (defect " + std::to_string(rep.worst()) + ")";
      return res;
    }
    int rk = rank_of(reduce_part(parts[j].aligned_to(full), r.sig, k).hermitized());
    res.part_ranks.push_back(rk);
    d_hi = std::max(d_hi, rk);
    if (rk > d) {
      res.failure = "rank excess: part " + std::to_string(j) + " has rank(Q^(k)) = " +
                    std::to_string(rk) + " > " + std::to_string(d);
      return res;
    }
  }

  res.pass = true;
  res.certificate.tol = tol;
  res.certificate.evidence = Evidence::Decomposition;
  int d_lo = 1;
  if (rank_of(r.op.hermitized()) == 1) {
    d_lo = rank_of(reduce(r, k).op.hermitized());
    res.certificate.evidence = Evidence::PureSchmidt;
    res.certificate.note = "pure target: every part is proportional to it";
  }
  res.certificate.bounds = {StepBound{k, d_lo, d_hi}};
  return res;
}

CertifyResult certify_multi(const CombValue& r, const Decomposition& decomp,
                            const std::vector<int>& dims, double tol) {
  CertifyResult res;
  const auto& steps = decomp.steps;
  if (steps.empty() || dims.size() != steps.size())
    throw Error(ErrorCode::Argument, "certify_multi: steps/dims mismatch");
  if (!std::is_sorted(steps.begin(), steps.end()))
    throw Error(ErrorCode::Argument, "certify_multi: steps must be ascending");
  for (const auto& p : decomp.parts)
    if (p.index.size() != steps.size())
      throw Error(ErrorCode::Argument, "certify_multi: part index depth mismatch");

  auto target_rep = validate_deterministic(r, tol);
  if (!target_rep.pass()) {
    res.failure = "target is not a deterministic comb (worst defect " +
                  std::to_string(target_rep.worst()) + ")";
    return res;
  }

  auto full = r.sig.all_wires();
  LabeledOperator total = LabeledOperator::zero(full);
  for (const auto& p : decomp.parts) total = total + p.op.aligned_to(full);
  res.sum_defect = (total - r.op).max_abs();
  if (res.sum_defect > tol) {
    res.failure = "sum defect " + std::to_string(res.sum_defect) + " exceeds tolerance";
    return res;
  }

  res.certificate.bounds.clear();
  for (size_t level = 0; level < steps.size(); ++level) {
    int k = steps[level];
    if (k < 1 || k > r.sig.num_steps())
      throw Error(ErrorCode::Argument, "certify_multi: step out of range");
    // group parts by their index prefix of length level+1
    std::map<std::vector<int>, LabeledOperator> prefix_sums;
    for (const auto& p : decomp.parts) {
      std::vector<int> prefix(p.index.begin(), p.index.begin() + level + 1);
      auto it = prefix_sums.find(prefix);
      if (it == prefix_sums.end())
        prefix_sums.emplace(prefix, p.op.aligned_to(full));
      else
        it->second = it->second + p.op.aligned_to(full);
    }
    int d_hi = 1;
    for (const auto& [prefix, q] : prefix_sums) {
      auto rep = verify_det_after_k(q, r.sig, k, tol);
      res.worst_part_defect = std::max(res.worst_part_defect, rep.worst());
      if (!rep.pass) {
        res.failure = "prefix " + index_string(prefix) + " is not deterministic after step " +
                      std::to_string(k) + " (defect " + std::to_string(rep.worst()) + ")";
        return res;
      }
      int rk = rank_of(reduce_part(q, r.sig, k).hermitized());
      d_hi = std::max(d_hi, rk);
      if (rk > dims[level]) {
        res.failure = "rank excess at prefix " + index_string(prefix) + ": rank(Q^(" +
                      std::to_string(k) + ")) = " + std::to_string(rk) + " > " +
                      std::to_string(dims[level]);
        return res;
      }
    }
    res.certificate.bounds.push_back(StepBound{k, 1, d_hi});
  }

  res.pass = true;
  res.certificate.tol = tol;
  res.certificate.evidence = Evidence::Decomposition;
  return res;
}

double min_pt_eigenvalue(const LabeledOperator& a, const std::vector<std::string>& labels) {
  return min_eigenvalue(a.partial_transpose(labels).hermitized());
}

bool is_ppt(const LabeledOperator& a, const std::vector<std::string>& labels, double tol) {
  return min_pt_eigenvalue(a, labels) >= -tol;
}

// ----------------------------------------------------------- channel costs

namespace {

struct EigenKraus {
  std::vector<Vec> vectors;  // sqrt(lambda) v, descending lambda
};

EigenKraus eigen_kraus(const ChoiMap& c, double tol) {
  auto e = eigh(c.op.hermitized());
  double vmax = e.values.cwiseAbs().maxCoeff();
  if (e.values.minCoeff() < -std::max(tol, Tol::rank * std::max(1.0, vmax)))
    throw Error(ErrorCode::Verification, "channel Choi operator is not PSD");
  double cut = Tol::rank * std::max(1.0, vmax);
  EigenKraus out;
  for (long i = e.values.size() - 1; i >= 0; --i)
    if (e.values(i) > cut) out.vectors.push_back(std::sqrt(e.values(i)) * e.vectors.col(i));
  return out;
}

int vector_schmidt(const ChoiMap& c, const Vec& v) {
  return schmidt_rank(v, c.op.wires(), c.outs);
}

}  // namespace

CostCertificate channel_cost_bounds(const ChoiMap& c, const ChannelCostOptions& opts) {
  EigenKraus ek = eigen_kraus(c, opts.tol);
  CostCertificate cert;
  cert.tol = opts.tol;

  int upper = 1;
  for (const auto& v : ek.vectors) upper = std::max(upper, vector_schmidt(c, v));

  if (ek.vectors.size() == 1) {
    cert.bounds = {StepBound{1, upper, upper}};
    cert.evidence = Evidence::PureSchmidt;
    cert.note = "pure Choi operator: cost equals the Schmidt rank";
    return cert;
  }

  bool ppt = is_ppt(c.op, c.ins, std::max(opts.tol, Tol::snap));
  int lower = ppt ? 1 : 2;

  if (c.in_dim() == 2 && c.out_dim() == 2) {
    int exact = ppt ? 1 : 2;
    cert.bounds = {StepBound{1, exact, exact}};
    cert.evidence = Evidence::PptWitness;
    cert.note = ppt ? "qubit-qubit PPT operator is separable" : "NPT: entangled, one qubit suffices";
    return cert;
  }

  cert.evidence = ppt ? Evidence::Decomposition : Evidence::PptWitness;
  cert.note = ppt ? "upper bound from eigen-Kraus Schmidt ranks"
                  : "NPT lower bound; upper bound from eigen-Kraus Schmidt ranks";
  if (opts.restarts > 0) {
    for (int dt = lower; dt < upper; ++dt) {
      auto found = kraus_rank_minimize(c, dt, opts.restarts, opts.seed, opts.tol);
      if (found) {
        upper = dt;
        cert.evidence = Evidence::Decomposition;
        cert.note = "upper bound from a rank-one decomposition found by search";
        break;
      }
    }
  }
  cert.bounds = {StepBound{1, lower, upper}};
  return cert;
}

std::optional<std::vector<LabeledOperator>> kraus_rank_minimize(const ChoiMap& c, int d_target,
                                                                int restarts, std::uint64_t seed,
                                                                double tol, int extra_parts) {
  if (d_target < 1) throw Error(ErrorCode::Argument, "kraus_rank_minimize: d_target < 1");
  if (restarts < 1) throw Error(ErrorCode::Argument, "kraus_rank_minimize: restarts < 1");
  EigenKraus ek = eigen_kraus(c, tol);
  long r = static_cast<long>(ek.vectors.size());
  long m = r + extra_parts;
  long dim = c.op.dim();

  Mat w = Mat::Zero(dim, m);
  for (long i = 0; i < r; ++i) w.col(i) = ek.vectors[i];

  auto coefficients = [&](const Vec& v) {
    return schmidt_coefficients(v, c.op.wires(), c.outs);
  };
  auto tail = [&](const Vec& v) {
    RVec s = coefficients(v);
    double t = 0.0;
    for (long i = d_target; i < s.size(); ++i) t += s(i) * s(i);
    return t;
  };
  auto objective = [&](const Mat& u) {
    Mat p = w * u.transpose();
    double f = 0.0;
    for (long a = 0; a < m; ++a) f += tail(p.col(a));
    return f;
  };
  auto succeeded = [&](const Mat& u) {
    Mat p = w * u.transpose();
    for (long a = 0; a < m; ++a) {
      RVec s = coefficients(p.col(a));
      if (s.size() > d_target && s(d_target) > 1e-7 * std::max(1.0, s(0))) return false;
    }
    return true;
  };

  Rng rng(seed);
  const int iters = 4000;
  for (int restart = 0; restart < restarts; ++restart) {
    Mat u = restart == 0 ? Mat::Identity(m, m) : rng.haar_unitary(m);
    double f = objective(u);
    double step = 0.4;
    int stall = 0;
    for (int it = 0; it < iters && f > 1e-22; ++it) {
      Mat g = rng.ginibre(m, m);
      Mat anti = 0.5 * (g - g.adjoint());
      Mat trial = (step * anti).exp() * u;
      double ft = objective(trial);
      if (ft < f) {
        u = trial;
        f = ft;
        stall = 0;
      } else if (++stall >= 24) {
        step *= 0.6;
        stall = 0;
        if (step < 1e-9) break;
      }
    }
    if (succeeded(u)) {
      Mat p = w * u.transpose();
      std::vector<LabeledOperator> parts;
      Mat resum = Mat::Zero(dim, dim);
      for (long a = 0; a < m; ++a) {
        Mat part = p.col(a) * p.col(a).adjoint();
        resum += part;
        parts.emplace_back(c.op.wires(), part);
      }
      if ((resum - c.op.mat()).cwiseAbs().maxCoeff() > std::max(tol, 1e-9))
        throw Error(ErrorCode::Numeric, "kraus_rank_minimize: decomposition does not re-sum");
      return parts;
    }
  }
  return std::nullopt;
}

// ------------------------------------------------------- covariant families

namespace {
Wire chan_in(int d) { return Wire{"0", d, WireKind::Quantum}; }
Wire chan_out(int d) { return Wire{"1", d, WireKind::Quantum}; }

Mat max_ent_projector(int d) {  // |I>><<I|, unnormalized
  Mat m = Mat::Zero(d * d, d * d);
  for (int n = 0; n < d; ++n)
    for (int mm = 0; mm < d; ++mm) m(n * d + n, mm * d + mm) = 1.0;
  return m;
}
}  // namespace

ChoiMap isotropic_channel(int d, double alpha) {
  if (d < 2) throw Error(ErrorCode::Argument, "isotropic_channel: d < 2");
  if (alpha < -Tol::snap || alpha > d + Tol::snap)
    throw Error(ErrorCode::Argument, "isotropic_channel: need 0 <= alpha <= d");
  double beta = (d - alpha) / (static_cast<double>(d) * d - 1.0);
  Mat pi = max_ent_projector(d) / d;
  Mat m = alpha * pi + beta * (Mat::Identity(d * d, d * d) - pi);
  return ChoiMap(LabeledOperator({chan_in(d), chan_out(d)}, std::move(m)), {"0"}, {"1"});
}

int isotropic_cost(int d, double alpha) {
  if (alpha < -Tol::snap || alpha > d + Tol::snap)
    throw Error(ErrorCode::Argument, "isotropic_cost: need 0 <= alpha <= d");
  double rounded = std::round(alpha);
  if (std::abs(alpha - rounded) <= Tol::snap) alpha = rounded;
  return std::max(1, static_cast<int>(std::ceil(alpha)));
}

LabeledOperator swap_operator(const Wire& a, const Wire& b) {
  if (a.dim != b.dim) throw Error(ErrorCode::Argument, "swap: dims differ");
  long d = a.dim;
  Mat m = Mat::Zero(d * d, d * d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) m(i * d + j, j * d + i) = 1.0;
  return LabeledOperator({a, b}, std::move(m));
}

LabeledOperator sym_antisym_projector(int d, int sign) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::Argument, "sign must be +-1");
  LabeledOperator e = swap_operator(chan_in(d), chan_out(d));
  Mat m = 0.5 * (Mat::Identity(d * d, d * d) + static_cast<double>(sign) * e.mat());
  return LabeledOperator({chan_in(d), chan_out(d)}, std::move(m));
}

std::vector<LabeledOperator> sym_antisym_decomposition(int d, int sign) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::Argument, "sign must be +-1");
  std::vector<Wire> wires{chan_in(d), chan_out(d)};
  std::vector<LabeledOperator> parts;
  auto add = [&](const Vec& v) { parts.emplace_back(wires, Mat(v * v.adjoint())); };
  if (sign == 1)
    for (int m = 0; m < d; ++m) {
      Vec v = Vec::Zero(d * d);
      v(m * d + m) = 1.0;
      add(v);
    }
  for (int m = 0; m < d; ++m)
    for (int n = m + 1; n < d; ++n) {
      Vec v = Vec::Zero(d * d);
      v(m * d + n) = 1.0 / std::sqrt(2.0);
      v(n * d + m) = sign / std::sqrt(2.0);
      add(v);
    }
  return parts;
}

ChoiMap werner_channel(int d, double gamma) {
  if (d < 2) throw Error(ErrorCode::Argument, "werner_channel: d < 2");
  double delta = (2.0 - (d + 1.0) * gamma) / (d - 1.0);
  if (gamma < -Tol::snap || delta < -Tol::snap)
    throw Error(ErrorCode::Argument, "werner_channel: need gamma, delta >= 0 (0 <= gamma <= 2/(d+1))");
  Mat m = gamma * sym_antisym_projector(d, +1).mat() + delta * sym_antisym_projector(d, -1).mat();
  return ChoiMap(LabeledOperator({chan_in(d), chan_out(d)}, std::move(m)), {"0"}, {"1"});
}

int werner_cost(int d, double gamma) {
  double lo = 1.0 / (d + 1.0);
  double hi = 2.0 / (d + 1.0);
  if (std::abs(gamma - lo) <= Tol::snap) gamma = lo;
  if (std::abs(gamma - hi) <= Tol::snap) gamma = hi;
  if (std::abs(gamma) <= Tol::snap) gamma = 0.0;
  if (gamma < 0.0 || gamma > hi)
    throw Error(ErrorCode::Argument, "werner_cost: gamma outside the admissible range");
  return gamma < lo ? 2 : 1;
}

// ------------------------------------------------------------ UPB (Shifts)

std::vector<Vec> upb_shifts_basis() {
  Vec zero(2), one(2), plus(2), minus(2);
  zero << 1, 0;
  one << 0, 1;
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  auto kron3 = [](const Vec& a, const Vec& b, const Vec& c) {
    Vec v(8);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) v(4 * i + 2 * j + k) = a(i) * b(j) * c(k);
    return v;
  };
  return {kron3(zero, one, plus), kron3(one, plus, zero), kron3(plus, zero, one),
          kron3(minus, minus, minus)};
}

CombValue upb_shifts_state() {
  Mat pi = Mat::Zero(8, 8);
  for (const auto& v : upb_shifts_basis()) pi += v * v.adjoint();
  Mat rho = (Mat::Identity(8, 8) - pi) / 4.0;

  CombSignature sig = CombSignature::chain({{1, 2}, {1, 2}, {1, 2}});
  std::vector<Wire> qubits{{"1", 2, WireKind::Quantum},
                           {"3", 2, WireKind::Quantum},
                           {"5", 2, WireKind::Quantum}};
  LabeledOperator op = LabeledOperator(qubits, rho).embedded(sig.all_wires());
  return CombValue(sig, op);
}

CombValue delay_comb(int d) {
  if (d < 2) throw Error(ErrorCode::Argument, "delay_comb: d < 2");
  CombSignature sig = CombSignature::chain({{d, 1}, {1, d}});
  std::vector<Wire> pair{{"0", d, WireKind::Quantum}, {"3", d, WireKind::Quantum}};
  LabeledOperator op =
      LabeledOperator(pair, max_ent_projector(d)).embedded(sig.all_wires());
  return CombValue(sig, op);
}

}  // namespace combforge
