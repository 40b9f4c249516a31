#include "core/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "core/linalg.hpp"
#include "core/rng.hpp"

namespace combforge {

void GroupRep::validate(double tol) const {
  if (elements.empty()) throw Error(ErrorCode::Argument, "group has no elements");
  const auto& wires = elements.front().wires();
  long d = elements.front().dim();
  bool identity_found = false;
  for (const auto& u : elements) {
    LabeledOperator a = u.aligned_to(wires);
    double unit_defect = (a.mat().adjoint() * a.mat() - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
    if (unit_defect > 1e-10 * std::max(1.0, a.max_abs()))
      throw Error(ErrorCode::Verification,
                  "group element is not unitary (defect " + std::to_string(unit_defect) + ")");
    if ((a.mat() - Mat::Identity(d, d)).cwiseAbs().maxCoeff() <= tol) identity_found = true;
  }
  if (!identity_found) throw Error(ErrorCode::Verification, "group has no identity element");
  for (const auto& u : elements)
    for (const auto& v : elements) {
      Mat prod = u.aligned_to(wires).mat() * v.aligned_to(wires).mat();
      double best = std::numeric_limits<double>::infinity();
      for (const auto& w : elements)
        best = std::min(best, (prod - w.aligned_to(wires).mat()).cwiseAbs().maxCoeff());
      if (best > tol)
        throw Error(ErrorCode::Verification,
                    "group is not closed under products (defect " + std::to_string(best) + ")");
    }
}

LabeledOperator GroupRep::twirl(const LabeledOperator& x) const {
  const auto& wires = elements.front().wires();
  Mat xm = x.aligned_to(wires).mat();
  Mat acc = Mat::Zero(xm.rows(), xm.cols());
  for (const auto& u : elements) {
    Mat um = u.aligned_to(wires).mat();
    acc += um * xm * um.adjoint();
  }
  return LabeledOperator(wires, acc / static_cast<double>(elements.size()));
}

std::vector<int> BlockStructure::multiplicity_multiset() const {
  std::vector<int> out = multiplicities;
  std::sort(out.begin(), out.end());
  return out;
}

LabeledOperator BlockStructure::component_projector(int nu) const {
  LabeledOperator acc = projectors.at(components.at(nu).front());
  for (size_t i = 1; i < components[nu].size(); ++i) acc = acc + projectors[components[nu][i]];
  return acc;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); }
  void merge(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<std::vector<int>> link_projectors(const std::vector<Mat>& projs, const Mat& probe,
                                              double threshold) {
  int n = static_cast<int>(projs.size());
  UnionFind uf(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if ((projs[a] * probe * projs[b]).cwiseAbs().maxCoeff() > threshold) uf.merge(a, b);
  std::map<int, std::vector<int>> groups;
  for (int a = 0; a < n; ++a) groups[uf.find(a)].push_back(a);
  std::vector<std::vector<int>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

constexpr double kEigGap = 1e-7;   // relative eigenvalue clustering gap
constexpr double kLinkTol = 1e-8;  // linking threshold after probe normalization

}  // namespace

BlockStructure isotypic_decompose(const GroupRep& rep, double tol, std::uint64_t seed) {
  rep.validate(std::max(tol, 1e-8));
  const auto& wires = rep.elements.front().wires();
  long dim = rep.elements.front().dim();
  Rng rng(seed);

  const int retries = 6;
  for (int attempt = 0; attempt < retries; ++attempt) {
    Mat xb = rep.twirl(LabeledOperator(wires, rng.random_hermitian(dim))).hermitized().mat();
    auto e = eigh(xb);
    double scale = std::max(1.0, e.values.cwiseAbs().maxCoeff());

    std::vector<Mat> projs;
    std::vector<int> ranks;
    long start = 0;
    for (long i = 1; i <= dim; ++i) {
      if (i == dim || e.values(i) - e.values(i - 1) > kEigGap * scale) {
        Mat v = e.vectors.middleCols(start, i - start);
        projs.push_back(v * v.adjoint());
        ranks.push_back(static_cast<int>(i - start));
        start = i;
      }
    }

    auto probe = [&]() {
      Mat y = rep.twirl(LabeledOperator(wires, rng.random_hermitian(dim))).hermitized().mat();
      double m = y.cwiseAbs().maxCoeff();
      return m > 0 ? Mat(y / m) : y;
    };
    auto parts1 = link_projectors(projs, probe(), kLinkTol);
    auto parts2 = link_projectors(projs, probe(), kLinkTol);
    auto canon = [](std::vector<std::vector<int>> p) {
      for (auto& c : p) std::sort(c.begin(), c.end());
      std::sort(p.begin(), p.end());
      return p;
    };
    if (canon(parts1) != canon(parts2)) continue;  // unstable linking, re-draw

    BlockStructure bs;
    for (auto& p : projs) bs.projectors.emplace_back(wires, std::move(p));
    bool consistent = true;
    for (auto& comp : canon(parts1)) {
      int d_nu = ranks[comp.front()];
      for (int idx : comp)
        if (ranks[idx] != d_nu) consistent = false;
      bs.components.push_back(comp);
      bs.block_dims.push_back(d_nu);
      bs.multiplicities.push_back(static_cast<int>(comp.size()));
    }
    if (!consistent) continue;  // eigenvalue collision merged unequal blocks

    bool commutes = true;
    for (size_t nu = 0; nu < bs.components.size() && commutes; ++nu) {
      Mat p = bs.component_projector(static_cast<int>(nu)).mat();
      for (const auto& u : rep.elements) {
        Mat um = u.aligned_to(wires).mat();
        if ((p * um - um * p).cwiseAbs().maxCoeff() > std::max(tol, 1e-8)) {
          commutes = false;
          break;
        }
      }
    }
    if (!commutes) continue;
    return bs;
  }
  throw Error(ErrorCode::Numeric,
              "isotypic_decompose: persistent eigenvalue collisions, giving up after re-draws");
}

CertifyResult verify_block_bound(const CombValue& r, const std::vector<LabeledOperator>& projectors,
                                 int k, double tol) {
  CertifyResult res;
  if (projectors.empty()) throw Error(ErrorCode::Argument, "no projectors");
  auto w1 = r.sig.wires_up_to(k);
  std::set<std::string> w1_labels;
  for (const auto& w : w1) w1_labels.insert(w.label);
  for (const auto& p : projectors)
    for (const auto& w : p.wires())
      if (!w1_labels.count(w.label))
        throw Error(ErrorCode::WireMismatch,
                    "projector wire '" + w.label + "' is not among the first " +
                        std::to_string(k) + " steps");

  std::vector<Mat> pm;
  for (const auto& p : projectors) pm.push_back(p.embedded(w1).mat());
  long d1 = pm.front().rows();

  Mat sum = Mat::Zero(d1, d1);
  for (const auto& p : pm) sum += p;
  double completeness = (sum - Mat::Identity(d1, d1)).cwiseAbs().maxCoeff();
  double ortho = 0.0;
  for (size_t i = 0; i < pm.size(); ++i)
    for (size_t j = 0; j < pm.size(); ++j) {
      Mat prod = pm[i] * pm[j];
      if (i == j) prod -= pm[i];
      ortho = std::max(ortho, prod.cwiseAbs().maxCoeff());
    }
  if (completeness > tol || ortho > tol) {
    res.failure = "block-structure defect: completeness " + std::to_string(completeness) +
                  ", orthogonality " + std::to_string(ortho);
    return res;
  }

  auto full = r.sig.all_wires();
  std::vector<LabeledOperator> parts;
  LabeledOperator blocked = LabeledOperator::zero(full);
  int d = 1;
  for (size_t i = 0; i < pm.size(); ++i) {
    LabeledOperator pe = LabeledOperator(w1, pm[i]).embedded(full);
    LabeledOperator q = pe * r.op * pe;
    blocked = blocked + q;
    if (q.max_abs() > Tol::rank) {
      parts.push_back(q);
      d = std::max(d, static_cast<int>(std::lround(pm[i].trace().real())));
    }
  }
  double block_defect = (r.op - blocked).max_abs();
  if (block_defect > tol) {
    res.failure = "block-structure defect: ||R - sum P R P|| = " + std::to_string(block_defect);
    return res;
  }

  res = certify_step(r, k, parts, d, tol);
  if (res.pass) {
    res.certificate.evidence = Evidence::SymmetryProjectors;
    res.certificate.note = "induced decomposition Q_i = P_i R P_i, d = max Tr[P_i]";
  }
  return res;
}

Decomposition refine_with_blocks(const CombValue& r,
                                 const std::vector<LabeledOperator>& projectors, int k,
                                 const std::vector<LabeledOperator>& parts, int l, double tol) {
  if (!(k < l)) throw Error(ErrorCode::Argument, "refine_with_blocks: need k < l");
  auto full = r.sig.all_wires();
  auto w1 = r.sig.wires_up_to(k);

  std::vector<LabeledOperator> embedded;
  for (const auto& p : projectors) embedded.push_back(LabeledOperator(p.wires(), p.mat()).embedded(full));

  Decomposition out;
  out.steps = {k, l};
  for (size_t j = 0; j < parts.size(); ++j) {
    LabeledOperator q = parts[j].aligned_to(full);
    LabeledOperator dephd = LabeledOperator::zero(full);
    std::vector<LabeledOperator> pieces;
    for (size_t i = 0; i < embedded.size(); ++i) {
      LabeledOperator piece = embedded[i] * q * embedded[i];
      dephd = dephd + piece;
      pieces.push_back(std::move(piece));
    }
    double defect = (q - dephd).max_abs();
    if (defect > tol)
      throw Error(ErrorCode::Verification,
                  "commutation defect: part " + std::to_string(j) +
                      " is not block diagonal (defect " + std::to_string(defect) + ")");
    for (size_t i = 0; i < pieces.size(); ++i)
      if (pieces[i].max_abs() > Tol::rank)
        out.parts.push_back({{static_cast<int>(i), static_cast<int>(j)}, pieces[i]});
  }
  return out;
}

namespace {

// Rank-m_nu projectors |psi_nu^j><psi_nu^j| (x) P_m from a generic Hermitian
// element of the group algebra, split per isotypic component.
std::vector<LabeledOperator> multiplicity_projectors(const GroupRep& rep,
                                                     const BlockStructure& blocks, Rng& rng) {
  const auto& wires = rep.elements.front().wires();
  long dim = rep.elements.front().dim();

  const int retries = 6;
  for (int attempt = 0; attempt < retries; ++attempt) {
    Mat z = Mat::Zero(dim, dim);
    for (const auto& u : rep.elements) z += cxd(rng.gaussian(), rng.gaussian()) * u.aligned_to(wires).mat();
    z = 0.5 * (z + z.adjoint()).eval();

    std::vector<LabeledOperator> out;
    bool ok = true;
    for (size_t nu = 0; nu < blocks.components.size() && ok; ++nu) {
      int d_nu = blocks.block_dims[nu];
      int m_nu = blocks.multiplicities[nu];
      Mat p = blocks.component_projector(static_cast<int>(nu)).aligned_to(wires).mat();
      if (d_nu == 1) {
        out.emplace_back(wires, p);
        continue;
      }
      // orthonormal basis of the component range
      auto ep = eigh(p);
      long range_dim = d_nu * static_cast<long>(m_nu);
      Mat basis = ep.vectors.rightCols(range_dim);
      Mat z_small = basis.adjoint() * z * basis;
      auto ez = eigh(z_small.eval());
      double scale = std::max(1.0, ez.values.cwiseAbs().maxCoeff());
      long start = 0;
      int clusters = 0;
      for (long i = 1; i <= range_dim; ++i) {
        if (i == range_dim || ez.values(i) - ez.values(i - 1) > kEigGap * scale) {
          if (i - start != m_nu) {
            ok = false;
            break;
          }
          Mat v = basis * ez.vectors.middleCols(start, i - start);
          out.emplace_back(wires, Mat(v * v.adjoint()));
          ++clusters;
          start = i;
        }
      }
      if (ok && clusters != d_nu) ok = false;
    }
    if (ok) return out;
  }
  throw Error(ErrorCode::Numeric, "multiplicity projector construction kept colliding");
}

}  // namespace

CostCertificate symmetry_bound(const CombValue& r, const GroupRep& rep, int k, double tol,
                               std::uint64_t seed) {
  rep.validate(std::max(tol, 1e-8));
  auto full = r.sig.all_wires();
  double worst = 0.0;
  size_t worst_g = 0;
  for (size_t g = 0; g < rep.elements.size(); ++g) {
    LabeledOperator u = rep.elements[g].embedded(full);
    double defect = (u * r.op - r.op * u).max_abs();
    if (defect > worst) {
      worst = defect;
      worst_g = g;
    }
  }
  if (worst > tol)
    throw Error(ErrorCode::Verification,
                "comb does not commute with group element #" + std::to_string(worst_g) +
                    " (defect " + std::to_string(worst) + ")");

  BlockStructure blocks = isotypic_decompose(rep, tol, seed);
  Rng rng(seed + 0x9e3779b97f4a7c15ull);

  int fine_bound = *std::max_element(blocks.block_dims.begin(), blocks.block_dims.end());
  int mult_bound = *std::max_element(blocks.multiplicities.begin(), blocks.multiplicities.end());

  struct Candidate {
    int bound;
    std::vector<LabeledOperator> projectors;
    const char* which;
  };
  std::vector<Candidate> candidates;
  candidates.push_back({fine_bound, blocks.projectors, "commutant eigenprojectors"});
  if (mult_bound != fine_bound || blocks.projectors.size() != blocks.components.size())
    candidates.push_back(
        {mult_bound, multiplicity_projectors(rep, blocks, rng), "multiplicity-space projectors"});
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.bound < b.bound; });

  std::string tried;
  for (const auto& cand : candidates) {
    auto res = verify_block_bound(r, cand.projectors, k, tol);
    if (res.pass) {
      res.certificate.note = std::string(cand.which) + "; multiplicities per component: ";
      for (size_t nu = 0; nu < blocks.multiplicities.size(); ++nu)
        res.certificate.note += (nu ? "," : "") + std::to_string(blocks.multiplicities[nu]);
      return res.certificate;
    }
    tried += std::string(tried.empty() ? "" : "; ") + cand.which + ": " + res.failure;
  }
  throw Error(ErrorCode::Verification, "no block structure certified the comb (" + tried + ")");
}

}  // namespace combforge
