#include "dlseries/endoscopy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "dlseries/errors.hpp"

namespace dls {

EndoscopicDatum endoscopic_datum(const RootDatum& d, const SheafParam& l,
                                 const WeylGroup& w) {
  EndoscopicDatum e;
  e.ambient = d;
  e.l = l;
  e.little = little_groups(w, l);
  std::vector<IntVec> roots, coroots, simple_roots;
  for (int i : e.little.phi_l.all) {
    roots.push_back(d.roots[i]);
    coroots.push_back(d.coroots[i]);
  }
  for (int i : e.little.w_l0.simple_system) simple_roots.push_back(d.roots[i]);
  e.h = RootDatum::from_lists(d.rank, roots, coroots, simple_roots);
  e.h.label = (d.label.empty() ? "datum" : d.label) + "-endoscopic";
  auto bad = e.h.validate();
  if (!bad.empty())
    throw IdentityViolation("endoscopic-datum-valid", bad.front());
  // W(H) must equal W_L° inside W, elementwise
  WeylGroup wh = WeylGroup::generate(e.h);
  std::set<int> w_l0(e.little.w_l0.elements.begin(), e.little.w_l0.elements.end());
  if ((int)w_l0.size() != wh.size())
    throw IdentityViolation("endoscopic-weyl", "|W(H)| != |W_L°|");
  for (int i = 0; i < wh.size(); ++i) {
    int j = w.index_of(wh.matrix(i));
    if (j < 0 || !w_l0.count(j))
      throw IdentityViolation("endoscopic-weyl", "W(H) is not W_L° inside W");
  }
  return e;
}

BSet b_set(const WeylGroup& w, const Twist& eps, const SheafParam& l,
           const LittleGroups& little) {
  if (!(eps.apply(l) == l))
    throw InputError("parameter is not ε-fixed; apply stabilize first");
  BSet b;
  // {w : w(ε·l) = l} = W_L here; partition into left W_L°-cosets
  std::map<int, int> elem_to_coset;
  for (int x : little.w_l) {
    if (elem_to_coset.count(x)) continue;
    std::vector<int> coset;
    for (int u : little.w_l0.elements) coset.push_back(w.mul(u, x));
    std::sort(coset.begin(), coset.end());
    int id = (int)b.cosets.size();
    for (int y : coset) elem_to_coset[y] = id;
    b.cosets.push_back(coset);
  }
  for (const auto& coset : b.cosets) {
    int rep = w.min_coset_rep(little.w_l0.elements, coset, little.phi_l.positive);
    b.min_reps.push_back(rep);
  }
  for (size_t i = 0; i < b.cosets.size(); ++i)
    if (std::binary_search(b.cosets[i].begin(), b.cosets[i].end(), 0)) b.identity_coset = (int)i;
  if (b.identity_coset < 0)
    throw IdentityViolation("b-set", "identity coset missing for an ε-fixed parameter");

  // ε acts on Ω_L by conjugation with the twist's finite part
  std::map<int, int> omega_index;
  for (size_t i = 0; i < little.omega.size(); ++i) omega_index[little.omega[i]] = (int)i;
  for (int om : little.omega) {
    int img = eps.conjugate(w, om);
    auto it = omega_index.find(img);
    if (it == omega_index.end())
      throw IdentityViolation("epsilon-on-omega", "ε does not preserve Ω_L");
    b.eps_on_omega.push_back(it->second);
  }

  b.action.assign(little.omega.size(), std::vector<int>(b.cosets.size(), -1));
  for (size_t oi = 0; oi < little.omega.size(); ++oi) {
    int om = little.omega[oi];
    int eom_inv = w.inverse(little.omega[b.eps_on_omega[oi]]);
    for (size_t bi = 0; bi < b.cosets.size(); ++bi) {
      int img = w.mul(w.mul(om, b.min_reps[bi]), eom_inv);
      auto it = elem_to_coset.find(img);
      if (it == elem_to_coset.end())
        throw IdentityViolation("ad-epsilon", "twisted conjugate left the ε-fixed set");
      b.action[oi][bi] = it->second;
    }
  }
  // action must be a genuine group action
  for (size_t oi = 0; oi < little.omega.size(); ++oi)
    for (size_t oj = 0; oj < little.omega.size(); ++oj) {
      int prod = w.mul(little.omega[oi], little.omega[oj]);
      int pi = omega_index.at(prod);
      for (size_t bi = 0; bi < b.cosets.size(); ++bi)
        if (b.action[pi][bi] != b.action[oi][b.action[oj][bi]])
          throw IdentityViolation("ad-epsilon", "Ad_ε is not a group action");
    }
  // orbit partition, canonical: orbits sorted by least coset index
  std::vector<bool> seen(b.cosets.size(), false);
  for (size_t bi = 0; bi < b.cosets.size(); ++bi) {
    if (seen[bi]) continue;
    std::set<int> orbit{(int)bi};
    std::vector<int> queue{(int)bi};
    while (!queue.empty()) {
      int x = queue.back();
      queue.pop_back();
      for (size_t oi = 0; oi < little.omega.size(); ++oi) {
        int y = b.action[oi][x];
        if (orbit.insert(y).second) queue.push_back(y);
      }
    }
    for (int x : orbit) seen[x] = true;
    b.orbits.emplace_back(orbit.begin(), orbit.end());
  }
  return b;
}

RationalForm rational_form(int beta, const BSet& b, const EndoscopicDatum& e,
                           const WeylGroup& w, const Twist& eps) {
  if (beta < 0 || beta >= (int)b.cosets.size()) throw InputError("beta out of range");
  RationalForm f;
  f.beta = beta;
  f.w_beta = b.min_reps[beta];
  f.q = eps.q;
  IntMat m = w.matrix(f.w_beta) * eps.matrix;
  // must restrict to a based automorphism of (H, Φ_L⁺)
  std::set<IntVec> pos;
  for (int i : e.little.phi_l.positive) pos.insert(e.ambient.roots[i]);
  for (int i : e.little.phi_l.positive)
    if (!pos.count(m.apply(e.ambient.roots[i])))
      throw IdentityViolation("sigma-positivity", "σ_{βε} does not preserve Φ_L⁺");
  f.sigma = BasedAutomorphism::from_matrix(e.h, m);
  return f;
}

Coinvariants coinvariants(const WeylGroup& w, const LittleGroups& little, const BSet& b) {
  Coinvariants out;
  size_t n = little.omega.size();
  std::map<int, int> omega_index;
  for (size_t i = 0; i < n; ++i) omega_index[little.omega[i]] = (int)i;
  // twisted conjugacy: x ~ ω x ε(ω)^{-1}
  std::vector<int> cls(n, -1);
  for (size_t i = 0; i < n; ++i) {
    if (cls[i] >= 0) continue;
    int id = (int)out.classes.size();
    std::set<int> c{(int)i};
    std::vector<int> queue{(int)i};
    while (!queue.empty()) {
      int x = queue.back();
      queue.pop_back();
      for (size_t oi = 0; oi < n; ++oi) {
        int y = omega_index.at(w.mul(w.mul(little.omega[oi], little.omega[x]),
                                     w.inverse(little.omega[b.eps_on_omega[oi]])));
        if (c.insert(y).second) queue.push_back(y);
      }
    }
    for (int x : c) cls[x] = id;
    out.classes.emplace_back(c.begin(), c.end());
  }
  // bijection with the Ad_ε-orbits: an orbit maps to the class of the Ω_L
  // label of any of its minimal representatives
  if (out.classes.size() != b.orbits.size())
    throw IdentityViolation("coinvariants-count",
                            "|(Ω_L)_Fr| != |𝔅_L / Ad_ε(Ω_L)| (" +
                                std::to_string(out.classes.size()) + " vs " +
                                std::to_string(b.orbits.size()) + ")");
  std::set<int> used;
  for (const auto& orbit : b.orbits) {
    int cls_id = -1;
    for (int beta : orbit) {
      auto it = omega_index.find(b.min_reps[beta]);
      if (it == omega_index.end())
        throw IdentityViolation("coinvariants-bijection",
                                "minimal representative is not an Ω_L element");
      int c = cls[it->second];
      if (cls_id < 0) cls_id = c;
      if (c != cls_id)
        throw IdentityViolation("coinvariants-bijection",
                                "orbit maps to two distinct twisted classes");
    }
    if (!used.insert(cls_id).second)
      throw IdentityViolation("coinvariants-bijection",
                              "two orbits map to the same twisted class");
    out.orbit_to_class.push_back(cls_id);
  }
  return out;
}

ComponentGroupReport steinberg_component_group(const RootDatum& d, const SheafParam& l,
                                               const WeylGroup& w,
                                               const LittleGroups& little) {
  ComponentGroupReport r;
  r.dual_datum = d.dual();
  WeylGroup wd = WeylGroup::generate(r.dual_datum);
  // s is the functional <l, ·> on X(dual) = Y; w' fixes s iff the transposed
  // inverse of its matrix fixes l
  for (int i = 0; i < wd.size(); ++i) {
    RatVec img = dual_action(wd.matrix(i)).apply(l.vector);
    for (auto& e : img) e = e.mod1();
    if (make_param_unchecked(img, l.p) == l) r.w_s.push_back(i);
  }
  // reflections in the dual roots alpha^vee with <l, alpha^vee> in Z
  // (a root of the dual datum is a coroot vector of d)
  std::vector<int> sub_roots;
  for (size_t i = 0; i < r.dual_datum.roots.size(); ++i) {
    Rat pairing(0);
    for (int k = 0; k < d.rank; ++k)
      pairing = pairing + l.vector[k] * Rat(r.dual_datum.roots[i][k]);
    if (pairing.is_integer()) sub_roots.push_back((int)i);
  }
  auto sub = wd.reflection_subgroup(sub_roots);
  r.w_s0 = sub.elements;
  r.w_s0_simple = sub.simple_system;

  // W_s° must be normal in W_s; enumerate left cosets
  std::set<int> ws(r.w_s.begin(), r.w_s.end());
  std::set<int> ws0(r.w_s0.begin(), r.w_s0.end());
  for (int x : r.w_s0)
    if (!ws.count(x))
      throw IdentityViolation("component-group", "W_s° is not contained in W_s");
  for (int x : r.w_s)
    for (int u : r.w_s0)
      if (!ws0.count(wd.mul(wd.mul(x, u), wd.inverse(x))))
        throw IdentityViolation("component-group", "W_s° is not normal in W_s");
  std::map<int, int> elem_to_coset;
  for (int x : r.w_s) {
    if (elem_to_coset.count(x)) continue;
    std::vector<int> coset;
    for (int u : r.w_s0) coset.push_back(wd.mul(u, x));
    std::sort(coset.begin(), coset.end());
    int id = (int)r.cosets.size();
    for (int y : coset) elem_to_coset[y] = id;
    r.cosets.push_back(coset);
  }

  // exhibited map Ω_L -> W_s/W_s°: ω ↦ coset of its dual-action image
  if (r.cosets.size() != little.omega.size())
    throw IdentityViolation("steinberg-isomorphism",
                            "|W_s/W_s°| != |Ω_L| (" + std::to_string(r.cosets.size()) +
                                " vs " + std::to_string(little.omega.size()) + ")");
  std::set<int> hit;
  for (int om : little.omega) {
    int img = wd.index_of(dual_action(w.matrix(om)));
    if (img < 0 || !ws.count(img))
      throw IdentityViolation("steinberg-isomorphism", "Ω_L image is not in W_s");
    int coset = elem_to_coset.at(img);
    if (!hit.insert(coset).second)
      throw IdentityViolation("steinberg-isomorphism", "Ω_L → W_s/W_s° is not injective");
    r.omega_to_coset.push_back(coset);
  }
  // homomorphism check on the quotient
  std::map<int, int> omega_index;
  for (size_t i = 0; i < little.omega.size(); ++i) omega_index[little.omega[i]] = (int)i;
  for (size_t i = 0; i < little.omega.size(); ++i)
    for (size_t j = 0; j < little.omega.size(); ++j) {
      int prod = w.mul(little.omega[i], little.omega[j]);
      int img = wd.index_of(dual_action(w.matrix(little.omega[i])) *
                            dual_action(w.matrix(little.omega[j])));
      if (img < 0 || elem_to_coset.at(img) != r.omega_to_coset[omega_index.at(prod)])
        throw IdentityViolation("steinberg-isomorphism",
                                "Ω_L → W_s/W_s° is not a homomorphism");
    }
  return r;
}

std::vector<int> fixed_omega(const WeylGroup& w, const Twist& eps,
                             const LittleGroups& little) {
  std::set<int> w_l0(little.w_l0.elements.begin(), little.w_l0.elements.end());
  std::vector<int> fixed, via_wl0;
  for (size_t i = 0; i < little.omega.size(); ++i) {
    int om = little.omega[i];
    int img = eps.conjugate(w, om);
    if (img == om) fixed.push_back((int)i);
    if (w_l0.count(w.mul(om, w.inverse(img)))) via_wl0.push_back((int)i);
  }
  if (fixed != via_wl0)
    throw IdentityViolation("beta-one-fixed-points",
                            "{ω : ε(ω) = ω} != {ω : ω ε(ω)^{-1} ∈ W_L°}");
  return fixed;
}

std::vector<int> stabilizer_omega(int beta, const BSet& b, const LittleGroups& little) {
  std::vector<int> stab;
  for (size_t oi = 0; oi < little.omega.size(); ++oi)
    if (b.action[oi][beta] == beta) stab.push_back((int)oi);
  // orbit-stabilizer consistency
  for (const auto& orbit : b.orbits)
    if (std::find(orbit.begin(), orbit.end(), beta) != orbit.end())
      if (orbit.size() * stab.size() != little.omega.size())
        throw IdentityViolation("orbit-stabilizer", "|orbit|·|stabilizer| != |Ω_L|");
  return stab;
}

EmbeddedParam extend_to_embedding(const RegularEmbedding& emb, const SheafParam& l,
                                  const WeylGroup& w_big,
                                  const EndoscopicRoots& phi_l_downstairs) {
  const IntMat& rmat = emb.restriction;
  Int n = l.denominator;
  // solve R y = n·l over Z, then x = y/n
  IntVec target(rmat.rows);
  for (int i = 0; i < rmat.rows; ++i) {
    Rat v = l.vector[i] * Rat(n);
    target[i] = v.num;  // integral by choice of n
  }
  auto y0 = solve_integer(rmat, target);
  if (!y0)
    throw InputError("no extension with denominator dividing " + std::to_string(n) +
                     " (p-divisibility obstruction)");
  // all solutions mod n: y0 + ker(R mod n); enumerate for the lex-least
  // canonical representative. ker generators: columns of V past the rank.
  SmithForm f = smith_normal_form(rmat);
  std::vector<IntVec> kernel_gens;
  IntVec diag = f.diagonal();
  for (int j = 0; j < rmat.cols; ++j) {
    bool in_kernel = j >= (int)diag.size() || diag[j] == 0;
    std::vector<Int> col(rmat.cols);
    for (int i = 0; i < rmat.cols; ++i) col[i] = f.v(i, j);
    if (in_kernel) kernel_gens.push_back(col);
  }
  auto canonical = [&](const IntVec& y) {
    RatVec x(rmat.cols);
    for (int i = 0; i < rmat.cols; ++i) x[i] = Rat(y[i], n).mod1();
    return x;
  };
  RatVec best = canonical(*y0);
  // kernel combinations mod n
  size_t k = kernel_gens.size();
  std::vector<Int> c(k, 0);
  if (k > 0 && std::pow((double)n, (double)k) <= 2e6) {
    for (;;) {
      IntVec y = *y0;
      for (size_t j = 0; j < k; ++j)
        if (c[j]) y = y + scale(c[j], kernel_gens[j]);
      RatVec x = canonical(y);
      if (std::lexicographical_compare(x.begin(), x.end(), best.begin(), best.end()))
        best = x;
      size_t j = 0;
      while (j < k && ++c[j] == n) c[j++] = 0;
      if (j == k) break;
    }
  }
  EmbeddedParam out;
  out.l_c = make_param(best, emb.big, l.p);
  out.little_c = little_groups(w_big, out.l_c);
  if (out.little_c.omega.size() != 1)
    throw IdentityViolation("connected-centre", "Ω_{L_c} is nontrivial");
  // Φ_{L_c} corresponds to Φ_L under the root correspondence
  std::set<int> upstairs(out.little_c.phi_l.all.begin(), out.little_c.phi_l.all.end());
  std::set<int> expected;
  for (int i : phi_l_downstairs.all) expected.insert(emb.root_correspondence[i]);
  if (upstairs != expected)
    throw IdentityViolation("full-preimage",
                            "Φ_{L_c} does not correspond to Φ_L under the embedding");
  out.phi_lc = out.little_c.phi_l.all;
  return out;
}

}  // namespace dls
