#include "dlseries/char_sheaf.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "dlseries/errors.hpp"

namespace dls {

bool SheafParam::operator<(const SheafParam& o) const {
  for (size_t i = 0; i < vector.size(); ++i) {
    if (vector[i] != o.vector[i]) return vector[i] < o.vector[i];
  }
  return false;
}

std::string SheafParam::str() const {
  std::string s = "(";
  for (size_t i = 0; i < vector.size(); ++i) s += (i ? "," : "") + vector[i].str();
  return s + ")";
}

SheafParam make_param_unchecked(const RatVec& v, Int p) {
  SheafParam l;
  l.p = p;
  l.denominator = 1;
  for (const auto& x : v) {
    Rat r = x.mod1();
    l.vector.push_back(r);
    l.denominator = std::lcm(l.denominator, r.den);
  }
  return l;
}

SheafParam make_param(const RatVec& v, const RootDatum& d, Int p) {
  if ((int)v.size() != d.rank)
    throw InputError("parameter has length " + std::to_string(v.size()) +
                     ", expected rank " + std::to_string(d.rank));
  if (!is_prime(p)) throw InputError("p = " + std::to_string(p) + " is not prime");
  SheafParam l = make_param_unchecked(v, p);
  if (l.denominator % p == 0)
    throw InputError("parameter order not prime to p (denominator " +
                     std::to_string(l.denominator) + ", p = " + std::to_string(p) + ")");
  return l;
}

SheafParam Twist::apply(const SheafParam& l) const {
  RatVec out = matrix.apply(l.vector);
  for (auto& x : out) x = (Rat(q) * x).mod1();
  SheafParam r = make_param_unchecked(out, l.p);
  if (l.denominator % r.denominator != 0)
    throw IdentityViolation("frobenius-order", "order of ε·l does not divide order of l");
  return r;
}

int Twist::conjugate(const WeylGroup& w, int i) const {
  int j = w.index_of(matrix * w.matrix(i) * integer_inverse(matrix));
  if (j < 0)
    throw IdentityViolation("twist-normalizes-weyl", "ε-conjugate escaped the group");
  return j;
}

SheafOrbit orbit_and_stability(const WeylGroup& w, const Twist& eps, const SheafParam& l) {
  SheafOrbit orb;
  orb.base = l;
  std::set<SheafParam> seen;
  std::vector<SheafParam> queue{l};
  seen.insert(l);
  while (!queue.empty()) {
    SheafParam x = queue.back();
    queue.pop_back();
    for (int g : w.generators()) {
      RatVec img = w.matrix(g).apply(x.vector);
      for (auto& e : img) e = e.mod1();
      SheafParam y = make_param_unchecked(img, l.p);
      if (seen.insert(y).second) queue.push_back(y);
    }
  }
  orb.elements.assign(seen.begin(), seen.end());
  for (int i = 0; i < w.size(); ++i) {
    RatVec img = w.matrix(i).apply(l.vector);
    for (auto& e : img) e = e.mod1();
    if (make_param_unchecked(img, l.p) == l) orb.stabilizer.push_back(i);
  }
  if (orb.elements.size() * orb.stabilizer.size() != (size_t)w.size())
    throw IdentityViolation("orbit-stabilizer", "|orbit| · |W_L| != |W|");
  SheafParam el = eps.apply(l);
  orb.param_stable = (el == l);
  orb.orbit_stable = seen.count(el) > 0;
  return orb;
}

EndoscopicRoots endoscopic_roots(const SheafParam& l, const RootDatum& d) {
  EndoscopicRoots out;
  for (size_t i = 0; i < d.roots.size(); ++i)
    if (dot(l.vector, d.coroots[i]).is_integer()) {
      out.all.push_back((int)i);
      if (d.is_positive_index((int)i)) out.positive.push_back((int)i);
    }
  return out;
}

Stabilization stabilize(const WeylGroup& w, const Twist& eps, const SheafParam& l) {
  SheafParam el = eps.apply(l);
  EndoscopicRoots phi = endoscopic_roots(l, w.datum());
  std::vector<int> candidates;
  for (int i = 0; i < w.size(); ++i) {
    RatVec img = w.matrix(i).apply(el.vector);
    for (auto& e : img) e = e.mod1();
    if (!(make_param_unchecked(img, l.p) == l)) continue;
    // keep only w with (w·ε)(Φ_L⁺) = Φ_L⁺ so the effective twist is pinned
    // for the endoscopic base; such w always exist within the coset
    IntMat m = w.matrix(i) * eps.matrix;
    bool pinned = true;
    std::set<int> pos(phi.positive.begin(), phi.positive.end());
    for (int r : phi.positive) {
      int img_idx = w.datum().root_index(m.apply(w.datum().roots[r]));
      if (img_idx < 0 || !pos.count(img_idx)) {
        pinned = false;
        break;
      }
    }
    if (pinned) candidates.push_back(i);
  }
  if (candidates.empty()) {
    // distinguish "orbit not stable" from an internal pinning failure
    auto orb = orbit_and_stability(w, eps, l);
    if (!orb.orbit_stable) throw InputError("orbit not ε-stable; no stabilizing w exists");
    throw IdentityViolation("stabilize-pinning",
                            "stabilizing coset contains no Φ_L⁺-pinned element");
  }
  int best = candidates.front();
  for (int c : candidates) {
    int lc = w.length(c), lb = w.length(best);
    if (lc < lb || (lc == lb && w.matrix(c) < w.matrix(best))) best = c;
  }
  Stabilization s;
  s.w = best;
  s.effective = Twist{eps.q, w.matrix(best) * eps.matrix};
  s.already_fixed = (el == l);
  return s;
}

LittleGroups little_groups(const WeylGroup& w, const SheafParam& l) {
  LittleGroups out;
  out.phi_l = endoscopic_roots(l, w.datum());
  for (int i = 0; i < w.size(); ++i) {
    RatVec img = w.matrix(i).apply(l.vector);
    for (auto& e : img) e = e.mod1();
    if (make_param_unchecked(img, l.p) == l) out.w_l.push_back(i);
  }
  out.w_l0 = w.reflection_subgroup(out.phi_l.all);
  std::set<int> pos(out.phi_l.positive.begin(), out.phi_l.positive.end());
  auto preserves_pos = [&](int i) {
    for (int r : out.phi_l.positive)
      if (!pos.count(w.apply_to_root(i, r))) return false;
    return true;
  };
  for (int i : out.w_l)
    if (preserves_pos(i)) out.omega.push_back(i);

  // unique factorization w = u·ω: u is the unique element of W_L° sending
  // Φ_L⁺ to w(Φ_L⁺); verify simple transitivity once via a positivity map
  std::map<std::vector<int>, int> pos_system_to_u;
  for (size_t ui = 0; ui < out.w_l0.elements.size(); ++ui) {
    int u = out.w_l0.elements[ui];
    std::vector<int> image;
    for (int r : out.phi_l.positive) image.push_back(w.apply_to_root(u, r));
    std::sort(image.begin(), image.end());
    if (!pos_system_to_u.emplace(image, (int)ui).second)
      throw IdentityViolation("semidirect-factorization",
                              "two elements of W_L° induce the same positive system");
  }
  std::set<int> omega_set(out.omega.begin(), out.omega.end());
  std::map<int, int> omega_pos;
  for (size_t i = 0; i < out.omega.size(); ++i) omega_pos[out.omega[i]] = (int)i;
  for (int x : out.w_l) {
    std::vector<int> image;
    for (int r : out.phi_l.positive) image.push_back(w.apply_to_root(x, r));
    std::sort(image.begin(), image.end());
    auto it = pos_system_to_u.find(image);
    if (it == pos_system_to_u.end())
      throw IdentityViolation("semidirect-factorization",
                              "element of W_L moves Φ_L⁺ outside the W_L° positive systems");
    int u = out.w_l0.elements[it->second];
    int om = w.mul(w.inverse(u), x);
    if (!omega_set.count(om))
      throw IdentityViolation("semidirect-factorization",
                              "residual factor does not stabilize Φ_L⁺");
    out.factorization.emplace_back(it->second, omega_pos[om]);
  }
  if (out.w_l.size() != out.w_l0.elements.size() * out.omega.size())
    throw IdentityViolation("semidirect-factorization", "|W_L| != |W_L°|·|Ω_L|");
  return out;
}

}  // namespace dls
