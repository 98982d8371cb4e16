#include "dlseries/series.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dlseries/errors.hpp"

namespace dls {

namespace {

// Simple-object count of (⊕_β Rep₁(torus form))^Ω: one simple per β, so the
// count is Σ over Ω-orbits of |Irr(Stab)|. Only valid when Φ_L is empty.
template <typename CountStab>
long torus_rhs_simple_count(const std::vector<std::vector<int>>& orbits, CountStab count) {
  long total = 0;
  for (const auto& orbit : orbits) total += count(orbit);
  return total;
}

}  // namespace

long conjugacy_class_count(const WeylGroup& w, const std::vector<int>& elems) {
  std::set<int> in(elems.begin(), elems.end());
  std::set<int> seen;
  long classes = 0;
  for (int x : elems) {
    if (seen.count(x)) continue;
    ++classes;
    for (int g : elems) {
      int y = w.mul(w.mul(g, x), w.inverse(g));
      if (!in.count(y))
        throw IdentityViolation("subgroup-closure", "conjugate left the subgroup");
      seen.insert(y);
    }
  }
  return classes;
}

long conjugacy_class_count(const ExtendedWeylGroup& w,
                           const std::vector<ExtendedWeylGroup::Elem>& elems) {
  std::set<ExtendedWeylGroup::Elem> in(elems.begin(), elems.end());
  std::set<ExtendedWeylGroup::Elem> seen;
  long classes = 0;
  for (const auto& x : elems) {
    if (seen.count(x)) continue;
    ++classes;
    for (const auto& g : elems) {
      auto y = w.mul(w.mul(g, x), w.inverse(g));
      if (!in.count(y))
        throw IdentityViolation("subgroup-closure", "conjugate left the subgroup");
      seen.insert(y);
    }
  }
  return classes;
}

SeriesContext geometric_report(const RootDatum& d, const FrobeniusTwist& eps,
                               const SheafParam& l, long cap) {
  SeriesContext ctx{WeylGroup::generate(d, cap), {}};
  const WeylGroup& w = ctx.w;
  GeometricSeriesReport& r = ctx.report;
  r.datum = d;
  r.q = eps.q;
  r.p = eps.p;
  r.tau = eps.tau.matrix;
  r.l = l;
  if (l.denominator % eps.p == 0)
    throw InputError("parameter order not prime to p");
  r.stab = stabilize(w, Twist::of(eps), l);
  const Twist& e = r.stab.effective;
  r.endo = endoscopic_datum(d, l, w);
  r.b = b_set(w, e, l, r.endo.little);
  for (size_t beta = 0; beta < r.b.cosets.size(); ++beta)
    r.forms.push_back(rational_form((int)beta, r.b, r.endo, w, e));
  r.coinv = coinvariants(w, r.endo.little, r.b);
  r.steinberg = steinberg_component_group(d, l, w, r.endo.little);
  r.omega_eps = fixed_omega(w, e, r.endo.little);
  if (r.endo.little.phi_l.all.empty()) {
    r.predicted_simple_count = torus_rhs_simple_count(
        r.b.orbits, [&](const std::vector<int>& orbit) {
          std::vector<int> stab_elems;
          for (int oi : stabilizer_omega(orbit.front(), r.b, r.endo.little))
            stab_elems.push_back(r.endo.little.omega[oi]);
          return conjugacy_class_count(w, stab_elems);
        });
  }
  return ctx;
}

PartitionContext rational_partition(const RootDatum& d, const FrobeniusTwist& eps,
                                    const SheafParam& l, long cap) {
  SeriesContext geo = geometric_report(d, eps, l, cap);
  if (!geo.report.stab.already_fixed)
    throw InputError("rational series need an ε-fixed parameter; stabilize first");
  PartitionContext ctx{std::move(geo.w), {std::move(geo.report), {}}};
  const WeylGroup& w = ctx.w;
  const GeometricSeriesReport& g = ctx.partition.geometric;

  // representative per orbit: lexicographically least minimal representative,
  // with the identity orbit first
  std::vector<int> order((size_t)g.b.orbits.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
  auto orbit_rep = [&](int oi) {
    int best = g.b.orbits[oi].front();
    for (int beta : g.b.orbits[oi])
      if (w.matrix(g.b.min_reps[beta]) < w.matrix(g.b.min_reps[best])) best = beta;
    return best;
  };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    bool ida = std::find(g.b.orbits[a].begin(), g.b.orbits[a].end(), g.b.identity_coset) !=
               g.b.orbits[a].end();
    bool idb = std::find(g.b.orbits[b].begin(), g.b.orbits[b].end(), g.b.identity_coset) !=
               g.b.orbits[b].end();
    if (ida != idb) return ida;
    return w.matrix(g.b.min_reps[orbit_rep(a)]) < w.matrix(g.b.min_reps[orbit_rep(b)]);
  });

  bool saw_identity = false;
  for (int oi : order) {
    RationalSeriesReport s;
    s.orbit = g.b.orbits[oi];
    s.beta = orbit_rep(oi);
    s.form = g.forms[s.beta];
    s.s_twist = Twist{g.q, w.matrix(g.b.min_reps[s.beta]) * g.stab.effective.matrix};
    s.omega_beta = stabilizer_omega(s.beta, g.b, g.endo.little);
    bool is_identity_orbit =
        std::find(s.orbit.begin(), s.orbit.end(), g.b.identity_coset) != s.orbit.end();
    if (is_identity_orbit) {
      saw_identity = true;
      s.omega_eps = g.omega_eps;
      // β = 1: Ω_{L,1} = Ω_L^ε
      std::vector<int> stab_of_identity = stabilizer_omega(g.b.identity_coset, g.b, g.endo.little);
      if (stab_of_identity != g.omega_eps)
        throw IdentityViolation("beta-one-identity", "Ω_{L,1} != Ω_L^ε");
    }
    if (g.endo.little.phi_l.all.empty()) {
      std::vector<int> stab_elems;
      for (int oi2 : s.omega_beta) stab_elems.push_back(g.endo.little.omega[oi2]);
      s.predicted_simple_count = conjugacy_class_count(w, stab_elems);
    }
    ctx.partition.series.push_back(std::move(s));
  }
  if (!saw_identity)
    throw IdentityViolation("beta-one-presence", "no orbit contains the identity coset");
  size_t total = 0;
  for (const auto& s : ctx.partition.series) total += s.orbit.size();
  if (total != g.b.cosets.size())
    throw IdentityViolation("partition", "orbit sizes do not sum to |𝔅_L|");
  return ctx;
}

void DisconnectedInput::check() const {
  pi0.check(datum0);
  for (const auto& m : pi0.action)
    if (!(m * tau.matrix == tau.matrix * m))
      throw InputError("ε must commute with the pi0 action on X");
  auto p0 = prime_of_prime_power(q);
  if (!p0 || *p0 != p) throw InputError("q must be a power of p");
}

namespace {

using Elem = ExtendedWeylGroup::Elem;

// ε-conjugate of an extended element: the matrix is conjugated by the twist,
// the component is untouched (the twist commutes with π₀ componentwise).
Elem eps_conjugate_ext(const ExtendedWeylGroup& w, const IntMat& e_mat, const Elem& x) {
  IntMat p = e_mat * w.matrix(x) * integer_inverse(e_mat);
  IntMat base = p * integer_inverse(w.pi0().action[x.c]);
  int v = w.base().index_of(base);
  if (v < 0)
    throw IdentityViolation("twist-normalizes-weyl",
                            "ε-conjugate of an extended element escaped W° ⋊ π₀");
  return {v, x.c};
}

ExtendedLittleGroups ext_little_groups(const ExtendedWeylGroup& w, const SheafParam& l) {
  ExtendedLittleGroups out;
  out.phi_l = endoscopic_roots(l, w.base().datum());
  const RootDatum& d = w.base().datum();
  std::set<int> pos(out.phi_l.positive.begin(), out.phi_l.positive.end());
  for (const Elem& x : w.all_elements()) {
    RatVec img = w.apply(x, l.vector);
    for (auto& e : img) e = e.mod1();
    if (!(make_param_unchecked(img, l.p) == l)) continue;
    out.w_l.push_back(x);
    bool pinned = true;
    IntMat m = w.matrix(x);
    for (int r : out.phi_l.positive) {
      int idx = d.root_index(m.apply(d.roots[r]));
      if (idx < 0 || !pos.count(idx)) {
        pinned = false;
        break;
      }
    }
    if (pinned) out.omega.push_back(x);
  }
  for (size_t i = 0; i < out.omega.size(); ++i)
    if (out.omega[i].c == 0) out.omega0.push_back((int)i);
  return out;
}

}  // namespace

DisconnectedSeriesContext disconnected_geometric_report(const DisconnectedInput& in,
                                                        const SheafParam& l, long cap) {
  in.check();
  DisconnectedSeriesContext ctx{
      ExtendedWeylGroup::extend(WeylGroup::generate(in.datum0, cap), in.pi0), {}};
  const ExtendedWeylGroup& w = ctx.w;
  const WeylGroup& w0 = w.base();
  DisconnectedGeometricReport& r = ctx.report;
  r.input = in;
  r.l = l;
  if (l.denominator % in.p == 0) throw InputError("parameter order not prime to p");

  // the W°-orbit must be ε-stable here; stabilize within W°
  r.stab = stabilize(w0, Twist{in.q, in.tau.matrix}, l);
  const Twist& e = r.stab.effective;

  r.endo = endoscopic_datum(in.datum0, l, w0);
  r.b0 = b_set(w0, e, l, r.endo.little);
  for (size_t beta = 0; beta < r.b0.cosets.size(); ++beta)
    r.forms.push_back(rational_form((int)beta, r.b0, r.endo, w0, e));

  r.ext = ext_little_groups(w, l);

  // Ω_L° must be Ω_L ∩ W° and match the connected computation
  {
    std::vector<int> omega0_base;
    for (int i : r.ext.omega0) omega0_base.push_back(r.ext.omega[i].w);
    std::sort(omega0_base.begin(), omega0_base.end());
    std::vector<int> omega_conn = r.endo.little.omega;
    std::sort(omega_conn.begin(), omega_conn.end());
    if (omega0_base != omega_conn)
      throw IdentityViolation("omega-restriction", "Ω_L ∩ W° != Ω_L°");
  }

  // Ad_ε action of the full Ω_L on 𝔅_L°
  std::map<int, int> elem_to_coset;
  for (size_t bi = 0; bi < r.b0.cosets.size(); ++bi)
    for (int x : r.b0.cosets[bi]) elem_to_coset[x] = (int)bi;
  r.ext_action.assign(r.ext.omega.size(), std::vector<int>(r.b0.cosets.size(), -1));
  for (size_t oi = 0; oi < r.ext.omega.size(); ++oi) {
    Elem om = r.ext.omega[oi];
    Elem eom_inv = w.inverse(eps_conjugate_ext(w, e.matrix, om));
    for (size_t bi = 0; bi < r.b0.cosets.size(); ++bi) {
      Elem img = w.mul(w.mul(om, Elem{r.b0.min_reps[bi], 0}), eom_inv);
      if (img.c != 0)
        throw IdentityViolation("ad-epsilon-extended",
                                "twisted conjugate left the identity component");
      auto it = elem_to_coset.find(img.w);
      if (it == elem_to_coset.end())
        throw IdentityViolation("ad-epsilon-extended",
                                "twisted conjugate left the ε-fixed set");
      r.ext_action[oi][bi] = it->second;
    }
    // consistency with the Ω_L°-action computed downstairs
    if (om.c == 0) {
      auto base_it = std::find(r.endo.little.omega.begin(), r.endo.little.omega.end(), om.w);
      if (base_it != r.endo.little.omega.end()) {
        size_t base_oi = base_it - r.endo.little.omega.begin();
        if (r.ext_action[oi] != r.b0.action[base_oi])
          throw IdentityViolation("ad-epsilon-extended",
                                  "extended action disagrees with the W° action");
      }
    }
  }
  // orbits of the full Ω_L
  {
    std::vector<bool> seen(r.b0.cosets.size(), false);
    for (size_t bi = 0; bi < r.b0.cosets.size(); ++bi) {
      if (seen[bi]) continue;
      std::set<int> orbit{(int)bi};
      std::vector<int> queue{(int)bi};
      while (!queue.empty()) {
        int x = queue.back();
        queue.pop_back();
        for (size_t oi = 0; oi < r.ext.omega.size(); ++oi) {
          int y = r.ext_action[oi][x];
          if (orbit.insert(y).second) queue.push_back(y);
        }
      }
      for (int x : orbit) seen[x] = true;
      r.ext_orbits.emplace_back(orbit.begin(), orbit.end());
    }
  }

  // W°-orbit decomposition of W·l
  std::set<SheafParam> full_orbit;
  {
    std::vector<SheafParam> queue{l};
    full_orbit.insert(l);
    while (!queue.empty()) {
      SheafParam x = queue.back();
      queue.pop_back();
      for (const Elem& g : w.all_elements()) {
        RatVec img = w.apply(g, x.vector);
        for (auto& v : img) v = v.mod1();
        SheafParam y = make_param_unchecked(img, l.p);
        if (full_orbit.insert(y).second) queue.push_back(y);
      }
    }
  }
  {
    std::set<SheafParam> assigned;
    for (const auto& x : full_orbit) {
      if (assigned.count(x)) continue;
      ++r.w0_orbits_in_wl;
      std::vector<SheafParam> queue{x};
      assigned.insert(x);
      while (!queue.empty()) {
        SheafParam y = queue.back();
        queue.pop_back();
        for (int g : w0.generators()) {
          RatVec img = w0.matrix(g).apply(y.vector);
          for (auto& v : img) v = v.mod1();
          SheafParam z = make_param_unchecked(img, l.p);
          if (assigned.insert(z).second) queue.push_back(z);
        }
      }
    }
  }
  // independent count |W° \ W / W_L|
  {
    std::set<Elem> w_l_set(r.ext.w_l.begin(), r.ext.w_l.end());
    std::set<Elem> assigned;
    for (const Elem& x : w.all_elements()) {
      if (assigned.count(x)) continue;
      ++r.double_cosets;
      std::vector<Elem> queue{x};
      assigned.insert(x);
      while (!queue.empty()) {
        Elem y = queue.back();
        queue.pop_back();
        for (int g : w0.generators()) {
          Elem z = w.mul(Elem{g, 0}, y);
          if (assigned.insert(z).second) queue.push_back(z);
        }
        for (const Elem& v : r.ext.w_l) {
          Elem z = w.mul(y, v);
          if (assigned.insert(z).second) queue.push_back(z);
        }
      }
    }
  }
  if (r.w0_orbits_in_wl != r.double_cosets)
    throw IdentityViolation("double-coset-count",
                            "#(W°-orbits in W·l) != |W°\\W/W_L|");

  // π₀-stabilizer of the W°-orbit vs Ω_L/Ω_L°
  {
    std::set<SheafParam> w0_orbit;
    std::vector<SheafParam> queue{l};
    w0_orbit.insert(l);
    while (!queue.empty()) {
      SheafParam x = queue.back();
      queue.pop_back();
      for (int g : w0.generators()) {
        RatVec img = w0.matrix(g).apply(x.vector);
        for (auto& v : img) v = v.mod1();
        SheafParam y = make_param_unchecked(img, l.p);
        if (w0_orbit.insert(y).second) queue.push_back(y);
      }
    }
    for (int c = 0; c < in.pi0.size; ++c) {
      RatVec img = in.pi0.action[c].apply(l.vector);
      for (auto& v : img) v = v.mod1();
      if (w0_orbit.count(make_param_unchecked(img, l.p))) r.pi0_orbit_stabilizer.push_back(c);
    }
    // image of Ω_L under the component projection must be exactly this
    // stabilizer, with kernel Ω_L°
    std::set<int> proj;
    for (const Elem& om : r.ext.omega) proj.insert(om.c);
    std::set<int> stab(r.pi0_orbit_stabilizer.begin(), r.pi0_orbit_stabilizer.end());
    if (proj != stab)
      throw IdentityViolation("pi0-stabilizer",
                              "image of Ω_L in π₀ differs from Stab_{π₀}(W°·l)");
    if (r.ext.omega.size() != r.ext.omega0.size() * proj.size())
      throw IdentityViolation("pi0-stabilizer", "|Ω_L| != |Ω_L°| · |Stab_{π₀}(W°·l)|");
  }

  if (r.ext.phi_l.all.empty()) {
    r.predicted_simple_count = torus_rhs_simple_count(
        r.ext_orbits, [&](const std::vector<int>& orbit) {
          std::vector<Elem> stab;
          for (size_t oi = 0; oi < r.ext.omega.size(); ++oi)
            if (r.ext_action[oi][orbit.front()] == orbit.front())
              stab.push_back(r.ext.omega[oi]);
          return conjugacy_class_count(w, stab);
        });
  }
  return ctx;
}

DisconnectedRationalContext disconnected_rational_report(const DisconnectedInput& in,
                                                         const SheafParam& l, long cap) {
  in.check();
  DisconnectedRationalContext ctx{
      ExtendedWeylGroup::extend(WeylGroup::generate(in.datum0, cap), in.pi0), {}};
  const ExtendedWeylGroup& w = ctx.w;
  const WeylGroup& w0 = w.base();
  DisconnectedRationalReport& r = ctx.report;
  r.input = in;
  r.l = l;
  Twist e{in.q, in.tau.matrix};
  if (!(e.apply(l) == l))
    throw InputError("rational series need an ε-fixed parameter");
  r.endo = endoscopic_datum(in.datum0, l, w0);

  // the form for β = 1 is the finite part of ε itself
  BSet b0 = b_set(w0, e, l, r.endo.little);
  r.form = rational_form(b0.identity_coset, b0, r.endo, w0, e);

  ExtendedLittleGroups ext = ext_little_groups(w, l);
  std::set<int> w_l0(r.endo.little.w_l0.elements.begin(), r.endo.little.w_l0.elements.end());
  for (const Elem& om : ext.omega) {
    Elem img = eps_conjugate_ext(w, e.matrix, om);
    if (img == om) r.omega_eps.push_back(om);
    Elem t = w.mul(om, w.inverse(img));
    if (t.c == 0 && w_l0.count(t.w)) r.omega_l1.push_back(om);
  }
  if (r.omega_eps != r.omega_l1)
    throw IdentityViolation("beta-one-fixed-points",
                            "{ω : ε(ω) = ω} != {ω : ω ε(ω)^{-1} ∈ W_L°} in W");
  // two layers: Ω°_{L,1} sits inside Ω_{L,1} with quotient the π₀-part
  std::set<int> pi0_part;
  for (size_t i = 0; i < r.omega_l1.size(); ++i) {
    if (r.omega_l1[i].c == 0) r.omega0_l1.push_back((int)i);
    pi0_part.insert(r.omega_l1[i].c);
  }
  r.pi0_part.assign(pi0_part.begin(), pi0_part.end());
  if (r.omega_l1.size() != r.omega0_l1.size() * r.pi0_part.size())
    throw IdentityViolation("two-layer-structure",
                            "|Ω_{L,1}| != |Ω°_{L,1}| · |π₀-part|");
  // the π₀-part is the stabilizer of (W°·l, β=1): from W_{L,1} = Ω_{L,1}·W_L°
  // the projection image is the same set; verified against a direct sweep
  {
    std::set<int> direct;
    for (const Elem& v : ext.w_l) {
      Elem img = eps_conjugate_ext(w, e.matrix, v);
      Elem t = w.mul(v, w.inverse(img));
      if (t.c == 0 && w_l0.count(t.w)) direct.insert(v.c);
    }
    if (direct != pi0_part)
      throw IdentityViolation("two-layer-structure",
                              "π₀-part of W_{L,1} differs from that of Ω_{L,1}");
  }

  if (ext.phi_l.all.empty())
    r.predicted_simple_count = conjugacy_class_count(w, r.omega_eps);
  return ctx;
}

}  // namespace dls
