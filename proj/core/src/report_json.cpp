#include "dlseries/report_json.hpp"

#include <set>

namespace dls {

Json to_json(const IntMat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows; ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const RatVec& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(x.str());
  return out;
}

Json to_json(const SheafParam& l) {
  return Json{{"vector", to_json(l.vector)}, {"denominator", l.denominator}, {"p", l.p}};
}

Json to_json(const RootDatum& d) {
  Json out;
  out["rank"] = d.rank;
  if (!d.label.empty()) out["label"] = d.label;
  out["roots"] = Json::array();
  for (const auto& r : d.roots) out["roots"].push_back(r);
  out["coroots"] = Json::array();
  for (const auto& c : d.coroots) out["coroots"].push_back(c);
  out["simple"] = d.simple;
  out["positive"] = d.positive;
  return out;
}

namespace {

Json weyl_element_json(const WeylGroup& w, int i) {
  return Json{{"perm", w.element(i).root_perm},
              {"matrix", to_json(w.matrix(i))},
              {"length", w.length(i)}};
}

}  // namespace

namespace {

// greedy generating set: indexes into `elements`
template <typename Mul>
std::vector<int> greedy_generators(size_t n, int identity_pos, Mul&& mul) {
  std::vector<int> gens;
  std::set<int> closure{identity_pos};
  while (closure.size() < n) {
    int next = -1;
    for (size_t i = 0; i < n; ++i)
      if (!closure.count((int)i)) {
        next = (int)i;
        break;
      }
    gens.push_back(next);
    std::vector<int> queue(closure.begin(), closure.end());
    closure.insert(next);
    queue.push_back(next);
    while (!queue.empty()) {
      int x = queue.back();
      queue.pop_back();
      for (int g : gens) {
        for (int y : {mul(x, g), mul(g, x)})
          if (y >= 0 && closure.insert(y).second) queue.push_back(y);
      }
    }
  }
  return gens;
}

}  // namespace

Json group_json(const WeylGroup& w, const std::vector<int>& elements) {
  Json out;
  out["order"] = elements.size();
  out["elements"] = Json::array();
  for (int i : elements) out["elements"].push_back(weyl_element_json(w, i));
  std::map<int, int> pos;
  for (size_t i = 0; i < elements.size(); ++i) pos[elements[i]] = (int)i;
  Json table = Json::array();
  for (int a : elements) {
    Json row = Json::array();
    for (int b : elements) {
      auto it = pos.find(w.mul(a, b));
      row.push_back(it == pos.end() ? -1 : it->second);
    }
    table.push_back(row);
  }
  out["table"] = table;
  int id_pos = pos.count(0) ? pos.at(0) : 0;
  auto mul = [&](int a, int b) {
    auto it = pos.find(w.mul(elements[a], elements[b]));
    return it == pos.end() ? -1 : it->second;
  };
  out["generators"] = elements.empty() ? std::vector<int>{}
                                       : greedy_generators(elements.size(), id_pos, mul);
  return out;
}

Json group_json(const ExtendedWeylGroup& w,
                const std::vector<ExtendedWeylGroup::Elem>& elements) {
  Json out;
  out["order"] = elements.size();
  out["elements"] = Json::array();
  for (const auto& e : elements)
    out["elements"].push_back(Json{{"weyl", e.w},
                                   {"component", e.c},
                                   {"matrix", to_json(w.matrix(e))}});
  std::map<std::pair<int, int>, int> pos;
  for (size_t i = 0; i < elements.size(); ++i) pos[{elements[i].w, elements[i].c}] = (int)i;
  Json table = Json::array();
  for (const auto& a : elements) {
    Json row = Json::array();
    for (const auto& b : elements) {
      auto m = w.mul(a, b);
      auto it = pos.find({m.w, m.c});
      row.push_back(it == pos.end() ? -1 : it->second);
    }
    table.push_back(row);
  }
  out["table"] = table;
  int id_pos = pos.count({0, 0}) ? pos.at({0, 0}) : 0;
  auto mul = [&](int a, int b) {
    auto m = w.mul(elements[a], elements[b]);
    auto it = pos.find({m.w, m.c});
    return it == pos.end() ? -1 : it->second;
  };
  out["generators"] = elements.empty() ? std::vector<int>{}
                                       : greedy_generators(elements.size(), id_pos, mul);
  return out;
}

Json datum_report(const RootDatum& d) {
  Json out;
  out["datum"] = to_json(d);
  out["violations"] = d.validate();
  out["lattice_torsion"] = d.lattice_torsion();
  out["fundamental_group_torsion"] = d.dual_lattice_torsion();
  out["num_roots"] = d.roots.size();
  out["num_positive"] = d.positive.size();
  return out;
}

namespace {

Json forms_json(const std::vector<RationalForm>& forms) {
  Json out = Json::array();
  for (const auto& f : forms)
    out.push_back(Json{{"beta", f.beta},
                       {"w_beta", f.w_beta},
                       {"sigma", to_json(f.sigma.matrix)},
                       {"sigma_order", f.sigma.order},
                       {"q", f.q}});
  return out;
}

Json bset_json(const WeylGroup& w, const BSet& b) {
  Json out;
  out["cosets"] = Json::array();
  for (size_t i = 0; i < b.cosets.size(); ++i)
    out["cosets"].push_back(Json{{"elements", b.cosets[i]},
                                 {"min_rep", b.min_reps[i]},
                                 {"min_rep_matrix", to_json(w.matrix(b.min_reps[i]))}});
  out["identity_coset"] = b.identity_coset;
  out["ad_action"] = b.action;
  out["orbits"] = b.orbits;
  return out;
}

Json little_json(const WeylGroup& w, const LittleGroups& little) {
  Json out;
  out["phi_l"] = little.phi_l.all;
  out["phi_l_positive"] = little.phi_l.positive;
  out["w_l_order"] = little.w_l.size();
  out["w_l0_order"] = little.w_l0.elements.size();
  out["w_l0_simple_system"] = little.w_l0.simple_system;
  out["omega"] = group_json(w, little.omega);
  return out;
}

}  // namespace

Json endoscopy_report(const WeylGroup& w, const GeometricSeriesReport& r) {
  Json out;
  out["datum"] = to_json(r.datum);
  out["q"] = r.q;
  out["p"] = r.p;
  out["tau"] = to_json(r.tau);
  out["parameter"] = to_json(r.l);
  out["stabilizing_w"] = r.stab.w;
  out["effective_twist"] = to_json(r.stab.effective.matrix);
  out["parameter_was_fixed"] = r.stab.already_fixed;
  out["endoscopic_datum"] = to_json(r.endo.h);
  out["little_groups"] = little_json(w, r.endo.little);
  out["b_set"] = bset_json(w, r.b);
  out["forms"] = forms_json(r.forms);
  out["coinvariants"] = Json{{"classes", r.coinv.classes},
                             {"orbit_to_class", r.coinv.orbit_to_class}};
  out["component_group"] = Json{{"w_s_order", r.steinberg.w_s.size()},
                                {"w_s0_order", r.steinberg.w_s0.size()},
                                {"w_s0_generating_reflections", r.steinberg.w_s0_simple},
                                {"cosets", r.steinberg.cosets},
                                {"omega_to_coset", r.steinberg.omega_to_coset}};
  out["omega_eps"] = r.omega_eps;
  return out;
}

Json geometric_series_json(const WeylGroup& w, const GeometricSeriesReport& r) {
  Json out = endoscopy_report(w, r);
  if (r.predicted_simple_count) out["predicted_simple_count"] = *r.predicted_simple_count;
  out["series_shape"] = Json{
      {"summands", r.b.cosets.size()},
      {"equivariance_group_order", r.endo.little.omega.size()},
  };
  return out;
}

Json rational_partition_json(const WeylGroup& w, const RationalPartition& p) {
  Json out;
  out["geometric"] = geometric_series_json(w, p.geometric);
  out["series"] = Json::array();
  for (const auto& s : p.series) {
    Json item;
    item["orbit"] = s.orbit;
    item["beta"] = s.beta;
    item["s_twist"] = Json{{"q", s.s_twist.q}, {"matrix", to_json(s.s_twist.matrix)}};
    item["sigma"] = to_json(s.form.sigma.matrix);
    item["omega_beta"] = s.omega_beta;
    if (s.omega_eps) item["omega_eps"] = *s.omega_eps;
    if (s.predicted_simple_count) item["predicted_simple_count"] = *s.predicted_simple_count;
    out["series"].push_back(item);
  }
  return out;
}

Json disconnected_geometric_json(const ExtendedWeylGroup& w,
                                 const DisconnectedGeometricReport& r) {
  Json out;
  out["datum0"] = to_json(r.input.datum0);
  out["pi0_order"] = r.input.pi0.size;
  out["q"] = r.input.q;
  out["p"] = r.input.p;
  out["tau"] = to_json(r.input.tau.matrix);
  out["parameter"] = to_json(r.l);
  out["stabilizing_w"] = r.stab.w;
  out["effective_twist"] = to_json(r.stab.effective.matrix);
  out["endoscopic_datum"] = to_json(r.endo.h);
  out["little_groups"] = little_json(w.base(), r.endo.little);
  out["b_set0"] = bset_json(w.base(), r.b0);
  out["forms"] = forms_json(r.forms);
  out["omega_extended"] = group_json(w, r.ext.omega);
  out["omega0_indices"] = r.ext.omega0;
  out["ext_action"] = r.ext_action;
  out["ext_orbits"] = r.ext_orbits;
  out["w0_orbits_in_wl"] = r.w0_orbits_in_wl;
  out["double_cosets"] = r.double_cosets;
  out["pi0_orbit_stabilizer"] = r.pi0_orbit_stabilizer;
  if (r.predicted_simple_count) out["predicted_simple_count"] = *r.predicted_simple_count;
  return out;
}

Json disconnected_rational_json(const ExtendedWeylGroup& w,
                                const DisconnectedRationalReport& r) {
  Json out;
  out["datum0"] = to_json(r.input.datum0);
  out["pi0_order"] = r.input.pi0.size;
  out["q"] = r.input.q;
  out["p"] = r.input.p;
  out["tau"] = to_json(r.input.tau.matrix);
  out["parameter"] = to_json(r.l);
  out["endoscopic_datum"] = to_json(r.endo.h);
  out["sigma"] = to_json(r.form.sigma.matrix);
  out["omega_eps"] = group_json(w, r.omega_eps);
  out["omega0_l1_indices"] = r.omega0_l1;
  out["pi0_part"] = r.pi0_part;
  if (r.predicted_simple_count) out["predicted_simple_count"] = *r.predicted_simple_count;
  return out;
}

Json embedding_report(const RootDatum& d, const RegularEmbedding& e) {
  Json out;
  out["source"] = to_json(d);
  out["big_datum"] = to_json(e.big);
  out["basis"] = to_json(e.basis);
  out["restriction"] = to_json(e.restriction);
  out["root_correspondence"] = e.root_correspondence;
  out["big_lattice_torsion"] = e.big.lattice_torsion();
  auto f = smith_normal_form(e.restriction);
  out["restriction_invariants"] = f.diagonal();
  return out;
}

Json census_json(const oracle::ClassCensus& c) {
  Json out;
  out["family"] = oracle::to_string(c.spec.family);
  out["n"] = c.spec.n;
  out["q"] = c.spec.q;
  out["group_order"] = c.group_order;
  out["semisimple_elements"] = c.semisimple_elements;
  out["rational_class_count"] = c.classes.size();
  out["classes"] = Json::array();
  for (const auto& cls : c.classes)
    out["classes"].push_back(Json{{"representative", cls.representative},
                                  {"size", cls.size},
                                  {"element_order", cls.element_order},
                                  {"charpoly", cls.charpoly},
                                  {"pi0", cls.pi0}});
  out["bundles"] = Json::array();
  for (const auto& b : c.bundles) out["bundles"].push_back(b.classes);
  return out;
}

Json compare_json(const oracle::CompareReport& r) {
  Json out;
  out["orbits"] = Json::array();
  for (const auto& o : r.orbits)
    out["orbits"].push_back(Json{{"parameter", to_json(o.rep)},
                                 {"orbit_size", o.orbit_size},
                                 {"rational_count", o.rational_count},
                                 {"omega_order", o.omega_order}});
  out["skipped"] = Json::array();
  for (const auto& [l, reason] : r.skipped)
    out["skipped"].push_back(Json{{"parameter", to_json(l)}, {"reason", reason}});
  out["predicted_total"] = r.predicted_total;
  out["census_total"] = r.census_total;
  Json pp = Json::array(), cp = Json::array();
  for (auto [a, b] : r.predicted_profile) pp.push_back(Json::array({a, b}));
  for (auto [a, b] : r.census_profile) cp.push_back(Json::array({a, b}));
  out["predicted_profile"] = pp;
  out["census_profile"] = cp;
  out["match"] = r.match;
  out["detail"] = r.detail;
  return out;
}

Json torus_check_json(const oracle::TorusSeriesCheck& t) {
  Json out;
  out["group_order"] = t.group_order;
  out["total_irreducibles"] = t.total_irreducibles;
  out["orbit_size"] = t.orbit_size;
  out["oracle_count"] = t.oracle_count;
  out["oracle_dims"] = t.oracle_dims;
  out["predicted_geometric"] = t.predicted_geometric;
  if (t.predicted_rational) out["predicted_rational"] = *t.predicted_rational;
  return out;
}

}  // namespace dls
