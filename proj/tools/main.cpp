// dlseries: endoscopic parametrization data for Deligne-Lusztig series.
//
// Subcommands read one JSON job config (--config) and write one JSON report
// (--out or stdout). Exit code 0 = success, 1 = bad input, 2 = a structural
// identity that should hold unconditionally failed (the report names it).

#include <CLI11.hpp>
#include <fstream>
#include <future>
#include <iostream>

#include "dlseries/report_json.hpp"

namespace {

using dls::Json;

struct Options {
  std::string config_path;
  std::string out_path;
  long max_weyl = dls::kDefaultWeylCap;
  dls::Int denominator_bound = 12;
  int jobs = 1;
  std::string format = "json";
};

std::string fnv1a(const std::string& s) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  snprintf(buf, sizeof buf, "fnv1a:%016llx", h);
  return buf;
}

Json load_config(const Options& opt) {
  if (opt.config_path.empty()) throw dls::InputError("missing --config <path>");
  std::ifstream in(opt.config_path);
  if (!in) throw dls::InputError("cannot open config file: " + opt.config_path);
  Json cfg;
  try {
    in >> cfg;
  } catch (const std::exception& e) {
    throw dls::InputError(std::string("config is not valid JSON: ") + e.what());
  }
  return cfg;
}

dls::IntMat parse_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) throw dls::InputError("matrix must be a nonempty array of rows");
  dls::IntMat m((int)j.size(), (int)j[0].size());
  for (int i = 0; i < m.rows; ++i) {
    if ((int)j[i].size() != m.cols) throw dls::InputError("ragged matrix in config");
    for (int k = 0; k < m.cols; ++k) m(i, k) = j[i][k].get<dls::Int>();
  }
  return m;
}

dls::RootDatum parse_datum(const Json& cfg) {
  if (!cfg.contains("datum")) throw dls::InputError("config needs a \"datum\" block");
  const Json& d = cfg["datum"];
  if (d.contains("family")) {
    return dls::RootDatum::named(dls::parse_family(d.at("family").get<std::string>()),
                                 d.at("rank").get<int>(),
                                 dls::parse_isogeny(d.at("isogeny").get<std::string>()));
  }
  int rank = d.at("rank").get<int>();
  if (!d.contains("roots")) {
    if (d.contains("torus") && d["torus"].get<bool>()) return dls::RootDatum::torus(rank);
    throw dls::InputError("datum needs either family/rank/isogeny, torus: true, or explicit roots");
  }
  std::vector<dls::IntVec> roots, coroots, simple;
  for (const auto& r : d.at("roots")) roots.push_back(r.get<dls::IntVec>());
  for (const auto& r : d.at("coroots")) coroots.push_back(r.get<dls::IntVec>());
  for (const auto& s : d.at("simple")) {
    if (s.is_array())
      simple.push_back(s.get<dls::IntVec>());
    else
      simple.push_back(roots.at(s.get<size_t>()));
  }
  dls::RootDatum out = dls::RootDatum::from_lists(rank, roots, coroots, simple);
  auto bad = out.validate();
  if (!bad.empty()) throw dls::InputError("explicit datum invalid: " + bad.front());
  return out;
}

dls::BasedAutomorphism parse_tau(const Json& cfg, const dls::RootDatum& d) {
  if (!cfg.contains("tau")) return dls::BasedAutomorphism::identity(d);
  const Json& t = cfg["tau"];
  if (t.contains("permutation"))
    return dls::BasedAutomorphism::from_simple_permutation(
        d, t["permutation"].get<std::vector<int>>());
  if (t.contains("matrix"))
    return dls::BasedAutomorphism::from_matrix(d, parse_matrix(t["matrix"]));
  throw dls::InputError("tau needs \"permutation\" or \"matrix\"");
}

dls::FrobeniusTwist parse_twist(const Json& cfg, const dls::RootDatum& d) {
  if (!cfg.contains("q")) throw dls::InputError("config needs \"q\"");
  dls::Int q = cfg["q"].get<dls::Int>();
  auto p0 = dls::prime_of_prime_power(q);
  if (!p0) throw dls::InputError("q is not a prime power");
  dls::Int p = cfg.contains("p") ? cfg["p"].get<dls::Int>() : *p0;
  return dls::FrobeniusTwist::make(q, p, parse_tau(cfg, d));
}

dls::SheafParam parse_sheaf(const Json& cfg, const dls::RootDatum& d, dls::Int p) {
  if (!cfg.contains("sheaf")) throw dls::InputError("config needs a \"sheaf\" array");
  dls::RatVec v;
  for (const auto& s : cfg["sheaf"]) v.push_back(dls::Rat::parse(s.get<std::string>()));
  return dls::make_param(v, d, p);
}

dls::Pi0 parse_pi0(const Json& cfg, const dls::RootDatum& d) {
  const Json& p = cfg.at("pi0");
  dls::Pi0 out;
  out.table = p.at("table").get<std::vector<std::vector<int>>>();
  out.size = (int)out.table.size();
  for (const auto& a : p.at("action")) {
    if (a.contains("permutation"))
      out.action.push_back(dls::BasedAutomorphism::from_simple_permutation(
                               d, a["permutation"].get<std::vector<int>>())
                               .matrix);
    else if (a.contains("matrix"))
      out.action.push_back(dls::BasedAutomorphism::from_matrix(d, parse_matrix(a["matrix"])).matrix);
    else
      throw dls::InputError("pi0 action entries need \"permutation\" or \"matrix\"");
  }
  out.check(d);
  return out;
}

dls::oracle::MatrixGroupSpec parse_census_spec(const Json& j) {
  dls::oracle::MatrixGroupSpec spec;
  spec.family = dls::oracle::parse_matrix_family(j.at("family").get<std::string>());
  spec.n = j.at("n").get<int>();
  spec.q = j.at("q").get<dls::Int>();
  return spec;
}

// ---- subcommand payloads ----

Json run_datum(const Json& cfg, const Options&) {
  dls::RootDatum d = parse_datum(cfg);
  return dls::datum_report(d);
}

Json run_endoscopy(const Json& cfg, const Options& opt) {
  dls::RootDatum d = parse_datum(cfg);
  dls::FrobeniusTwist eps = parse_twist(cfg, d);
  dls::SheafParam l = parse_sheaf(cfg, d, eps.p);
  auto ctx = dls::geometric_report(d, eps, l, opt.max_weyl);
  return dls::endoscopy_report(ctx.w, ctx.report);
}

Json run_series(const std::string& kind, const Json& cfg, const Options& opt) {
  dls::RootDatum d = parse_datum(cfg);
  if (cfg.contains("pi0")) {
    dls::DisconnectedInput in;
    in.datum0 = d;
    in.pi0 = parse_pi0(cfg, d);
    dls::FrobeniusTwist eps = parse_twist(cfg, d);
    in.q = eps.q;
    in.p = eps.p;
    in.tau = eps.tau;
    dls::SheafParam l = parse_sheaf(cfg, d, in.p);
    if (kind == "geom") {
      auto ctx = dls::disconnected_geometric_report(in, l, opt.max_weyl);
      return dls::disconnected_geometric_json(ctx.w, ctx.report);
    }
    auto ctx = dls::disconnected_rational_report(in, l, opt.max_weyl);
    return dls::disconnected_rational_json(ctx.w, ctx.report);
  }
  dls::FrobeniusTwist eps = parse_twist(cfg, d);
  dls::SheafParam l = parse_sheaf(cfg, d, eps.p);
  if (kind == "geom") {
    auto ctx = dls::geometric_report(d, eps, l, opt.max_weyl);
    return dls::geometric_series_json(ctx.w, ctx.report);
  }
  auto ctx = dls::rational_partition(d, eps, l, opt.max_weyl);
  return dls::rational_partition_json(ctx.w, ctx.partition);
}

Json run_embed(const Json& cfg, const Options& opt) {
  dls::RootDatum d = parse_datum(cfg);
  dls::RegularEmbedding emb = dls::regular_embedding(d);
  Json out = dls::embedding_report(d, emb);
  if (cfg.contains("sheaf")) {
    dls::Int p = 0;
    if (cfg.contains("q")) {
      p = parse_twist(cfg, d).p;
    } else if (cfg.contains("p")) {
      p = cfg["p"].get<dls::Int>();
    } else {
      throw dls::InputError("embed with a sheaf needs p or q");
    }
    dls::SheafParam l = parse_sheaf(cfg, d, p);
    dls::WeylGroup wbig = dls::WeylGroup::generate(emb.big, opt.max_weyl);
    auto ext = dls::extend_to_embedding(emb, l, wbig, dls::endoscopic_roots(l, d));
    out["extension"] = Json{{"parameter", dls::to_json(l)},
                            {"extended_parameter", dls::to_json(ext.l_c)},
                            {"omega_upstairs_order", ext.little_c.omega.size()},
                            {"phi_upstairs", ext.phi_lc}};
  }
  return out;
}

Json run_census(const Json& cfg, const Options&) {
  if (!cfg.contains("census")) throw dls::InputError("config needs a \"census\" block");
  return dls::census_json(dls::oracle::census(parse_census_spec(cfg["census"])));
}

Json run_compare(const Json& cfg, const Options& opt) {
  if (!cfg.contains("census")) throw dls::InputError("config needs a \"census\" block");
  if (!cfg.contains("datum")) throw dls::InputError("config needs a \"datum\" block");
  const Json& d = cfg["datum"];
  if (!d.contains("family"))
    throw dls::InputError("compare needs a named datum (family/rank/isogeny)");
  dls::Int q = cfg.at("q").get<dls::Int>();
  dls::Int bound = cfg.contains("options") && cfg["options"].contains("denominator_bound")
                       ? cfg["options"]["denominator_bound"].get<dls::Int>()
                       : opt.denominator_bound;
  auto rep = dls::oracle::compare(dls::parse_family(d.at("family").get<std::string>()),
                                  d.at("rank").get<int>(),
                                  dls::parse_isogeny(d.at("isogeny").get<std::string>()), q,
                                  bound, parse_census_spec(cfg["census"]));
  return dls::compare_json(rep);
}

// one sweep case: every structural identity along the pipeline is exercised
Json sweep_case(const dls::RootDatum& d, const dls::WeylGroup& w,
                const dls::FrobeniusTwist& eps, const dls::SheafParam& l) {
  dls::Twist twist = dls::Twist::of(eps);
  dls::Stabilization stab = dls::stabilize(w, twist, l);
  dls::LittleGroups little = dls::little_groups(w, l);
  dls::BSet b = dls::b_set(w, stab.effective, l, little);
  dls::Coinvariants ci = dls::coinvariants(w, little, b);
  dls::steinberg_component_group(d, l, w, little);
  auto fixed = dls::fixed_omega(w, stab.effective, little);
  auto stab1 = dls::stabilizer_omega(b.identity_coset, b, little);
  if (stab1 != fixed)
    throw dls::IdentityViolation("beta-one-identity", "stabilizer of beta=1 differs from fixed subgroup");
  dls::EndoscopicDatum endo = dls::endoscopic_datum(d, l, w);
  for (size_t beta = 0; beta < b.cosets.size(); ++beta)
    dls::rational_form((int)beta, b, endo, w, stab.effective);
  return Json{{"parameter", dls::to_json(l)},
              {"omega_order", little.omega.size()},
              {"b_set_size", b.cosets.size()},
              {"rational_series", b.orbits.size()},
              {"coinvariant_classes", ci.classes.size()},
              {"omega_eps_order", fixed.size()}};
}

Json run_sweep(const Json& cfg, const Options& opt) {
  if (!cfg.contains("sweep")) throw dls::InputError("config needs a \"sweep\" block");
  const Json& sw = cfg["sweep"];
  dls::Int bound = sw.contains("denominator_bound") ? sw["denominator_bound"].get<dls::Int>()
                                                    : opt.denominator_bound;
  struct CaseSpec {
    std::string type_label;
    dls::Family fam;
    int rank;
    dls::Isogeny iso;
    bool flip;
    dls::Int q;
  };
  std::vector<CaseSpec> specs;
  for (const auto& t : sw.at("types")) {
    dls::Family fam = dls::parse_family(t.at(0).get<std::string>());
    int rank = t.at(1).get<int>();
    dls::Isogeny iso = dls::parse_isogeny(t.at(2).get<std::string>());
    for (const auto& tau : sw.contains("taus") ? sw["taus"].get<std::vector<std::string>>()
                                               : std::vector<std::string>{"split"}) {
      bool flip = (tau == "flip");
      if (!flip && tau != "split")
        throw dls::InputError("sweep taus must be \"split\" or \"flip\"");
      if (flip && !(fam == dls::Family::A && rank >= 2)) continue;  // no flip exists
      for (const auto& qj : sw.at("qs")) {
        CaseSpec cs{t.at(0).get<std::string>() + std::to_string(rank) + "-" +
                        t.at(2).get<std::string>() + (flip ? "/flip" : "/split") + "/q" +
                        std::to_string(qj.get<dls::Int>()),
                    fam,
                    rank,
                    iso,
                    flip,
                    qj.get<dls::Int>()};
        specs.push_back(cs);
      }
    }
  }
  auto run_one = [&](const CaseSpec& cs) {
    dls::RootDatum d = dls::RootDatum::named(cs.fam, cs.rank, cs.iso);
    dls::WeylGroup w = dls::WeylGroup::generate(d, opt.max_weyl);
    std::vector<int> rev(d.simple.size());
    for (size_t i = 0; i < rev.size(); ++i) rev[i] = (int)rev.size() - 1 - (int)i;
    dls::BasedAutomorphism tau = cs.flip
                                     ? dls::BasedAutomorphism::from_simple_permutation(d, rev)
                                     : dls::BasedAutomorphism::identity(d);
    dls::FrobeniusTwist eps =
        dls::FrobeniusTwist::make(cs.q, *dls::prime_of_prime_power(cs.q), tau);
    dls::Twist twist = dls::Twist::of(eps);

    long cases = 0, skipped_unstable = 0;
    Json rows = Json::array();
    std::set<dls::SheafParam> seen;
    for (dls::Int den = 1; den <= bound; ++den) {
      if (den % eps.p == 0) continue;
      std::vector<dls::Int> idx(d.rank, 0);
      for (;;) {
        dls::RatVec v(d.rank);
        for (int i = 0; i < d.rank; ++i) v[i] = dls::Rat(idx[i], den);
        dls::SheafParam l = dls::make_param_unchecked(v, eps.p);
        if (l.denominator == den && !seen.count(l)) {
          // canonical orbit representatives only
          auto orb = dls::orbit_and_stability(w, twist, l);
          for (const auto& x : orb.elements) seen.insert(x);
          if (orb.orbit_stable) {
            ++cases;
            rows.push_back(sweep_case(d, w, eps, *orb.elements.begin()));
          } else {
            ++skipped_unstable;
          }
        }
        int i = 0;
        while (i < d.rank && ++idx[i] == den) idx[i++] = 0;
        if (i == d.rank) break;
      }
    }
    return Json{{"config", cs.type_label},
                {"orbit_cases", cases},
                {"orbits_not_eps_stable", skipped_unstable},
                {"cases", rows}};
  };

  std::vector<Json> results(specs.size());
  if (opt.jobs <= 1) {
    for (size_t i = 0; i < specs.size(); ++i) results[i] = run_one(specs[i]);
  } else {
    std::vector<std::future<Json>> futures;
    for (size_t i = 0; i < specs.size(); ++i)
      futures.push_back(std::async(std::launch::async, [&, i] { return run_one(specs[i]); }));
    for (size_t i = 0; i < specs.size(); ++i) results[i] = futures[i].get();
  }
  long total = 0;
  Json out;
  out["configs"] = Json::array();
  for (auto& r : results) {
    total += r["orbit_cases"].get<long>();
    out["configs"].push_back(std::move(r));
  }
  out["total_orbit_cases"] = total;
  out["identities"] = Json::array({"coinvariants-count", "steinberg-isomorphism",
                                   "minimal-representative-positivity", "sigma-positivity",
                                   "beta-one-identity", "semidirect-factorization",
                                   "orbit-stabilizer"});
  out["all_identities_hold"] = true;  // reaching this point means no violation threw
  return out;
}

void render_text(const Json& j, std::ostream& os, int depth = 0) {
  std::string pad(2 * depth, ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_object() || (v.is_array() && !v.empty() && (v[0].is_object() || v[0].is_array()))) {
        os << pad << k << ":\n";
        render_text(v, os, depth + 1);
      } else {
        os << pad << k << ": " << v.dump() << "\n";
      }
    }
  } else if (j.is_array()) {
    int i = 0;
    for (const auto& v : j) {
      if (v.is_object() || v.is_array()) {
        os << pad << "- [" << i << "]\n";
        render_text(v, os, depth + 1);
      } else {
        os << pad << "- " << v.dump() << "\n";
      }
      ++i;
    }
  } else {
    os << pad << j.dump() << "\n";
  }
}

int dispatch(const std::string& subcommand, const std::string& series_kind, Options& opt) {
  Json cfg = load_config(opt);
  if (cfg.contains("options")) {
    const Json& o = cfg["options"];
    if (o.contains("max_weyl")) opt.max_weyl = o["max_weyl"].get<long>();
    if (o.contains("denominator_bound"))
      opt.denominator_bound = o["denominator_bound"].get<dls::Int>();
    if (o.contains("jobs")) opt.jobs = o["jobs"].get<int>();
  }
  Json payload;
  if (subcommand == "datum")
    payload = run_datum(cfg, opt);
  else if (subcommand == "endoscopy")
    payload = run_endoscopy(cfg, opt);
  else if (subcommand == "series")
    payload = run_series(series_kind, cfg, opt);
  else if (subcommand == "embed")
    payload = run_embed(cfg, opt);
  else if (subcommand == "census")
    payload = run_census(cfg, opt);
  else if (subcommand == "compare")
    payload = run_compare(cfg, opt);
  else if (subcommand == "sweep")
    payload = run_sweep(cfg, opt);
  else
    throw dls::InputError("unknown subcommand: " + subcommand);

  // canonical hash: key-sorted dump of the config
  nlohmann::json sorted = nlohmann::json::parse(cfg.dump());
  Json out;
  out["meta"] = Json{{"tool", "dlseries"},
                     {"subcommand", subcommand + (series_kind.empty() ? "" : " " + series_kind)},
                     {"config_hash", fnv1a(sorted.dump())},
                     {"root_order_version", dls::kRootOrderVersion}};
  out["report"] = std::move(payload);

  std::string rendered;
  if (opt.format == "json") {
    rendered = out.dump(2) + "\n";
  } else if (opt.format == "text") {
    std::ostringstream os;
    render_text(out, os);
    rendered = os.str();
  } else {
    throw dls::InputError("unknown format: " + opt.format);
  }
  if (opt.out_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream f(opt.out_path, std::ios::binary);
    if (!f) throw dls::InputError("cannot write output file: " + opt.out_path);
    f << rendered;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"endoscopic parametrization data for Deligne-Lusztig series"};
  app.require_subcommand(1);
  Options opt;
  std::string series_kind;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "job config (JSON)")->required();
    sub->add_option("--out", opt.out_path, "output path (default: stdout)");
    sub->add_option("--max-weyl", opt.max_weyl, "Weyl enumeration cap");
    sub->add_option("--denominator-bound", opt.denominator_bound, "sweep bound D");
    sub->add_option("--jobs", opt.jobs, "parallel jobs for sweeps");
    sub->add_option("--format", opt.format, "json or text");
  };

  add_common(app.add_subcommand("datum", "build and validate a root datum"));
  add_common(app.add_subcommand("endoscopy", "endoscopic datum, B set and forms"));
  CLI::App* series = app.add_subcommand("series", "series reports (geometric or rational)");
  series->add_option("kind", series_kind, "geom or rat")
      ->required()
      ->check(CLI::IsMember({"geom", "rat"}));
  add_common(series);
  add_common(app.add_subcommand("embed", "regular embedding and extension checks"));
  add_common(app.add_subcommand("census", "semisimple class census of a matrix group"));
  add_common(app.add_subcommand("compare", "parameter side vs census of the dual group"));
  add_common(app.add_subcommand("sweep", "property suite over parameter grids"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  std::string sub = app.get_subcommands().front()->get_name();
  try {
    return dispatch(sub, series_kind, opt);
  } catch (const dls::IdentityViolation& e) {
    std::cerr << "identity violated [" << e.identity << "]: " << e.what() << "\n";
    return 2;
  } catch (const dls::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
