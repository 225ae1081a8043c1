#include "escalier/json_io.hpp"

namespace escalier {

Json json_of(const Q& q) { return Field::print(q); }

Json json_of(const Z& z) { return z.get_str(); }

Json json_of(const Exponent& e) {
  Json a = Json::array();
  for (int x : e.c) a.push_back(x);
  return a;
}

Json json_of(const TruncatedSeries& f) {
  Json terms = Json::array();
  for (const auto& [e, c] : f.coeffs()) terms.push_back(Json::array({json_of(e), json_of(c)}));
  Json j;
  j["n"] = f.n_main();
  if (f.n_param() > 0) j["n_param"] = f.n_param();
  j["trunc"] = f.trunc();
  j["exact"] = f.is_exact();
  j["terms"] = std::move(terms);
  j["text"] = f.to_string();
  return j;
}

Json json_of(const std::vector<TruncatedSeries>& fs) {
  Json a = Json::array();
  for (const auto& f : fs) a.push_back(json_of(f));
  return a;
}

Json json_of(const QMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(json_of(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json json_of(const Diagram& d) {
  Json j;
  j["n"] = d.dim();
  Json vs = Json::array();
  for (const auto& v : d.vertices()) vs.push_back(json_of(v));
  j["vertices"] = std::move(vs);
  return j;
}

Json json_of(const Diagram::Decomposition& dec) {
  auto cells = [](const std::vector<std::vector<Exponent>>& blocks) {
    Json out = Json::array();
    for (const auto& block : blocks) {
      Json b = Json::array();
      for (const auto& e : block) b.push_back(json_of(e));
      out.push_back(std::move(b));
    }
    return out;
  };
  Json j;
  j["A"] = cells(dec.A);
  j["Bbar"] = cells(dec.Bbar);
  j["group"] = dec.group;
  j["C"] = cells(dec.C);
  j["d"] = dec.d;
  return j;
}

Json json_of(const DivisionResult& r) {
  Json j;
  j["h"] = json_of(r.h);
  j["r"] = json_of(r.r);
  return j;
}

Json json_of(const DiagramCertificate& c) {
  Json j;
  j["trunc"] = c.trunc;
  j["pivots"] = c.pivots;
  return j;
}

Json json_of(const StandardBasisReport& r) {
  Json j;
  j["diagram"] = json_of(r.diagram);
  j["basis"] = json_of(r.basis);
  j["certificate"] = json_of(r.certificate);
  return j;
}

Json json_of(const SamuelVerdict& v) {
  Json j;
  Json holds = Json::array();
  for (bool h : v.holds) holds.push_back(h);
  j["holds"] = std::move(holds);
  j["first_failing"] = v.first_failing;
  j["witness"] = v.witness;
  j["pass"] = v.pass();
  return j;
}

Json json_of(const StanleyEntry& e) {
  Json j;
  j["gen"] = json_of(e.gen);
  j["ring_index"] = e.ring_index;
  j["degree"] = e.degree;
  return j;
}

Json json_of(const StanleyBasis& b) {
  Json j;
  Json entries = Json::array();
  for (const auto& e : b.entries) entries.push_back(json_of(e));
  j["entries"] = std::move(entries);
  j["change"] = json_of(b.change);
  j["bound"] = b.bound;
  return j;
}

Json json_of(const JacobianVerdict& v) {
  auto rows = [](const std::vector<JacobianRow>& rs) {
    Json out = Json::array();
    for (const auto& r : rs) {
      Json j;
      j["s"] = r.s;
      j["det"] = json_of(r.det);
      j["invertible"] = r.invertible;
      out.push_back(std::move(j));
    }
    return out;
  };
  Json j;
  j["full"] = rows(v.full);
  j["reduced"] = rows(v.reduced);
  j["first_failure_full"] =
      v.first_failure_full ? Json(*v.first_failure_full) : Json(nullptr);
  j["first_failure_reduced"] =
      v.first_failure_reduced ? Json(*v.first_failure_reduced) : Json(nullptr);
  j["pass"] = v.pass();
  return j;
}

Json json_of(const ExceptionalRecord& e) {
  Json j;
  j["coord"] = e.coord;
  j["birth"] = e.birth;
  return j;
}

Json json_of(const BlowupChart& c) {
  Json j;
  j["id"] = c.id;
  j["n"] = c.n;
  j["names"] = c.names;
  Json divisors = Json::array();
  for (const auto& e : c.E) divisors.push_back(json_of(e));
  j["E"] = std::move(divisors);
  j["parent"] = c.parent;
  j["center"] = c.center;
  j["pivot"] = c.pivot;
  j["birth_step"] = c.birth_step;
  Json subst = Json::array();
  for (const auto& e : c.subst) subst.push_back(json_of(e));
  j["subst"] = std::move(subst);
  return j;
}

Json json_of(const MarkedIdeal& m) {
  Json j;
  j["chart"] = m.chart;
  j["gens"] = json_of(m.gens);
  j["mu"] = m.mu;
  return j;
}

Json json_of(const TraceNode& t) {
  Json j;
  j["chart"] = t.chart;
  j["state"] = json_of(t.state);
  j["center"] = t.center;
  j["ord_origin"] = t.ord_origin;
  j["ord_n"] = t.ord_n;
  j["stage"] = t.stage;
  j["monomial_step"] = t.monomial_step;
  j["truncation_flag"] = t.truncation_flag;
  j["status"] = t.status;
  j["parent"] = t.parent;
  j["children"] = t.children;
  Json norms = Json::array();
  for (const auto& [coord, repl] : t.normalizations)
    norms.push_back(Json::array({Json(coord), json_of(repl)}));
  j["normalizations"] = std::move(norms);
  return j;
}

Json json_of(const ResolutionTrace& t) {
  Json j;
  Json charts = Json::array();
  for (const auto& c : t.charts) charts.push_back(json_of(c));
  j["charts"] = std::move(charts);
  Json nodes = Json::array();
  for (const auto& n : t.nodes) nodes.push_back(json_of(n));
  j["nodes"] = std::move(nodes);
  j["blowups"] = t.blowups;
  j["complete"] = t.complete;
  j["seed"] = std::to_string(t.seed);
  return j;
}

Json json_of(const VerifyReport& r) {
  Json j;
  j["centers_admissible"] = r.centers_admissible;
  j["divisibility"] = r.divisibility;
  j["leaves_resolved"] = r.leaves_resolved;
  j["divisors_consistent"] = r.divisors_consistent;
  j["ord_monotone"] = r.ord_monotone;
  j["hs_bounded"] = r.hs_bounded;
  j["hs_constant_on_centers"] = r.hs_constant_on_centers;
  j["notes"] = r.notes;
  j["pass"] = r.pass();
  return j;
}

Json report_of(const std::string& command, Json payload) {
  Json j;
  j["schema"] = kJsonSchema;
  j["command"] = command;
  j["result"] = std::move(payload);
  return j;
}

}  // namespace escalier
