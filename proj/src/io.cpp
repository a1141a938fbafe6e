#include "om/io.hpp"

#include <map>
#include <sstream>

namespace om {

namespace {

Json rat_json(const Rat& r) { return rat_to_string(r); }

Rat rat_of(const Json& j) {
  if (!j.is_string()) throw ConfigParse("expected a \"num/den\" string");
  try {
    return parse_rat(j.get<std::string>());
  } catch (const ConfigParse&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigParse("bad rational: " + j.get<std::string>());
  }
}

}  // namespace

Json filtration_to_json(const FiniteFiltration& f) {
  Json j;
  j["depth"] = f.depth();
  Json outs = Json::array();
  for (int w = 0; w < f.outcome_count(); ++w) {
    outs.push_back({{"id", f.outcome_id(w)}, {"p", rat_json(f.outcome_probability(w))}});
  }
  j["outcomes"] = std::move(outs);
  Json levels = Json::array();
  for (int n = 0; n <= f.depth(); ++n) {
    Json level = Json::array();
    for (int a = 0; a < f.atom_count(n); ++a) {
      Json atom = Json::array();
      for (int w : f.atom_outcomes(n, a)) atom.push_back(f.outcome_id(w));
      level.push_back(std::move(atom));
    }
    levels.push_back(std::move(level));
  }
  j["levels"] = std::move(levels);
  return j;
}

FiltrationPtr filtration_from_json(const Json& j) {
  try {
    std::vector<std::string> ids;
    std::vector<Rat> probs;
    std::map<std::string, int> index;
    for (const Json& o : j.at("outcomes")) {
      index[o.at("id").get<std::string>()] = static_cast<int>(ids.size());
      ids.push_back(o.at("id").get<std::string>());
      probs.push_back(rat_of(o.at("p")));
    }
    std::vector<std::vector<std::vector<int>>> levels;
    for (const Json& level : j.at("levels")) {
      std::vector<std::vector<int>> atoms;
      for (const Json& atom : level) {
        std::vector<int> outcomes;
        for (const Json& id : atom) {
          auto it = index.find(id.get<std::string>());
          if (it == index.end()) throw ConfigParse("unknown outcome id in levels");
          outcomes.push_back(it->second);
        }
        atoms.push_back(std::move(outcomes));
      }
      levels.push_back(std::move(atoms));
    }
    if (j.at("depth").get<int>() + 1 != static_cast<int>(levels.size())) {
      throw ConfigParse("depth does not match the number of levels");
    }
    return FiniteFiltration::make(std::move(ids), std::move(probs),
                                  std::move(levels));
  } catch (const Json::exception& e) {
    throw ConfigParse(std::string("bad filtration JSON: ") + e.what());
  }
}

Json martingale_to_json(const Martingale& f) {
  const auto& F = *f.space();
  Json terminal;
  auto values = f.terminal().values;
  for (int w = 0; w < F.outcome_count(); ++w) {
    terminal[F.outcome_id(w)] = rat_json(values[w]);
  }
  return Json{{"terminal", std::move(terminal)}};
}

Martingale martingale_from_json(const FiltrationPtr& space, const Json& j) {
  const auto& F = *space;
  std::vector<Rat> values(F.outcome_count());
  try {
    const Json& terminal = j.at("terminal");
    for (int w = 0; w < F.outcome_count(); ++w) {
      values[w] = rat_of(terminal.at(F.outcome_id(w)));
    }
  } catch (const Json::exception& e) {
    throw ConfigParse(std::string("bad martingale JSON: ") + e.what());
  }
  return Martingale::from_terminal(RandomVariable{space, std::move(values)});
}

Json stopping_to_json(const StoppingTime& nu) {
  return node_list_json(nu.antichain());
}

StoppingTime stopping_from_json(const FiltrationPtr& space, const Json& j) {
  std::vector<NodeRef> nodes;
  try {
    for (const Json& pair : j) {
      nodes.push_back(NodeRef{pair.at(0).get<int>(), pair.at(1).get<int>()});
    }
  } catch (const Json::exception& e) {
    throw ConfigParse(std::string("bad stopping-time JSON: ") + e.what());
  }
  return StoppingTime::from_antichain(space, std::move(nodes));
}

Json decomposition_to_json(const AtomicDecomposition& d) {
  Json j;
  j["source"] = d.source;
  j["kind"] = atom_kind_name(d.kind);
  Json atoms = Json::array();
  for (const WeakAtom& atom : d.atoms) {
    Json a = martingale_to_json(atom.a);
    atoms.push_back({{"k", atom.k},
                     {"nu", stopping_to_json(atom.nu)},
                     {"a", a["terminal"]},
                     {"bound", rat_json(atom.bound)}});
  }
  j["atoms"] = std::move(atoms);
  if (d.top) j["top"] = stopping_to_json(*d.top);
  return j;
}

Json phi_to_json(const OrliczFunction& phi) {
  Json j;
  switch (phi.kind()) {
    case OrliczFunction::Kind::Power:
      j["kind"] = "power";
      j["p"] = phi.p();
      break;
    case OrliczFunction::Kind::PowerLog:
      j["kind"] = "powerlog";
      j["p"] = phi.p();
      j["qlog"] = phi.qlog();
      break;
    case OrliczFunction::Kind::PiecewiseLinearConcave: {
      j["kind"] = "piecewise";
      Json knots = Json::array();
      for (const auto& k : phi.knots()) knots.push_back({k.t, k.y});
      j["knots"] = std::move(knots);
      break;
    }
  }
  j["ell"] = phi.lower_type();
  j["c_phi"] = phi.c_phi();
  return j;
}

OrliczFunction phi_from_json(const Json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const double ell = j.value("ell", 0.0);
    const double c = j.value("c_phi", 1.0);
    if (kind == "power") {
      const double p = j.at("p").get<double>();
      return OrliczFunction::power(p, ell > 0 ? ell : p, c);
    }
    if (kind == "powerlog") {
      const double p = j.at("p").get<double>();
      return OrliczFunction::power_log(p, j.at("qlog").get<double>(),
                                       ell > 0 ? ell : p, c);
    }
    if (kind == "piecewise") {
      std::vector<OrliczFunction::Knot> knots;
      for (const Json& k : j.at("knots")) {
        knots.push_back({k.at(0).get<double>(), k.at(1).get<double>()});
      }
      if (ell <= 0) throw ConfigParse("piecewise phi requires explicit ell");
      return OrliczFunction::piecewise_linear(std::move(knots), ell, c);
    }
    throw ConfigParse("unknown phi kind: " + kind);
  } catch (const Json::exception& e) {
    throw ConfigParse(std::string("bad phi JSON: ") + e.what());
  }
}

OrliczFunction parse_phi(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw ConfigParse("empty phi spec");
  try {
    if (parts[0] == "power" && parts.size() >= 2 && parts.size() <= 4) {
      const double p = std::stod(parts[1]);
      const double ell = parts.size() > 2 ? std::stod(parts[2]) : p;
      const double c = parts.size() > 3 ? std::stod(parts[3]) : 1.0;
      return OrliczFunction::power(p, ell, c);
    }
    if (parts[0] == "powerlog" && parts.size() >= 3 && parts.size() <= 5) {
      const double p = std::stod(parts[1]);
      const double qlog = std::stod(parts[2]);
      const double ell = parts.size() > 3 ? std::stod(parts[3]) : p;
      const double c = parts.size() > 4 ? std::stod(parts[4]) : 2.0;
      return OrliczFunction::power_log(p, qlog, ell, c);
    }
  } catch (const std::exception&) {
    throw ConfigParse("unparsable phi spec: " + text);
  }
  throw ConfigParse("unparsable phi spec: " + text);
}

Json node_list_json(const std::vector<NodeRef>& nodes) {
  Json j = Json::array();
  for (const NodeRef& n : nodes) j.push_back({n.level, n.index});
  return j;
}

}  // namespace om
