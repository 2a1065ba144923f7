#include "coarsedim/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace coarsedim {

namespace {

using nlohmann::json;

json rat_to_json(const Rat& r) {
  if (r.denominator() == 1) return json(r.numerator());
  return json(rat_to_string(r));
}

Rat rat_from_json(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number_unsigned()) return Rat(static_cast<long long>(j.get<unsigned long long>()));
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_float()) {
    double v = j.get<double>();
    if (v == std::floor(v)) return Rat(static_cast<long long>(v));
    throw std::invalid_argument("non-integral float distance; use \"p/q\"");
  }
  throw std::invalid_argument("expected a rational value");
}

}  // namespace

std::string space_to_json(const FiniteMetricSpace& X) {
  json j;
  j["points"] = X.points();
  json rows = json::array();
  for (int i = 0; i < X.size(); ++i) {
    json row = json::array();
    for (int k = 0; k < X.size(); ++k) row.push_back(rat_to_json(X.dist(i, k)));
    rows.push_back(row);
  }
  j["dist"] = rows;
  return j.dump(2);
}

FiniteMetricSpace space_from_json(const std::string& text) {
  json j = json::parse(text);
  std::vector<std::string> points = j.at("points").get<std::vector<std::string>>();
  std::vector<std::vector<Rat>> dist;
  for (const auto& row : j.at("dist")) {
    std::vector<Rat> r;
    for (const auto& v : row) r.push_back(rat_from_json(v));
    dist.push_back(std::move(r));
  }
  return FiniteMetricSpace(std::move(points), std::move(dist));
}

std::string cover_to_json(const TaggedCover& tc) {
  json j;
  j["families"] = tc.families;
  return j.dump(2);
}

TaggedCover cover_from_json(const std::string& text) {
  json j = json::parse(text);
  TaggedCover tc;
  tc.families =
      j.at("families").get<std::vector<std::vector<std::vector<int>>>>();
  for (auto& fam : tc.families)
    for (auto& s : fam) std::sort(s.begin(), s.end());
  return tc;
}

std::string groupoid_to_json(const FiniteGroupoid& G, const LengthFunction& len) {
  json j;
  j["partial"] = G.partial();
  j["units"] = G.units();
  json src = json::array(), rng = json::array(), inv = json::array(),
       labels = json::array(), length = json::array();
  for (int g = 0; g < G.size(); ++g) {
    src.push_back(G.src(g));
    rng.push_back(G.rng(g));
    inv.push_back(G.inv(g));
    labels.push_back(G.label(g));
    length.push_back(rat_to_json(len.values[g]));
  }
  j["src"] = src;
  j["rng"] = rng;
  j["inv"] = inv;
  j["labels"] = labels;
  j["length"] = length;
  json comp = json::array();
  for (int b = 0; b < G.size(); ++b)
    for (int a : G.arrows_with_src(G.rng(b))) {
      int c = G.compose(a, b);
      if (c >= 0) comp.push_back(json::array({a, b, c}));
    }
  j["comp"] = comp;
  return j.dump();
}

std::pair<FiniteGroupoid, LengthFunction> groupoid_from_json(
    const std::string& text) {
  json j = json::parse(text);
  auto src = j.at("src").get<std::vector<int>>();
  auto rng = j.at("rng").get<std::vector<int>>();
  auto inv = j.at("inv").get<std::vector<int>>();
  auto labels = j.at("labels").get<std::vector<std::string>>();
  bool partial = j.value("partial", false);
  std::vector<std::pair<std::pair<int, int>, int>> comp;
  for (const auto& t : j.at("comp"))
    comp.push_back({{t.at(0).get<int>(), t.at(1).get<int>()}, t.at(2).get<int>()});
  LengthFunction len;
  for (const auto& v : j.at("length")) len.values.push_back(rat_from_json(v));
  FiniteGroupoid G(std::move(src), std::move(rng), std::move(inv),
                   std::move(comp), std::move(labels), partial);
  if (static_cast<int>(len.values.size()) != G.size())
    throw std::invalid_argument("groupoid json: length array size mismatch");
  return {std::move(G), std::move(len)};
}

std::string witness_to_json(const AmenabilityWitness& w,
                            const AmenabilityReport* report) {
  json j;
  json mu = json::array();
  for (int g : w.support) mu.push_back(json::array({g, w.mu[g]}));
  j["mu"] = mu;
  if (w.mu_exact) {
    json ex = json::array();
    for (int g : w.support)
      ex.push_back(json::array({g, rat_to_string((*w.mu_exact)[g])}));
    j["mu_exact"] = ex;
  }
  j["provenance"] = provenance_name(w.provenance);
  if (report) {
    json r;
    r["pass"] = report->pass;
    r["exact_mode"] = report->exact_mode;
    r["max_fiber_excess"] = report->max_fiber_excess;
    r["max_unit_defect"] = report->max_unit_defect;
    r["max_invariance_defect"] = report->max_invariance_defect;
    if (report->exact_unit_defect)
      r["exact_unit_defect"] = rat_to_string(*report->exact_unit_defect);
    if (report->exact_invariance_defect)
      r["exact_invariance_defect"] =
          rat_to_string(*report->exact_invariance_defect);
    r["note"] = report->note;
    r["failures"] = report->failures;
    j["report"] = r;
  }
  return j.dump(2);
}

AmenabilityWitness witness_from_json(const std::string& text, int n_arrows) {
  json j = json::parse(text);
  AmenabilityWitness w;
  w.provenance = WitnessProvenance::user;
  w.mu.assign(n_arrows, 0.0);
  for (const auto& entry : j.at("mu")) {
    int g = entry.at(0).get<int>();
    if (g < 0 || g >= n_arrows)
      throw std::invalid_argument("witness json: arrow id out of range");
    w.mu[g] = entry.at(1).get<double>();
    w.support.push_back(g);
  }
  if (j.contains("mu_exact")) {
    std::vector<Rat> ex(n_arrows, Rat(0));
    for (const auto& entry : j.at("mu_exact")) {
      int g = entry.at(0).get<int>();
      if (g < 0 || g >= n_arrows)
        throw std::invalid_argument("witness json: arrow id out of range");
      ex[g] = parse_rat(entry.at(1).get<std::string>());
    }
    w.mu_exact = std::move(ex);
  }
  return w;
}

std::string pou_to_json(const PartitionOfUnity& pou) {
  json j;
  j["mode"] = pou.mode == PouMode::p_power ? "p-power" : "flat";
  j["p"] = pou.p;
  j["N"] = pou.N;
  json idx = json::array();
  for (std::size_t i = 0; i < pou.psi.size(); ++i) {
    json e;
    e["support"] = pou.supports[i];
    e["phi"] = pou.phi[i];
    json psi = json::array();
    for (const auto& r : pou.psi[i]) psi.push_back(rat_to_string(r));
    e["psi"] = psi;
    idx.push_back(e);
  }
  j["indices"] = idx;
  return j.dump(2);
}

std::string curve_to_csv(const DimensionCurve& c) {
  std::ostringstream out;
  out << "R,value\n";
  for (const auto& [r, v] : c.samples) {
    out << r << ",";
    if (v)
      out << *v << "\n";
    else
      out << "inf\n";
  }
  return out.str();
}

DimensionCurve curve_from_csv(const std::string& text) {
  DimensionCurve c;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line == "R,value") continue;  // header optional
    }
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("curve csv: missing comma in line '" + line + "'");
    long long r = std::stoll(line.substr(0, comma));
    std::string val = line.substr(comma + 1);
    if (val == "inf")
      c.samples[r] = std::nullopt;
    else
      c.samples[r] = std::stoi(val);
  }
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace coarsedim
