#include "relaxwave/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace relaxwave::io {

namespace {

CMatrix parse_matrix(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw Error(Errc::ParseError, std::string("missing key '") + key + "'");
  if (!it->is_array() || it->empty()) throw Error(Errc::ParseError, std::string(key) + " must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(it->size());
  Eigen::Index cols = -1;
  CMatrix m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = (*it)[static_cast<std::size_t>(r)];
    if (!row.is_array()) throw Error(Errc::ParseError, std::string(key) + " rows must be arrays");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(Errc::ShapeError, std::string(key) + " has ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) throw Error(Errc::ParseError, std::string(key) + " entries must be numbers");
      const double x = v.get<double>();
      if (!std::isfinite(x)) throw Error(Errc::ValueError, std::string(key) + " has a non-finite entry");
      m(r, c) = x;
    }
  }
  if (m.rows() != m.cols()) throw Error(Errc::ShapeError, std::string(key) + " must be square");
  return m;
}

json real_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json optional_matrix(const std::optional<CMatrix>& m) { return m ? to_json(*m) : json(nullptr); }

json number(double v) { return std::isfinite(v) ? json(v) : json(format_number(v)); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

SystemDef parse_system(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  if (!doc.is_object()) throw Error(Errc::ParseError, "system definition must be a JSON object");
  std::string name = "system";
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw Error(Errc::ParseError, "name must be a string");
    name = doc["name"].get<std::string>();
  }
  CMatrix a = parse_matrix(doc, "A");
  CMatrix b = parse_matrix(doc, "B");
  if (doc.contains("n")) {
    if (!doc["n"].is_number_integer()) throw Error(Errc::ParseError, "n must be an integer");
    if (doc["n"].get<long long>() != a.rows()) throw Error(Errc::ShapeError, "n does not match the size of A");
  }
  std::optional<CMatrix> s;
  if (doc.contains("S") && !doc["S"].is_null()) s = parse_matrix(doc, "S");
  return SystemDef::make(std::move(name), std::move(a), std::move(b), std::move(s));
}

SystemDef load_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

json system_to_json(const SystemDef& sys) {
  json doc;
  doc["name"] = sys.name();
  doc["n"] = sys.n();
  doc["A"] = real_rows(sys.A().real());
  doc["B"] = real_rows(sys.B().real());
  if (sys.S()) doc["S"] = real_rows(sys.S()->real());
  return doc;
}

void save_system(const SystemDef& sys, const std::filesystem::path& path) {
  write_text(path, system_to_json(sys).dump(2) + "\n");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json to_json(cplx z) { return json{{"re", number(z.real())}, {"im", number(z.imag())}}; }

json to_json(const CMatrix& m) {
  if (m.size() == 0 || m.imag().cwiseAbs().maxCoeff() == 0.0) return real_rows(m.real());
  return json{{"re", real_rows(m.real())}, {"im", real_rows(m.imag())}};
}

json to_json(const structure::ConditionResult& r) {
  json spectrum = json::array();
  for (const auto& z : r.spectrum) spectrum.push_back(to_json(z));
  return json{{"holds", r.holds}, {"reason", r.reason}, {"evidence", r.evidence}, {"spectrum", spectrum}};
}

json to_json(const structure::ConditionReport& r) {
  return json{{"A", to_json(r.condA)},         {"B", to_json(r.condB)}, {"C", to_json(r.condC)},
              {"Cprime", to_json(r.condCprime)}, {"D", to_json(r.condD)}, {"S", to_json(r.condS)},
              {"theta_est", r.theta_est},       {"m", r.m}};
}

json to_json(const reduction::ChapmanEnskogData& red) {
  json branches = json::array();
  for (const auto& br : red.branches) {
    json sub = json::array();
    for (const auto& s : br.sub)
      sub.push_back(json{{"d", to_json(s.d)}, {"mult", s.mult}, {"Pjl0", to_json(s.Pjl0)}, {"Njl0", to_json(s.Njl0)}});
    branches.push_back(json{{"c", br.c},
                            {"c_shifted", to_json(br.c_shifted)},
                            {"mult", br.mult},
                            {"semisimple", br.semisimple},
                            {"Pj0", to_json(br.Pj0)},
                            {"Sj0", to_json(br.Sj0)},
                            {"Pj1", optional_matrix(br.Pj1)},
                            {"Pj1_diffusive", optional_matrix(br.Pj1_diffusive)},
                            {"sub", sub}});
  }
  return json{{"m", red.m},
              {"h", red.h},
              {"P0", to_json(red.P0)},
              {"S0", to_json(red.S0)},
              {"P01", to_json(red.P01)},
              {"C", to_json(red.C)},
              {"D", to_json(red.D)},
              {"alpha_shift", red.alpha_shift},
              {"Cprime", to_json(red.Cprime)},
              {"branches", branches}};
}

json to_json(const reduction::HighFreqData& hf) {
  json branches = json::array();
  for (const auto& br : hf.branches) {
    json sub = json::array();
    for (const auto& s : br.sub)
      sub.push_back(json{{"beta", to_json(s.beta)},
                         {"mult", s.mult},
                         {"Pijl0", to_json(s.Pijl0)},
                         {"Thetajl0", to_json(s.Thetajl0)}});
    branches.push_back(json{{"alpha", br.alpha}, {"indices", br.indices}, {"Pij0", to_json(br.Pij0)}, {"sub", sub}});
  }
  return json{{"s", hf.s},
              {"Q", to_json(hf.Q)},
              {"Qinv", to_json(hf.Qinv)},
              {"Abar", to_json(hf.Abar)},
              {"Bbar", to_json(hf.Bbar)},
              {"branches", branches}};
}

json to_json(const std::vector<reduction::FastDecayGroup>& groups) {
  json out = json::array();
  for (const auto& g : groups)
    out.push_back(json{{"e", to_json(g.e)}, {"mult", g.mult}, {"k_index", g.k_index}, {"Fj0", to_json(g.Fj0)},
                       {"Mj0", to_json(g.Mj0)}});
  return out;
}

json to_json(const reduction::ExpansionOrderReport& rep) {
  auto slopes = [](const std::vector<reduction::BranchSlope>& list) {
    json out = json::array();
    for (const auto& b : list) {
      json residual = json::array();
      for (double r : b.residual) residual.push_back(number(r));
      out.push_back(json{{"branch", b.branch},
                         {"sub", b.sub},
                         {"slope", number(b.slope)},
                         {"fitted", b.fitted},
                         {"xi", b.xi},
                         {"residual", residual}});
    }
    return out;
  };
  return json{{"low", slopes(rep.low)}, {"high", slopes(rep.high)}, {"symmetric_gain", rep.symmetric_gain}};
}

json to_json(const std::vector<reduction::EigencurveSample>& samples) {
  json out = json::array();
  for (const auto& s : samples) {
    json values = json::array();
    for (const auto& z : s.eigenvalues) values.push_back(to_json(z));
    json pairs = json::array();
    for (const auto& [a, b] : s.coalescing) pairs.push_back(json::array({a, b}));
    out.push_back(json{{"xi", s.xi}, {"eigenvalues", values}, {"coalescing", pairs}});
  }
  return out;
}

json to_json(const rates::RateReport& rep) {
  json entries = json::array();
  for (const auto& e : rep.entries) {
    json norms = json::array();
    for (double v : e.norms) norms.push_back(number(v));
    entries.push_back(json{{"p", rates::format_exponent(e.p)},
                           {"q", rates::format_exponent(e.q)},
                           {"kind", e.kind},
                           {"fit", e.fit},
                           {"times", e.times},
                           {"norms", norms},
                           {"fitted_slope", number(e.fitted_slope)},
                           {"intercept", number(e.intercept)},
                           {"fit_residual", number(e.fit_residual)},
                           {"theorem_slope", number(e.theorem_slope)},
                           {"margin", e.margin},
                           {"deviation", number(e.deviation)},
                           {"monotone", e.monotone},
                           {"pass", e.pass}});
  }
  return json{{"system", rep.system},
              {"refined", rep.refined},
              {"all_pass", rep.all_pass()},
              {"entries", entries},
              {"metadata", rep.metadata}};
}

json to_json(const rates::KernelScan& scan) {
  json rows = json::array();
  for (const auto& r : scan.rows) {
    json norms = json::array();
    for (double v : r.norms) norms.push_back(number(v));
    rows.push_back(json{{"quantity", r.quantity},
                        {"fit", r.fit},
                        {"times", r.times},
                        {"norms", norms},
                        {"fitted", r.fitted},
                        {"slope", number(r.result.slope)},
                        {"intercept", number(r.result.intercept)},
                        {"residual", number(r.result.residual)}});
  }
  return json{{"regime", std::string(rates::to_string(scan.regime))}, {"r", rates::format_exponent(scan.r)},
              {"rows", rows}};
}

std::string CsvTable::str() const {
  std::ostringstream os;
  if (!metadata.empty()) os << "# " << metadata << "\n";
  for (std::size_t k = 0; k < header.size(); ++k) os << (k ? "," : "") << csv_escape(header[k]);
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << csv_escape(row[k]);
    os << "\n";
  }
  return os.str();
}

CsvTable eigencurves_csv(const std::vector<reduction::EigencurveSample>& samples) {
  CsvTable t;
  const std::size_t n = samples.empty() ? 0 : samples.front().eigenvalues.size();
  t.header.push_back("xi");
  for (std::size_t k = 0; k < n; ++k) {
    t.header.push_back("re_lambda" + std::to_string(k + 1));
    t.header.push_back("im_lambda" + std::to_string(k + 1));
  }
  t.header.push_back("coalescing");
  for (const auto& s : samples) {
    std::vector<std::string> row{format_number(s.xi)};
    for (const auto& z : s.eigenvalues) {
      row.push_back(format_number(z.real()));
      row.push_back(format_number(z.imag()));
    }
    std::string pairs;
    for (const auto& [a, b] : s.coalescing)
      pairs += (pairs.empty() ? "" : ";") + std::to_string(a + 1) + "-" + std::to_string(b + 1);
    row.push_back(pairs);
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable expansion_csv(const reduction::ExpansionOrderReport& rep) {
  CsvTable t;
  t.header = {"regime", "branch", "sub", "slope", "fitted"};
  auto add = [&](const char* regime, const std::vector<reduction::BranchSlope>& list) {
    for (const auto& b : list)
      t.rows.push_back({regime, std::to_string(b.branch + 1), std::to_string(b.sub + 1), format_number(b.slope),
                        b.fitted ? "true" : "false"});
  };
  add("low", rep.low);
  add("high", rep.high);
  return t;
}

CsvTable solution_csv(const profiles::GridSolution& sol) {
  CsvTable t;
  t.header.push_back("x");
  for (Eigen::Index c = 0; c < sol.values.cols(); ++c) {
    t.header.push_back("re_u" + std::to_string(c + 1));
    t.header.push_back("im_u" + std::to_string(c + 1));
  }
  for (Eigen::Index i = 0; i < sol.values.rows(); ++i) {
    std::vector<std::string> row{format_number(sol.grid.x(static_cast<int>(i)))};
    for (Eigen::Index c = 0; c < sol.values.cols(); ++c) {
      row.push_back(format_number(sol.values(i, c).real()));
      row.push_back(format_number(sol.values(i, c).imag()));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable rates_csv(const rates::RateReport& rep) {
  CsvTable t;
  t.header = {"kind", "p", "q", "t", "norm", "fitted_slope", "theorem_slope", "pass"};
  for (const auto& e : rep.entries)
    for (std::size_t k = 0; k < e.times.size(); ++k)
      t.rows.push_back({e.kind, rates::format_exponent(e.p), rates::format_exponent(e.q), format_number(e.times[k]),
                        format_number(e.norms[k]), format_number(e.fitted_slope), format_number(e.theorem_slope),
                        e.pass ? "true" : "false"});
  return t;
}

CsvTable kernel_scan_csv(const rates::KernelScan& scan) {
  CsvTable t;
  t.header = {"regime", "r", "quantity", "fit", "t", "norm", "slope"};
  for (const auto& r : scan.rows)
    for (std::size_t k = 0; k < r.times.size(); ++k)
      t.rows.push_back({std::string(rates::to_string(scan.regime)), rates::format_exponent(scan.r), r.quantity, r.fit,
                        format_number(r.times[k]), format_number(r.norms[k]),
                        r.fitted ? format_number(r.result.slope) : "nan"});
  return t;
}

CsvTable conditions_csv(const structure::ConditionReport& rep) {
  CsvTable t;
  t.header = {"condition", "holds", "reason"};
  const std::pair<const char*, const structure::ConditionResult*> list[] = {
      {"A", &rep.condA}, {"B", &rep.condB}, {"C", &rep.condC},
      {"Cprime", &rep.condCprime}, {"D", &rep.condD}, {"S", &rep.condS}};
  for (const auto& [name, r] : list) t.rows.push_back({name, r->holds ? "true" : "false", r->reason});
  t.rows.push_back({"theta_est", format_number(rep.theta_est), ""});
  t.rows.push_back({"m", std::to_string(rep.m), ""});
  return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::InvalidArgument, "write failed for " + path.string());
}

}  // namespace relaxwave::io
