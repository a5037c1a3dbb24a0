#include "raagdiv/report.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>

#include "parallel.hpp"
#include "raagdiv/homology.hpp"

namespace raagdiv {

using nlohmann::json;
namespace fs = std::filesystem;

mpq_class parse_rational(std::string_view text, const std::string& where) {
  static const std::regex fraction(R"(^\s*([+-]?\d+)(?:/(\d+))?\s*$)");
  static const std::regex decimal(R"(^\s*([+-]?)(\d*)\.(\d+)\s*$)");
  const std::string s(text);
  std::smatch m;
  if (std::regex_match(s, m, fraction)) {
    mpz_class num(m[1].str());
    mpz_class den = m[2].matched ? mpz_class(m[2].str()) : mpz_class(1);
    if (den == 0) throw InputError(where, "zero denominator in '" + s + "'");
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
  if (std::regex_match(s, m, decimal) && !(m[2].str().empty() && m[3].str().empty())) {
    const std::string digits = m[2].str() + m[3].str();
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, m[3].str().size());
    mpq_class q(mpz_class(digits), den);
    q.canonicalize();
    return m[1].str() == "-" ? mpq_class(-q) : q;
  }
  throw InputError(where, "not a rational number: '" + s + "'");
}

std::optional<std::size_t> budget_from_env() {
  const char* v = std::getenv(kBudgetEnv);
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v, &end, 10);
  if (*end != '\0' || n == 0) {
    throw InputError(kBudgetEnv, "must be a positive integer, got '" + std::string(v) + "'");
  }
  return static_cast<std::size_t>(n);
}

void RunConfig::validate() const {
  if (rmax < 0) throw InputError("rmax", "must be >= 0");
  if (k < 0) throw InputError("k", "must be >= 0");
  if (r && *r < 0) throw InputError("r", "must be >= 0");
  if (sgn(rho) <= 0 || rho > 1) throw InputError("rho", "must lie in (0, 1]");
  if (sgn(alpha) <= 0) throw InputError("alpha", "must be positive");
  if (!is_half_integer(level)) throw InputError("level", "must be a half-integer n + 1/2");
  if (budget && *budget == 0) throw InputError("budget", "must be positive");
  if (maxdim && *maxdim < 1) throw InputError("maxdim", "must be >= 1");
  if (window && *window < 0) throw InputError("window", "must be >= 0");
  if (threads < 1) throw InputError("threads", "must be >= 1");
}

json RunConfig::to_json() const {
  json j;
  j["graph"] = graph;
  if (!chain.empty()) j["chain"] = chain;
  j["rmax"] = rmax;
  j["k"] = k;
  j["r"] = r ? json(*r) : json(nullptr);
  j["rho"] = rho.get_str();
  j["alpha"] = alpha.get_str();
  j["level"] = level.get_str();
  j["maxdim"] = maxdim ? json(*maxdim) : json(nullptr);
  j["window"] = window ? json(*window) : json(nullptr);
  j["budget"] = budget ? json(*budget) : json(nullptr);
  return j;
}

namespace {

mpq_class json_rational(const json& v, const std::string& key) {
  if (v.is_number_integer()) return mpq_class(v.get<long>());
  if (v.is_string()) return parse_rational(v.get<std::string>(), key);
  if (v.is_number_float()) {
    // Go through the shortest decimal spelling, so 0.5 stays 1/2.
    std::ostringstream os;
    os << v.get<double>();
    return parse_rational(os.str(), key);
  }
  throw InputError(key, "expected a number or a rational string");
}

int json_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw InputError(key, "expected an integer");
  return v.get<int>();
}

}  // namespace

void RunConfig::merge_json(const json& j) {
  if (!j.is_object()) throw InputError("", "config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    if (key == "graph" || key == "chain" || key == "out") {
      if (!v.is_string()) throw InputError(key, "expected a string");
      (key == "graph" ? graph : key == "chain" ? chain : out) = v.get<std::string>();
    } else if (key == "rmax") {
      rmax = json_int(v, key);
    } else if (key == "k") {
      k = json_int(v, key);
    } else if (key == "r") {
      r = json_int(v, key);
    } else if (key == "maxdim") {
      maxdim = json_int(v, key);
    } else if (key == "window") {
      window = json_int(v, key);
    } else if (key == "threads") {
      threads = json_int(v, key);
    } else if (key == "budget") {
      if (!v.is_number_integer() || v.get<long long>() <= 0) {
        throw InputError(key, "expected a positive integer");
      }
      budget = v.get<std::size_t>();
    } else if (key == "rho") {
      rho = json_rational(v, key);
    } else if (key == "alpha") {
      alpha = json_rational(v, key);
    } else if (key == "level") {
      level = json_rational(v, key);
    } else if (key == "force") {
      if (!v.is_boolean()) throw InputError(key, "expected a boolean");
      force = v.get<bool>();
    } else {
      throw InputError(key, "unknown key");
    }
  }
}

std::string graph_hash(const DefiningGraph& g) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(g.fingerprint()));
  return buf;
}

json report_header(const DefiningGraph& g, const RunConfig& cfg, std::string_view command) {
  json h;
  h["tool"] = "raagdiv";
  h["version"] = std::string(kToolVersion);
  h["command"] = std::string(command);
  h["graph_hash"] = graph_hash(g);
  h["config"] = cfg.to_json();
  h["conventions"] = {
      {"avoidance", "vertex-level: a chain is r-avoidant when every vertex has word length >= r"},
      {"slice_level", "half-integer heights; each straddling d-cube is one (d-1)-cell"},
      {"mass", "unit weight per cell"},
      {"shortlex", "generator declaration order, positive letter first"},
  };
  return h;
}

namespace {

json names_of(const DefiningGraph& g, VertexMask m) {
  json out = json::array();
  for (; m != 0; m &= m - 1) out.push_back(g.name(std::countr_zero(m)));
  return out;
}

json f_vector(const SimplicialComplex& k) {
  json out = json::array();
  for (int d = 0; d <= k.dimension(); ++d) out.push_back(k.simplices(d).size());
  return out;
}

}  // namespace

json analyze_graph(const DefiningGraph& g) {
  json j;
  j["vertices"] = g.size();
  j["edges"] = g.edges().size();
  j["connected"] = components(g).size() == 1;
  json comps = json::array();
  for (VertexMask c : components(complement(g))) comps.push_back(names_of(g, c));
  j["complement_components"] = comps;
  const auto split = join_decomposition(g);
  j["product"] = split.has_value();
  j["join_decomposition"] =
      split ? json{{"A", names_of(g, split->first)}, {"B", names_of(g, split->second)}}
            : json(nullptr);
  const SimplicialComplex l = flag_complex(g);
  const SimplicialComplex s = signed_link(l);
  j["flag_complex"] = {{"dimension", l.dimension()}, {"f_vector", f_vector(l)}};
  j["signed_link"] = {{"dimension", s.dimension()}, {"f_vector", f_vector(s)}};
  const int dd = divdim(g);
  j["divdim"] = dd;
  if (dd < 0) j["divdim_note"] = "divergence undefined / group has disconnected link directions";
  json orth = json::array();
  for (int k = 0; k < l.dimension(); ++k) {
    const OrthoplexReport rep = orthoplex_check(g, k);
    json row = {{"k", k}, {"verdict", std::string(to_string(rep.overall()))}};
    row["reasons"] = rep.reasons;
    if (rep.overall() == Verdict::pass) {
      json a = json::array(), b = json::array();
      for (int v : rep.a) a.push_back(g.name(v));
      for (int v : rep.b) b.push_back(g.name(v));
      row["a"] = a;
      row["b"] = b;
    }
    orth.push_back(row);
  }
  j["orthoplex"] = orth;
  j["div0"] = predicted_div0_class(g);
  return j;
}

namespace {

json homology_table(const SimplicialComplex& k) {
  json rows = json::array();
  for (int d = 0; d <= std::max(k.dimension(), 0); ++d) {
    const HomologyResult h = reduced_homology(k, d);
    json torsion = json::array();
    for (const auto& t : h.torsion) torsion.push_back(t.get_str());
    rows.push_back({{"dim", d}, {"betti", h.betti}, {"torsion", torsion}});
  }
  return rows;
}

}  // namespace

json homology_report(const DefiningGraph& g) {
  const SimplicialComplex l = flag_complex(g);
  const SimplicialComplex s = signed_link(l);
  json j;
  j["coefficients"] = "Z, reduced";
  j["flag_complex"] = {{"dimension", l.dimension()}, {"homology", homology_table(l)}};
  j["signed_link"] = {{"dimension", s.dimension()}, {"homology", homology_table(s)}};
  j["divdim"] = divdim(g);
  return j;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string opt_str(const std::optional<mpq_class>& q) { return q ? q->get_str() : ""; }

std::string opt_str(const std::optional<double>& d) {
  if (!d) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *d);
  return buf;
}

json opt_json(const std::optional<mpq_class>& q) { return q ? json(q->get_str()) : json(nullptr); }

json opt_json(const std::optional<double>& d) {
  // Rounded so the text is stable across platforms.
  return d ? json(std::stod(opt_str(d))) : json(nullptr);
}

void write_header_lines(std::ostream& os, const json& header) {
  for (auto it = header.begin(); it != header.end(); ++it) {
    os << "# " << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump())
       << "\n";
  }
}

}  // namespace

std::string divergence_csv(const DivergenceReport& rep, const json& header) {
  std::ostringstream os;
  write_header_lines(os, header);
  os << "r,witness,cycle_mass,lower,lower_method,upper,upper_method,corridor,reference,"
        "optimality,window_radius,flagged,note\n";
  for (const auto& row : rep.rows) {
    os << row.r << ',' << csv_field(row.witness) << ',' << row.cycle_mass << ','
       << opt_str(row.lower) << ',' << to_string(row.lower_method) << ',' << opt_str(row.upper)
       << ',' << to_string(row.upper_method) << ',' << opt_str(row.corridor) << ','
       << opt_str(row.reference) << ',' << csv_field(row.optimality) << ','
       << row.window_radius << ',' << (row.flagged ? "yes" : "no") << ','
       << csv_field(row.note) << '\n';
  }
  return os.str();
}

json divergence_json(const DivergenceReport& rep, const json& header) {
  json j;
  j["header"] = header;
  j["graph_id"] = rep.graph_id;
  j["k"] = rep.k;
  j["rho"] = rep.rho.get_str();
  j["alpha"] = rep.alpha ? json(rep.alpha->get_str()) : json(nullptr);
  j["predicted_class"] = rep.predicted_class;
  json ex = json::object();
  for (const auto& [w, e] : rep.exponents) {
    ex[w] = {{"lower", opt_json(e.first)}, {"upper", opt_json(e.second)}};
  }
  j["fitted_exponents"] = ex;
  j["push_constant"] = rep.push_constant ? json(*rep.push_constant) : json(nullptr);
  j["max_push_ratio"] = opt_json(rep.max_push_ratio);
  std::size_t flagged = 0;
  for (const auto& row : rep.rows) flagged += row.flagged ? 1 : 0;
  j["rows"] = rep.rows.size();
  j["flagged_rows"] = flagged;
  j["notes"] = rep.notes;
  j["values"] = "witness-based lower bounds and constructive upper bounds, not the supremum";
  return j;
}

std::string bb_csv(const BbTable& t, const json& header) {
  std::ostringstream os;
  write_header_lines(os, header);
  os << "r,sigma_mass,fill_mass,lower_bound,optimality,window_radius,lower_bound_prev,"
        "window_cells,slack\n";
  for (const auto& row : t.rows) {
    os << row.r << ',' << row.sigma_mass << ',' << row.fill_mass << ','
       << row.lower_bound.get_str() << ',' << to_string(row.optimality) << ','
       << row.window_radius << ',' << row.lower_bound_prev.get_str() << ','
       << row.window_cells << ',' << row.slack << '\n';
  }
  return os.str();
}

json bb_json(const BbTable& t, const json& header) {
  json j;
  j["header"] = header;
  j["k"] = t.k;
  j["level"] = t.level.get_str();
  j["rows"] = t.rows.size();
  j["fitted_exponent"] = opt_json(t.exponent);
  j["expected_exponent"] = 2 * (t.k + 1);
  bool above = true;
  for (const auto& row : t.rows) above = above && mpq_class(row.fill_mass) >= row.lower_bound;
  j["fill_at_least_lower_bound"] = above;
  j["truncated"] = t.truncated;
  j["truncation_reason"] = t.truncated ? json(t.truncation_reason) : json(nullptr);
  return j;
}

CubicalChain parse_chain(const Raag& raag, std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("byte " + std::to_string(e.byte), "invalid JSON");
  }
  if (!j.is_object()) throw InputError("", "chain must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "dim" && it.key() != "cells") throw InputError(it.key(), "unknown key");
  }
  if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() < 0) {
    throw InputError("dim", "missing or not a nonnegative integer");
  }
  const int dim = j["dim"].get<int>();
  if (!j.contains("cells") || !j["cells"].is_array()) {
    throw InputError("cells", "missing or not an array");
  }
  const auto& g = raag.graph();
  CubicalChain c(dim);
  for (std::size_t i = 0; i < j["cells"].size(); ++i) {
    const std::string where = "cells[" + std::to_string(i) + "]";
    const json& cell = j["cells"][i];
    if (!cell.is_object()) throw InputError(where, "not an object");
    for (auto it = cell.begin(); it != cell.end(); ++it) {
      if (it.key() != "base" && it.key() != "labels" && it.key() != "coeff") {
        throw InputError(where + "." + it.key(), "unknown key");
      }
    }
    if (!cell.contains("base") || !cell["base"].is_string()) {
      throw InputError(where + ".base", "missing or not a string");
    }
    GroupElement base;
    try {
      base = raag.parse(cell["base"].get<std::string>());
    } catch (const InputError& e) {
      throw InputError(where + ".base", e.what());
    }
    if (!cell.contains("labels") || !cell["labels"].is_array()) {
      throw InputError(where + ".labels", "missing or not an array");
    }
    VertexMask labels = 0;
    for (std::size_t k = 0; k < cell["labels"].size(); ++k) {
      const std::string lw = where + ".labels[" + std::to_string(k) + "]";
      const json& name = cell["labels"][k];
      if (!name.is_string()) throw InputError(lw, "not a string");
      const int v = g.index_of(name.get<std::string>());
      if (v < 0) throw InputError(lw, "unknown generator '" + name.get<std::string>() + "'");
      if ((labels >> v) & 1U) throw InputError(lw, "repeated label");
      for (VertexMask m = labels; m != 0; m &= m - 1) {
        if (!g.adjacent(v, std::countr_zero(m))) {
          throw InputError(lw, "labels do not commute");
        }
      }
      labels |= VertexMask{1} << v;
    }
    if (std::popcount(labels) != dim) {
      throw InputError(where + ".labels", "expected " + std::to_string(dim) + " labels");
    }
    if (!cell.contains("coeff") || !cell["coeff"].is_number_integer()) {
      throw InputError(where + ".coeff", "missing or not an integer");
    }
    c.add(Cube{base, labels}, cell["coeff"].get<long>());
  }
  return c;
}

json chain_json(const Raag& raag, const CubicalChain& c) {
  json cells = json::array();
  for (const auto& [cube, v] : c.coeffs()) {
    cells.push_back({{"base", raag.format(cube.base)},
                     {"labels", names_of(raag.graph(), cube.labels)},
                     {"coeff", v}});
  }
  return {{"dim", c.dim()}, {"cells", cells}};
}

FillOutcome fill_cycle(const Raag& raag, const CubicalChain& cycle, const RunConfig& cfg) {
  const int k = cycle.dim();
  const int maxdim = cfg.maxdim.value_or(k + 1);
  if (maxdim < k + 1) throw InputError("maxdim", "must be at least the cycle dimension + 1");
  const std::size_t budget = cfg.budget.value_or(kDefaultCellBudget);
  int radius = 1;
  int shortest = -1;
  for (const auto& [c, v] : cycle.coeffs()) {
    const auto [lo, hi] = cube_length_range(raag, c);
    radius = std::max(radius, hi + 1);
    shortest = shortest < 0 ? lo : std::min(shortest, lo);
  }
  std::optional<mpq_class> avoid;
  if (cfg.r) {
    avoid = cfg.rho * *cfg.r;
    if (shortest >= 0 && shortest < ceil_int(*avoid)) {
      throw InputError("chain", "cycle is not rho*r-avoidant");
    }
  }
  if (cfg.window) radius = *cfg.window;
  while (true) {
    Window w = ball_window(raag, radius, maxdim, std::max<std::size_t>(budget, 1));
    if (avoid) w = avoidant_filter(w, *avoid);
    if (w.cell_count() > budget) {
      throw BudgetExceeded("fill window of radius " + std::to_string(radius) +
                           " exceeds the cell budget");
    }
    try {
      FillOutcome out;
      out.result = best_filling(raag, window_problem(w, cycle));
      out.window_radius = radius;
      out.window_cells = w.cell_count();
      return out;
    } catch (const FillingError& e) {
      if (e.kind() != FillingError::Kind::infeasible_in_window || cfg.window) throw;
    }
    radius += 2;
  }
}

json fill_json(const Raag& raag, const FillOutcome& f) {
  const FillingResult& r = f.result;
  json j;
  j["mass"] = r.mass;
  j["optimality"] = std::string(to_string(r.optimality));
  j["lp_bound"] = opt_json(r.lp_bound);
  j["touches_boundary"] = r.touches_boundary;
  j["window_radius"] = f.window_radius;
  j["window_cells"] = f.window_cells;
  j["pivots"] = r.pivots;
  j["nodes"] = r.nodes;
  j["chain"] = r.chain ? chain_json(raag, *r.chain) : json(nullptr);
  return j;
}

namespace {

std::string suite_csv(const DivergenceReport& div0, const std::optional<BbTable>& bb,
                      const json& header) {
  std::ostringstream os;
  write_header_lines(os, header);
  os << "experiment,r,witness,cycle_mass,lower,lower_method,upper,upper_method,corridor,"
        "optimality,window_radius,flagged\n";
  for (const auto& row : div0.rows) {
    os << "div0," << row.r << ',' << row.witness << ",," << opt_str(row.lower) << ','
       << to_string(row.lower_method) << ',' << opt_str(row.upper) << ','
       << to_string(row.upper_method) << ',' << opt_str(row.corridor) << ",,,"
       << (row.flagged ? "yes" : "no") << '\n';
  }
  if (bb) {
    for (const auto& row : bb->rows) {
      os << "bb-fill," << row.r << ",sigma," << row.sigma_mass << ','
         << row.lower_bound.get_str() << ',' << to_string(Method::analytic_bound) << ','
         << row.fill_mass << ',' << to_string(Method::ilp_exact) << ",,"
         << to_string(row.optimality) << ',' << row.window_radius << ",no\n";
    }
  }
  return os.str();
}

void write_atomically(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << text;
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace

SuiteResult run_suite(const std::string& corpus, const RunConfig& cfg, std::ostream& log) {
  if (!fs::is_directory(corpus)) throw InputError(corpus, "not a directory");
  const fs::path out_dir = cfg.out.empty() ? fs::path(".") : fs::path(cfg.out);
  fs::create_directories(out_dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(corpus)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  enum class Outcome { written, skipped, input_error, failed };
  std::vector<Outcome> outcome(files.size());
  std::vector<std::string> messages(files.size());
  detail::parallel_for(files.size(), cfg.threads, [&](std::size_t i) {
    const std::string stem = files[i].stem().string();
    const fs::path json_path = out_dir / (stem + ".json");
    const fs::path csv_path = out_dir / (stem + ".csv");
    if (!cfg.force && fs::exists(json_path) && fs::exists(csv_path)) {
      outcome[i] = Outcome::skipped;
      messages[i] = stem + ": skipped (outputs exist)";
      return;
    }
    try {
      const DefiningGraph g = load_graph(files[i].string());
      RunConfig local = cfg;
      local.graph = files[i].filename().string();
      const json header = report_header(g, local, "run-suite");
      const Raag raag(g);
      json report;
      report["header"] = header;
      report["analysis"] = analyze_graph(g);
      Div0Options d0;
      if (cfg.budget) d0.bfs_budget = *cfg.budget;
      const DivergenceReport div0 = div0_experiment(raag, cfg.rmax, cfg.rho, d0);
      report["div0"] = divergence_json(div0, header);
      std::optional<BbTable> bb;
      const SimplicialComplex l = flag_complex(g);
      if (l.dimension() >= 1 && orthoplex_check(g, l.dimension() - 1).overall() == Verdict::pass) {
        BbOptions bo;
        bo.level = cfg.level;
        if (cfg.budget) bo.cell_budget = *cfg.budget;
        bb = bb_fill_experiment(raag, orthoplex_data(g), cfg.rmax, bo);
        report["bb_fill"] = bb_json(*bb, header);
      } else {
        report["bb_fill"] = nullptr;
      }
      write_atomically(csv_path, suite_csv(div0, bb, header));
      write_atomically(json_path, report.dump(2) + "\n");
      outcome[i] = Outcome::written;
      messages[i] = stem + ": written";
    } catch (const InputError& e) {
      outcome[i] = Outcome::input_error;
      messages[i] = stem + ": invalid input: " + e.what();
    } catch (const std::exception& e) {
      outcome[i] = Outcome::failed;
      messages[i] = stem + ": failed: " + e.what();
    }
  });

  SuiteResult res;
  bool internal = false;
  for (std::size_t i = 0; i < files.size(); ++i) {
    log << messages[i] << "\n";
    const std::string stem = files[i].stem().string();
    switch (outcome[i]) {
      case Outcome::written: res.written.push_back(stem); break;
      case Outcome::skipped: res.skipped.push_back(stem); break;
      case Outcome::input_error: res.failed.push_back(stem); break;
      case Outcome::failed:
        res.failed.push_back(stem);
        internal = true;
        break;
    }
  }
  if (!res.failed.empty()) res.exit_code = internal ? 1 : 2;
  return res;
}

}  // namespace raagdiv
