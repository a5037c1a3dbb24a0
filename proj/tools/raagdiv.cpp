#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "raagdiv/bb.hpp"
#include "raagdiv/divergence.hpp"
#include "raagdiv/filling.hpp"
#include "raagdiv/homology.hpp"
#include "raagdiv/report.hpp"

namespace {

using nlohmann::json;
using namespace raagdiv;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

// Raw flag values; rationals stay strings until the config is assembled.
struct Flags {
  std::string config, graph, chain, out, corpus, format = "csv";
  std::string rho, alpha, level;
  int rmax = 0, k = 0, r = 0, maxdim = 0, window = 0, threads = 1;
  std::size_t budget = 0;
  bool force = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << text;
}

bool given(const CLI::App* cmd, const std::string& name) {
  const CLI::Option* o = cmd->get_option_no_throw(name);
  return o != nullptr && o->count() > 0;
}

RunConfig assemble(const CLI::App* cmd, const Flags& f) {
  RunConfig cfg;
  if (!f.config.empty()) {
    json j;
    try {
      j = json::parse(read_file(f.config));
    } catch (const json::parse_error& e) {
      throw InputError(f.config + ": byte " + std::to_string(e.byte), "invalid JSON");
    }
    try {
      cfg.merge_json(j);
    } catch (const InputError& e) {
      throw InputError(f.config + ":" + e.where(), e.what());
    }
  }
  if (given(cmd, "--graph")) cfg.graph = f.graph;
  if (given(cmd, "--chain")) cfg.chain = f.chain;
  if (given(cmd, "--out")) cfg.out = f.out;
  if (given(cmd, "--rmax")) cfg.rmax = f.rmax;
  if (given(cmd, "--k")) cfg.k = f.k;
  if (given(cmd, "--r")) cfg.r = f.r;
  if (given(cmd, "--maxdim")) cfg.maxdim = f.maxdim;
  if (given(cmd, "--window")) cfg.window = f.window;
  if (given(cmd, "--threads")) cfg.threads = f.threads;
  if (given(cmd, "--force")) cfg.force = f.force;
  if (given(cmd, "--budget")) cfg.budget = f.budget;
  if (given(cmd, "--rho")) cfg.rho = parse_rational(f.rho, "--rho");
  if (given(cmd, "--alpha")) cfg.alpha = parse_rational(f.alpha, "--alpha");
  if (given(cmd, "--level")) cfg.level = parse_rational(f.level, "--level");
  if (!cfg.budget) cfg.budget = budget_from_env();
  cfg.validate();
  return cfg;
}

DefiningGraph graph_of(const RunConfig& cfg) {
  if (cfg.graph.empty()) throw InputError("--graph", "required");
  return load_graph(cfg.graph);
}

void emit_json(const RunConfig& cfg, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    write_file(cfg.out, text);
  }
}

// Tables go to PREFIX.csv and PREFIX.json with --out, else to stdout in the
// chosen format.
void emit_table(const RunConfig& cfg, const std::string& format, const std::string& csv,
                const json& summary) {
  if (!cfg.out.empty()) {
    write_file(cfg.out + ".csv", csv);
    write_file(cfg.out + ".json", summary.dump(2) + "\n");
  } else if (format == "json") {
    std::cout << summary.dump(2) << "\n";
  } else {
    std::cout << csv;
  }
}

int run_divergence(const RunConfig& cfg, const std::string& format, bool higher) {
  const DefiningGraph g = graph_of(cfg);
  const Raag raag(g);
  const json header = report_header(g, cfg, higher ? "divk" : "div0");
  DivergenceReport rep;
  if (higher) {
    DivkOptions o;
    if (cfg.budget) o.cell_budget = *cfg.budget;
    o.threads = cfg.threads;
    rep = divk_experiment(raag, cfg.k, cfg.rmax, cfg.rho, cfg.alpha, o);
  } else {
    Div0Options o;
    if (cfg.budget) o.bfs_budget = *cfg.budget;
    o.threads = cfg.threads;
    rep = div0_experiment(raag, cfg.rmax, cfg.rho, o);
  }
  emit_table(cfg, format, divergence_csv(rep, header), divergence_json(rep, header));
  for (const auto& row : rep.rows) {
    if (row.budget_hit) return kExitBudget;
  }
  return kExitOk;
}

int run_bb(const RunConfig& cfg, const std::string& format) {
  const DefiningGraph g = graph_of(cfg);
  const Raag raag(g);
  OrthoplexData d;
  try {
    d = orthoplex_data(g);
  } catch (const std::invalid_argument& e) {
    throw InputError(cfg.graph, e.what());
  }
  BbOptions o;
  o.level = cfg.level;
  if (cfg.budget) o.cell_budget = *cfg.budget;
  const BbTable t = bb_fill_experiment(raag, d, cfg.rmax, o);
  const json header = report_header(g, cfg, "bb-fill");
  emit_table(cfg, format, bb_csv(t, header), bb_json(t, header));
  return t.truncated ? kExitBudget : kExitOk;
}

int run_fill(const RunConfig& cfg) {
  const DefiningGraph g = graph_of(cfg);
  const Raag raag(g);
  if (cfg.chain.empty()) throw InputError("--chain", "required");
  CubicalChain cycle;
  try {
    cycle = parse_chain(raag, read_file(cfg.chain));
  } catch (const InputError& e) {
    throw InputError(cfg.chain + ":" + e.where(), e.what());
  }
  FillOutcome f;
  try {
    f = fill_cycle(raag, cycle, cfg);
  } catch (const FillingError& e) {
    if (e.kind() == FillingError::Kind::not_a_cycle || e.kind() == FillingError::Kind::outside_window) {
      throw InputError(cfg.chain, e.what());
    }
    const char* status = e.kind() == FillingError::Kind::integer_infeasible
                             ? "integer-infeasible"
                             : "infeasible-in-window";
    emit_json(cfg, {{"header", report_header(g, cfg, "fill")},
                    {"status", status},
                    {"detail", e.what()}});
    return kExitOk;
  }
  emit_json(cfg, {{"header", report_header(g, cfg, "fill")},
                  {"status", "ok"},
                  {"result", fill_json(raag, f)}});
  return f.result.optimality == Optimality::lp_bound_only ? kExitBudget : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divergence and filling experiments for right-angled Artin groups"};
  app.set_version_flag("--version", std::string(raagdiv::kToolVersion));
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", f.config, "JSON file with the same keys as the flags");
    cmd->add_option("--graph", f.graph, "Graph JSON file");
    cmd->add_option("--out", f.out, "Output file (prefix for tables)");
  };
  auto table = [&](CLI::App* cmd) {
    common(cmd);
    cmd->add_option("--rmax", f.rmax, "Largest radius");
    cmd->add_option("--budget", f.budget, "Budget (overrides RAAGDIV_BUDGET)");
    cmd->add_option("--threads", f.threads, "Worker threads");
    cmd->add_option("--format", f.format, "csv or json when writing to stdout")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* analyze = app.add_subcommand("analyze", "Classify a defining graph");
  common(analyze);
  CLI::App* homology = app.add_subcommand("homology", "Homology of L and S(L)");
  common(homology);
  CLI::App* div0 = app.add_subcommand("div0", "Divergence of geodesic pairs");
  table(div0);
  div0->add_option("--rho", f.rho, "Avoidance ratio in (0,1]");
  CLI::App* divk = app.add_subcommand("divk", "Higher divergence of witness cycles");
  table(divk);
  divk->add_option("--k", f.k, "Cycle dimension");
  divk->add_option("--rho", f.rho, "Avoidance ratio in (0,1]");
  divk->add_option("--alpha", f.alpha, "Witness scale");
  CLI::App* bb = app.add_subcommand("bb-fill", "Fillings of the orthoplex slice cycles");
  table(bb);
  bb->add_option("--level", f.level, "Half-integer slice level");
  CLI::App* fill = app.add_subcommand("fill", "Minimal filling of a cycle");
  common(fill);
  fill->add_option("--chain", f.chain, "Chain JSON file");
  fill->add_option("--r", f.r, "Avoid vertices shorter than rho*r");
  fill->add_option("--rho", f.rho, "Avoidance ratio in (0,1]");
  fill->add_option("--maxdim", f.maxdim, "Largest cube dimension in the window");
  fill->add_option("--window", f.window, "Fixed window radius (no growth)");
  fill->add_option("--budget", f.budget, "Cell budget (overrides RAAGDIV_BUDGET)");
  CLI::App* suite = app.add_subcommand("run-suite", "Run analyze, div0 and bb-fill on a corpus");
  suite->add_option("--config", f.config, "JSON file with the same keys as the flags");
  suite->add_option("--corpus", f.corpus, "Directory of graph files")->required();
  suite->add_option("--out", f.out, "Output directory")->required();
  suite->add_option("--rmax", f.rmax, "Largest radius");
  suite->add_option("--rho", f.rho, "Avoidance ratio in (0,1]");
  suite->add_option("--level", f.level, "Half-integer slice level");
  suite->add_option("--budget", f.budget, "Budget (overrides RAAGDIV_BUDGET)");
  suite->add_option("--threads", f.threads, "Worker threads");
  suite->add_flag("--force", f.force, "Recompute existing outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (analyze->parsed()) {
      const RunConfig cfg = assemble(analyze, f);
      const DefiningGraph g = graph_of(cfg);
      emit_json(cfg, {{"header", report_header(g, cfg, "analyze")}, {"analysis", analyze_graph(g)}});
      return kExitOk;
    }
    if (homology->parsed()) {
      const RunConfig cfg = assemble(homology, f);
      const DefiningGraph g = graph_of(cfg);
      emit_json(cfg,
                {{"header", report_header(g, cfg, "homology")}, {"homology", homology_report(g)}});
      return kExitOk;
    }
    if (div0->parsed()) return run_divergence(assemble(div0, f), f.format, false);
    if (divk->parsed()) return run_divergence(assemble(divk, f), f.format, true);
    if (bb->parsed()) return run_bb(assemble(bb, f), f.format);
    if (fill->parsed()) return run_fill(assemble(fill, f));
    if (suite->parsed()) {
      const RunConfig cfg = assemble(suite, f);
      const SuiteResult res = run_suite(f.corpus, cfg, std::cerr);
      return res.exit_code;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
