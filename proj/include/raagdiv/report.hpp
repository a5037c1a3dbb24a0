#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "raagdiv/bb.hpp"
#include "raagdiv/divergence.hpp"
#include "raagdiv/filling.hpp"

namespace raagdiv {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Name of the environment variable holding the default budget.
inline constexpr const char* kBudgetEnv = "RAAGDIV_BUDGET";

/// Parameters shared by every subcommand. `budget` counts cells for fillings
/// and search states for div0.
struct RunConfig {
  std::string graph;
  std::string chain;
  std::string out;
  int rmax = 4;
  int k = 1;
  std::optional<int> r;
  mpq_class rho = 1;
  mpq_class alpha = 1;
  mpq_class level{1, 2};
  std::optional<int> maxdim;
  std::optional<int> window;  // fixed fill window radius
  std::optional<std::size_t> budget;
  int threads = 1;
  bool force = false;

  /// Budgets positive, rho in (0, 1], level a half-integer. Throws InputError.
  void validate() const;
  nlohmann::json to_json() const;
  /// Overrides fields present in `j`; unknown keys are rejected.
  void merge_json(const nlohmann::json& j);
};

/// Parses "3", "-1/2" or "0.5" exactly. Throws InputError.
mpq_class parse_rational(std::string_view text, const std::string& where);

/// Default budget from the environment, if set and valid.
std::optional<std::size_t> budget_from_env();

std::string graph_hash(const DefiningGraph& g);

/// Metadata carried by every report: tool version, graph hash, the config
/// and the avoidance and level conventions. Thread count and output paths
/// are left out so reports do not depend on them.
nlohmann::json report_header(const DefiningGraph& g, const RunConfig& cfg,
                             std::string_view command);

/// Counts, complement components, join decomposition, flag complex
/// dimensions, divdim, orthoplex verdicts and the predicted div0 class.
nlohmann::json analyze_graph(const DefiningGraph& g);

/// Reduced Betti numbers and torsion of L and S(L) in every dimension.
nlohmann::json homology_report(const DefiningGraph& g);

/// CSV tables open with "# key: value" lines holding the header.
std::string divergence_csv(const DivergenceReport& rep, const nlohmann::json& header);
nlohmann::json divergence_json(const DivergenceReport& rep, const nlohmann::json& header);

std::string bb_csv(const BbTable& t, const nlohmann::json& header);
nlohmann::json bb_json(const BbTable& t, const nlohmann::json& header);

/// Chain JSON: {"dim": n, "cells": [{"base": "a b^-1", "labels": ["a"],
/// "coeff": 2}, ...]}. Throws InputError with the offending location.
CubicalChain parse_chain(const Raag& raag, std::string_view text);
nlohmann::json chain_json(const Raag& raag, const CubicalChain& c);

struct FillOutcome {
  FillingResult result;
  int window_radius = 0;
  std::size_t window_cells = 0;
};

/// Fills `cycle` in ball windows grown by 2 from one past its farthest
/// vertex, keeping vertices of length >= rho·r when r is set. Throws
/// BudgetExceeded past the cell budget.
FillOutcome fill_cycle(const Raag& raag, const CubicalChain& cycle, const RunConfig& cfg);
nlohmann::json fill_json(const Raag& raag, const FillOutcome& f);

struct SuiteResult {
  std::vector<std::string> written;
  std::vector<std::string> skipped;
  std::vector<std::string> failed;
  int exit_code = 0;
};

/// analyze + div0 (+ bb-fill for orthoplex graphs) on every *.json file of
/// `corpus`, writing <stem>.json and <stem>.csv into cfg.out. Graphs whose
/// outputs exist are skipped unless cfg.force. Failures are isolated and
/// logged; the exit code is nonzero iff some graph failed.
SuiteResult run_suite(const std::string& corpus, const RunConfig& cfg, std::ostream& log);

}  // namespace raagdiv
