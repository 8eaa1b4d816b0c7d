#pragma once

#include <map>

#include "slorb/transfer.hpp"

namespace slorb {

// Fully determines a run; echoed verbatim into every report header.
struct ExperimentConfig {
  std::string field_spec = "Qp:p=3:N=12";
  int truncation = 3;                  // Q_F truncation level
  std::vector<std::string> algebras;   // descriptor strings; empty = defaults
  std::vector<int> depths{0, 1, 2, 3};
  std::vector<int> truncation_schedule;  // extra levels for stabilization scans
  int center_sign = 1;                 // z for germ/transfer experiments
  unsigned seed = 2026;

  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
  // default truncation per field kind when the config leaves it at 0
  int effective_truncation(const Field& F) const;
  std::vector<AlgebraDesc> algebra_list(const Field& F) const;
};

struct ReportRow {
  std::string key;
  std::vector<std::pair<std::string, std::string>> fields;
  bool pass = true;
};

struct Report {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<ReportRow> rows;

  bool all_pass() const;
  std::string csv() const;
  std::string json() const;
};

// the default four-function panel: congruence indicators of levels 1..3 and
// one off-identity double coset (rank-2 for the germ fit)
std::vector<TestFunction> default_panel(const Field& F);

Report exp_unipotent_classes(const ExperimentConfig& cfg);
Report exp_fourier(const ExperimentConfig& cfg);
Report exp_transfer(const ExperimentConfig& cfg);
Report exp_theorem_th(const ExperimentConfig& cfg);
Report exp_true_unipotent_demo(const ExperimentConfig& cfg);

// Germ fit: per depth solve the pair of coefficients against the panel
//   SO(t_k, f) = A_k f(z) + B_k SO(z u0, f)
// and report the exact residual of every panel function.
struct GermFitRow {
  int depth;
  long gap_valuation;
  Rational identity_coeff;    // A_k
  Rational unipotent_coeff;   // B_k
  bool residual_zero;
};
std::vector<GermFitRow> germ_fit(const Field& F, const QuadAlgebra& E, int z_sign,
                                 const std::vector<int>& depths,
                                 const std::vector<TestFunction>& panel,
                                 const SquareClassGroup& G);

}  // namespace slorb
