#pragma once

#include <string>
#include <vector>

#include "sfqfi/pipeline.hpp"

namespace sfqfi {

/// One row of an oracle audit.
struct AuditLine {
  std::string name;
  double value = 0.0;      // worst observed error (or count)
  double threshold = 0.0;  // pass if value < threshold
  bool pass = false;
  bool skipped = false;
  std::string note;
};

struct AuditOptions {
  int n_momenta = 20;   // sampled momenta for the pointwise oracles
  int root_seeds = 400;
  bool grid_residuals = true;  // solve the full grid for (a)
};

/// Deterministic sample momenta (Halton) inside the bulk of the distribution.
std::vector<Momentum> audit_momenta(const LaserField& field, int n);

AuditLine audit_grid_residuals(const RunSpec& spec);
AuditLine audit_missed_saddles(const RunSpec& spec, const std::vector<Momentum>& ps, int n_seeds);
AuditLine audit_derivative_amplitude(const RunSpec& spec, const std::vector<Momentum>& ps);
AuditLine audit_action_derivative(const RunSpec& spec, const std::vector<Momentum>& ps);
AuditLine audit_intercycle_derivative(const RunSpec& spec, const std::vector<Momentum>& ps);
AuditLine audit_quadrature(const RunSpec& spec, const std::vector<Momentum>& ps);
AuditLine audit_factorization(const RunSpec& spec, const std::vector<Momentum>& ps);

std::vector<AuditLine> run_audits(const RunSpec& spec, const AuditOptions& opts = {});

/// Fixed-width pass/fail table.
std::string format_audit_table(const std::vector<AuditLine>& lines);

}  // namespace sfqfi
