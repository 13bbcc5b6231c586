#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chemowave/evolver.hpp"
#include "chemowave/slab.hpp"

namespace chemowave {

enum class ScanMode { Slab, Evolve, Both };
enum class Regime { Slow, Fast, Intermediate, Skipped };

const char* to_string(ScanMode m);
const char* to_string(Regime r);
ScanMode parse_scan_mode(const std::string& s);

struct ScanConfig {
  std::vector<double> chi_values;
  std::vector<double> sigma_values;
  KernelSpec spec = KernelSpec::exponential();
  ScanMode mode = ScanMode::Slab;
  SlabConfig slab;      // params and spec are overwritten per cell
  EvolveConfig evolve;  // likewise
  double level = 0.5;
  double window_fraction = 0.4;
  bool certificate = true;
  double fast_threshold = 10.0;
  double slow_threshold = 0.15;  // on |chi|(1/sigma + sigma^2)
  unsigned workers = 1;
};

struct RegimeRecord {
  double chi = 0.0;
  double sigma = 0.0;
  std::string kernel;
  double a = 0.0;
  double dx = 0.0;
  double c_slab = std::numeric_limits<double>::quiet_NaN();
  double c_evolve = std::numeric_limits<double>::quiet_NaN();
  double lambda_cert = std::numeric_limits<double>::quiet_NaN();
  double slow_pred = 0.0;
  double fast_pred = 0.0;
  Regime classification = Regime::Skipped;
  std::vector<std::string> flags;

  /// The speed used for classification: evolve for fast candidates, slab otherwise.
  double c_measured() const;
};

/// Seed for stochastic per-cell diagnostics, a hash of (chi, sigma).
std::uint64_t cell_seed(double chi, double sigma);

/// Cells run independently on up to `workers` threads; output order is
/// chi-major in the input order regardless of scheduling.
std::vector<RegimeRecord> run_scan(const ScanConfig& config);

/// Classification gates applied to one record (fills classification).
Regime classify(const RegimeRecord& rec, double fast_threshold = 10.0, double slow_threshold = 0.15);

/// chi,sigma,kernel,a,dx,c_slab,c_evolve,lambda_cert,slow_pred,fast_pred,classification,flags
std::string scan_csv(const std::vector<RegimeRecord>& records);

struct SandwichRow {
  double chi = 0.0;
  double sigma = 0.0;
  double lower = 2.0;
  double c = 0.0;
  double upper = 0.0;  // 2 sqrt(1 + |chi|/sigma) + |chi|/2
  bool pass = false;
};

std::vector<SandwichRow> sandwich_table(const std::vector<RegimeRecord>& records, double slack = 0.05);
std::string sandwich_csv(const std::vector<SandwichRow>& rows);

}  // namespace chemowave
