#include "chemowave/scan.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <thread>

#include "chemowave/spectral.hpp"

namespace chemowave {

const char* to_string(ScanMode m) {
  switch (m) {
    case ScanMode::Slab: return "slab";
    case ScanMode::Evolve: return "evolve";
    case ScanMode::Both: return "both";
  }
  return "?";
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Slow: return "slow";
    case Regime::Fast: return "fast";
    case Regime::Intermediate: return "intermediate";
    case Regime::Skipped: return "skipped";
  }
  return "?";
}

ScanMode parse_scan_mode(const std::string& s) {
  if (s == "slab") return ScanMode::Slab;
  if (s == "evolve") return ScanMode::Evolve;
  if (s == "both") return ScanMode::Both;
  throw ValidationError("scan mode must be slab, evolve or both");
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string flag_text(std::string s) {
  std::replace(s.begin(), s.end(), ',', ' ');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool fast_candidate(const RegimeRecord& r, double threshold) {
  return r.chi < 0.0 && r.fast_pred >= threshold;
}

RegimeRecord run_cell(const ScanConfig& cfg, double chi, double sigma) {
  RegimeRecord rec;
  rec.chi = chi;
  rec.sigma = sigma;
  rec.kernel = cfg.spec.name();
  const ChemoParams params{chi, sigma};
  rec.slow_pred = params.slow_predicate();
  rec.fast_pred = params.fast_predicate();
  try {
    params.validate();
  } catch (const ValidationError& e) {
    rec.flags.push_back(flag_text(std::string("skipped: ") + e.what()));
    rec.classification = Regime::Skipped;
    return rec;
  }

  if (cfg.mode != ScanMode::Evolve) {
    SlabConfig sc = cfg.slab;
    sc.params = params;
    sc.spec = cfg.spec;
    rec.a = sc.a;
    try {
      rec.dx = sc.grid().dx();
      const auto sol = fixed_point(sc);
      if (sol.converged) {
        rec.c_slab = sol.c;
      } else {
        rec.flags.push_back("slab_not_converged");
      }
      if (cfg.certificate && sol.converged) {
        const auto cert = slow_regime_certificate(sol);
        if (cert.applicable) {
          double lam = HUGE_VAL;
          for (const auto& e : cert.entries) lam = std::min(lam, e.lambda);
          rec.lambda_cert = lam;
          if (!cert.pass()) rec.flags.push_back("certificate_failed");
        }
      }
    } catch (const ValidationError& e) {
      rec.flags.push_back(flag_text(std::string("slab_invalid: ") + e.what()));
    } catch (const std::exception& e) {
      rec.flags.push_back(flag_text(std::string("slab_error: ") + e.what()));
    }
  }

  if (cfg.mode != ScanMode::Slab) {
    EvolveConfig ec = cfg.evolve;
    ec.params = params;
    ec.spec = cfg.spec;
    ec.on_snapshot = nullptr;
    if (cfg.mode == ScanMode::Evolve) {
      rec.a = 0.5 * (ec.grid.x_max - ec.grid.x_min);
      rec.dx = ec.grid.dx();
    }
    try {
      const auto traj = evolve(ec);
      if (traj.aborted) rec.flags.push_back(flag_text("evolve_aborted: " + traj.abort_reason));
      rec.c_evolve = measure_speed(traj, cfg.level, cfg.window_fraction).c;
    } catch (const ValidationError& e) {
      rec.flags.push_back(flag_text(std::string("evolve_invalid: ") + e.what()));
    } catch (const std::exception& e) {
      rec.flags.push_back(flag_text(std::string("evolve_error: ") + e.what()));
    }
  }
  rec.classification = classify(rec, cfg.fast_threshold, cfg.slow_threshold);
  return rec;
}

}  // namespace

double RegimeRecord::c_measured() const {
  if (chi < 0.0 && !std::isnan(c_evolve) && fast_pred >= 10.0) return c_evolve;
  return std::isnan(c_slab) ? c_evolve : c_slab;
}

std::uint64_t cell_seed(double chi, double sigma) {
  return splitmix(std::bit_cast<std::uint64_t>(chi) ^ splitmix(std::bit_cast<std::uint64_t>(sigma)));
}

Regime classify(const RegimeRecord& r, double fast_threshold, double slow_threshold) {
  if (r.classification == Regime::Skipped && !r.flags.empty() && r.flags.front().rfind("skipped", 0) == 0)
    return Regime::Skipped;
  std::vector<double> cs;
  for (double c : {r.c_slab, r.c_evolve})
    if (!std::isnan(c)) cs.push_back(c);
  if (cs.empty()) return Regime::Intermediate;
  const bool slow = r.slow_pred <= slow_threshold &&
                    std::all_of(cs.begin(), cs.end(), [](double c) { return c >= 1.9 && c <= 2.1; });
  if (slow) return Regime::Slow;
  if (fast_candidate(r, fast_threshold)) {
    const double c = std::isnan(r.c_evolve) ? r.c_slab : r.c_evolve;
    if (c >= 0.75 * std::abs(r.chi) / 2.0) return Regime::Fast;
  }
  return Regime::Intermediate;
}

std::vector<RegimeRecord> run_scan(const ScanConfig& cfg) {
  if (cfg.chi_values.empty() || cfg.sigma_values.empty()) throw ValidationError("scan needs chi and sigma values");
  std::vector<std::pair<double, double>> cells;
  for (double chi : cfg.chi_values)
    for (double sigma : cfg.sigma_values) cells.emplace_back(chi, sigma);
  std::vector<RegimeRecord> out(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) out[i] = run_cell(cfg, cells[i].first, cells[i].second);
  };
  const unsigned nthreads = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

std::string scan_csv(const std::vector<RegimeRecord>& records) {
  std::string s = "chi,sigma,kernel,a,dx,c_slab,c_evolve,lambda_cert,slow_pred,fast_pred,classification,flags\n";
  for (const auto& r : records) {
    std::string flags;
    for (std::size_t i = 0; i < r.flags.size(); ++i) flags += (i ? ";" : "") + r.flags[i];
    s += num(r.chi) + ',' + num(r.sigma) + ',' + r.kernel + ',' + num(r.a) + ',' + num(r.dx) + ',' + num(r.c_slab) +
         ',' + num(r.c_evolve) + ',' + num(r.lambda_cert) + ',' + num(r.slow_pred) + ',' + num(r.fast_pred) + ',' +
         to_string(r.classification) + ',' + flags + '\n';
  }
  return s;
}

std::vector<SandwichRow> sandwich_table(const std::vector<RegimeRecord>& records, double slack) {
  if (records.empty()) throw ValidationError("sandwich table needs records");
  std::vector<SandwichRow> rows;
  for (const auto& r : records) {
    SandwichRow row;
    row.chi = r.chi;
    row.sigma = r.sigma;
    row.c = r.c_measured();
    row.upper = 2.0 * std::sqrt(1.0 + std::abs(r.chi) / r.sigma) + std::abs(r.chi) / 2.0;
    row.pass = !std::isnan(row.c) && row.c >= row.lower - slack && row.c <= row.upper + slack;
    rows.push_back(row);
  }
  return rows;
}

std::string sandwich_csv(const std::vector<SandwichRow>& rows) {
  std::string s = "chi,sigma,lower,c,upper,pass\n";
  for (const auto& r : rows)
    s += num(r.chi) + ',' + num(r.sigma) + ',' + num(r.lower) + ',' + num(r.c) + ',' + num(r.upper) + ',' +
         (r.pass ? "true" : "false") + '\n';
  return s;
}

}  // namespace chemowave
