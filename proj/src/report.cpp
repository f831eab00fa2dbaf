#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "spca/harness.hpp"

namespace spca {
namespace {

std::string shortest_exact(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

bool counts_toward_mean(const TrialRecord& rec) {
  return (rec.status == TrialStatus::ok || rec.status == TrialStatus::fallback_init) &&
         std::isfinite(rec.loss);
}

}  // namespace

Report summarize(const std::vector<TrialRecord>& records) {
  using Key = std::tuple<EstimatorKind, Index, Index>;
  std::map<Key, std::size_t> slot;
  std::vector<std::vector<double>> losses;
  Report report;
  for (const TrialRecord& rec : records) {
    const Key key{rec.estimator, rec.r, rec.s};
    auto [it, inserted] = slot.try_emplace(key, report.cells.size());
    if (inserted) {
      report.cells.push_back(CellSummary{.estimator = rec.estimator, .r = rec.r, .s = rec.s});
      losses.emplace_back();
    }
    CellSummary& cell = report.cells[it->second];
    ++cell.trials;
    switch (rec.status) {
      case TrialStatus::ok:
        break;
      case TrialStatus::fallback_init:
        ++cell.fallback_init;
        break;
      case TrialStatus::whitening_failed:
        ++cell.whitening_failed;
        break;
      case TrialStatus::rank_mismatch:
        ++cell.rank_mismatch;
        break;
    }
    if (counts_toward_mean(rec)) losses[it->second].push_back(rec.loss);
  }

  for (std::size_t c = 0; c < report.cells.size(); ++c) {
    CellSummary& cell = report.cells[c];
    const std::vector<double>& xs = losses[c];
    cell.counted = xs.size();
    if (xs.empty()) {
      cell.mean = std::nan("");
      cell.standard_error = std::nan("");
      continue;
    }
    double sum = 0.0;
    for (double x : xs) sum += x;
    cell.mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) {
      cell.standard_error = 0.0;
      continue;
    }
    double ss = 0.0;
    for (double x : xs) ss += (x - cell.mean) * (x - cell.mean);
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    cell.standard_error = sd / std::sqrt(static_cast<double>(xs.size()));
  }
  return report;
}

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "estimator,r,s,rep,seed,loss,runtime_ms,status\n";
  for (const TrialRecord& rec : records) {
    out << estimator_name(rec.estimator) << ',' << rec.r << ',' << rec.s << ',' << rec.rep_index
        << ',' << rec.seed << ',' << shortest_exact(rec.loss) << ',' << fixed(rec.runtime_ms, 3)
        << ',' << status_name(rec.status) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const Report& report) {
  out << "estimator,r,s,trials,counted,mean_loss,standard_error,fallback_init,whitening_failed,"
         "rank_mismatch\n";
  for (const CellSummary& c : report.cells) {
    out << estimator_name(c.estimator) << ',' << c.r << ',' << c.s << ',' << c.trials << ','
        << c.counted << ',' << shortest_exact(c.mean) << ',' << shortest_exact(c.standard_error)
        << ',' << c.fallback_init << ',' << c.whitening_failed << ',' << c.rank_mismatch << '\n';
  }
}

void write_table(std::ostream& out, const Report& report) {
  std::vector<EstimatorKind> estimators;
  std::vector<Index> rs;
  std::vector<Index> ss;
  auto add = [](auto& v, auto x) {
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
  };
  for (const CellSummary& c : report.cells) {
    add(estimators, c.estimator);
    add(rs, c.r);
    add(ss, c.s);
  }
  std::sort(rs.begin(), rs.end());
  std::sort(ss.begin(), ss.end());

  for (EstimatorKind est : estimators) {
    out << "Average loss ||V_hat V_hat' - V V'||_F^2, estimator " << estimator_name(est) << '\n';
    out << std::setw(4) << "r";
    for (Index s : ss) out << std::setw(10) << ("s=" + std::to_string(s));
    out << '\n';
    for (Index r : rs) {
      out << std::setw(4) << r;
      for (Index s : ss) {
        auto it = std::find_if(report.cells.begin(), report.cells.end(), [&](const CellSummary& c) {
          return c.estimator == est && c.r == r && c.s == s;
        });
        out << std::setw(10) << (it == report.cells.end() ? std::string("-") : fixed(it->mean, 4));
      }
      out << '\n';
    }
    out << '\n';
  }
}

}  // namespace spca
