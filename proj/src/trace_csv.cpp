#include "cogradar/trace_csv.hpp"

#include <cstdio>

namespace cogradar {

std::vector<std::string> trace_columns(std::size_t n, TraceKind kind) {
  std::vector<std::string> cols{"slot", "n_targets", "n_tracked", "n_miss", "usage", "lambda", "utility", "reward"};
  for (const char* prefix : {"cost_", "dwell_", "dist_"})
    for (std::size_t i = 1; i <= n; ++i) cols.push_back(prefix + std::to_string(i));
  if (kind == TraceKind::kTraining) {
    cols.insert(cols.end(), {"critic_loss", "actor_obj", "noise_sigma"});
  } else {
    cols.push_back("episode");
  }
  return cols;
}

std::string format_value(std::optional<double> v) {
  if (!v) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", *v);
  return buf;
}

namespace {

void write_line(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

std::optional<double> at_or_none(const std::vector<std::optional<double>>& v, std::size_t i) {
  return i < v.size() ? v[i] : std::nullopt;
}

}  // namespace

TraceWriter::TraceWriter(std::ostream& os, std::size_t n_tracks, TraceKind kind, bool write_header)
    : os_(os), n_(n_tracks), kind_(kind) {
  if (write_header) write_line(os_, trace_columns(n_, kind_));
}

void TraceWriter::write(const TraceRow& row) {
  const SlotReport& r = row.report;
  std::vector<std::string> cells{std::to_string(r.slot_index), std::to_string(r.n_targets), std::to_string(r.n_tracked),
                                 std::to_string(r.n_miss),     format_value(r.usage),        format_value(r.lambda),
                                 format_value(r.utility),      format_value(r.reward)};
  for (const auto* col : {&r.costs, &r.dwells, &r.dists})
    for (std::size_t i = 0; i < n_; ++i) cells.push_back(format_value(at_or_none(*col, i)));
  if (kind_ == TraceKind::kTraining) {
    cells.push_back(format_value(row.critic_loss));
    cells.push_back(format_value(row.actor_obj));
    cells.push_back(format_value(row.noise_sigma));
  } else {
    cells.push_back(std::to_string(row.episode));
  }
  write_line(os_, cells);
}

std::vector<std::string> summary_columns() {
  return {"episode",           "seed",          "slots",     "mean_utility",       "mean_reward",
          "mean_usage",        "violation_fraction", "mean_confirm_latency", "mean_tracking_cost",
          "mean_n_miss",       "confirmations"};
}

void write_summary(std::ostream& os, const std::vector<EpisodeSummary>& episodes,
                   const std::optional<EpisodeSummary>& pooled) {
  write_line(os, summary_columns());
  auto row = [&os](const std::string& label, const EpisodeSummary& s) {
    write_line(os, {label, std::to_string(s.seed), std::to_string(s.slots), format_value(s.mean_utility),
                    format_value(s.mean_reward), format_value(s.mean_usage), format_value(s.violation_fraction),
                    format_value(s.mean_confirm_latency), format_value(s.mean_tracking_cost),
                    format_value(s.mean_n_miss), std::to_string(s.confirmations)});
  };
  for (const auto& s : episodes) row(std::to_string(s.episode), s);
  if (pooled) row("all", *pooled);
}

}  // namespace cogradar
