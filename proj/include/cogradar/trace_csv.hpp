#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cogradar/runner.hpp"

namespace cogradar {

inline constexpr int kTraceSchemaVersion = 1;

enum class TraceKind {
  kRollout,   // env columns + episode
  kTraining,  // env columns + critic_loss, actor_obj, noise_sigma
};

/// Column names, env columns first: slot, n_targets, n_tracked, n_miss,
/// usage, lambda, utility, reward, cost_1..N, dwell_1..N, dist_1..N.
std::vector<std::string> trace_columns(std::size_t n_tracks, TraceKind kind);

/// Formats a float with 9 significant digits; empty for nullopt.
std::string format_value(std::optional<double> v);

class TraceWriter {
 public:
  TraceWriter(std::ostream& os, std::size_t n_tracks, TraceKind kind, bool write_header = true);
  void write(const TraceRow& row);

 private:
  std::ostream& os_;
  std::size_t n_;
  TraceKind kind_;
};

std::vector<std::string> summary_columns();
void write_summary(std::ostream& os, const std::vector<EpisodeSummary>& episodes,
                   const std::optional<EpisodeSummary>& pooled);

}  // namespace cogradar
