#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace adaef {

/// Nearest-rank percentile: the ceil(p*n/100)-th smallest value.
double percentile(std::vector<double> values, double p);

struct QueryRow {
  std::int64_t query_id = 0;
  double recall = 0.0;
  double latency_us = 0.0;
  int ef = 0;          // assigned (adaptive) or configured (fixed)
  bool uncapped = false;
  double score = 0.0;  // NaN when not applicable
};

struct RunReport {
  std::vector<QueryRow> rows;
  double mean_recall = 0.0;
  double p5_recall = 0.0;
  double p1_recall = 0.0;
  double mean_ef = 0.0;
  double total_time_s = 0.0;
};

/// Recomputes the aggregate fields from the per-query rows.
RunReport aggregate(std::vector<QueryRow> rows, double total_time_s);

void write_report_csv(const std::string& path,
                      const std::vector<QueryRow>& rows);
std::vector<QueryRow> read_report_csv(const std::string& path);
void write_report_json(const std::string& path, const RunReport& report);

}  // namespace adaef
