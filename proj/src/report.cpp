#include "adaef/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace adaef {

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("empty value list");
  if (!(p > 0.0 && p < 100.0)) {
    throw std::invalid_argument("percentile p must lie in (0, 100)");
  }
  std::sort(values.begin(), values.end());
  const std::size_t rank = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(values.size()) / 100.0));
  return values[std::max<std::size_t>(rank, 1) - 1];
}

RunReport aggregate(std::vector<QueryRow> rows, double total_time_s) {
  RunReport report;
  report.total_time_s = total_time_s;
  report.rows = std::move(rows);
  if (report.rows.empty()) return report;

  std::vector<double> recalls;
  double recall_sum = 0.0, ef_sum = 0.0;
  for (const QueryRow& row : report.rows) {
    recalls.push_back(row.recall);
    recall_sum += row.recall;
    ef_sum += row.ef;
  }
  const double n = static_cast<double>(report.rows.size());
  report.mean_recall = recall_sum / n;
  report.mean_ef = ef_sum / n;
  report.p5_recall = percentile(recalls, 5.0);
  report.p1_recall = percentile(recalls, 1.0);
  return report;
}

void write_report_csv(const std::string& path,
                      const std::vector<QueryRow>& rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << "query_id,recall,latency_us,ef,uncapped,score\n";
  f.precision(17);
  for (const QueryRow& row : rows) {
    f << row.query_id << ',' << row.recall << ',' << row.latency_us << ','
      << row.ef << ',' << (row.uncapped ? 1 : 0) << ',' << row.score << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<QueryRow> read_report_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("empty csv: " + path);
  std::vector<QueryRow> rows;
  while (std::getline(f, line)) {
    std::vector<std::string> fields;
    std::istringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 6) {
      throw std::runtime_error("malformed csv row: " + line);
    }
    QueryRow row;
    try {
      row.query_id = std::stoll(fields[0]);
      row.recall = std::stod(fields[1]);
      row.latency_us = std::stod(fields[2]);
      row.ef = std::stoi(fields[3]);
      row.uncapped = std::stoi(fields[4]) != 0;
      row.score = std::stod(fields[5]);  // stod accepts "nan"
    } catch (const std::exception&) {
      throw std::runtime_error("malformed csv row: " + line);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_report_json(const std::string& path, const RunReport& report) {
  nlohmann::json j;
  j["num_queries"] = report.rows.size();
  j["mean_recall"] = report.mean_recall;
  j["p5_recall"] = report.p5_recall;
  j["p1_recall"] = report.p1_recall;
  j["mean_ef"] = report.mean_ef;
  j["total_time_s"] = report.total_time_s;
  std::map<int, int> ef_histogram;
  for (const QueryRow& row : report.rows) ++ef_histogram[row.ef];
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& [ef, count] : ef_histogram) {
    hist.push_back({{"ef", ef}, {"count", count}});
  }
  j["ef_histogram"] = std::move(hist);

  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << j.dump(2) << "\n";
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace adaef
