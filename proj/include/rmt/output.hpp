#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "rmt/charflow.hpp"
#include "rmt/laws.hpp"
#include "rmt/montecarlo.hpp"
#include "rmt/variance.hpp"

namespace rmt {

/// CSV file whose first line is "# config_hash=<hash>", then a header row.
/// Doubles are written with 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::string_view hash,
            std::initializer_list<std::string_view> columns);

  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(long long v);
  CsvWriter& operator<<(int v) { return *this << static_cast<long long>(v); }
  CsvWriter& operator<<(std::string_view v);
  void end_row();
  void close();

 private:
  void separator();
  std::filesystem::path path_;
  std::ofstream out_;
  bool row_started_ = false;
};

/// Creates the directory if needed; IoError when that fails.
void ensure_directory(const std::filesystem::path& dir);
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

/// n,replica,value
void write_replicas_csv(const std::filesystem::path& path, const ExperimentResult& result,
                        std::string_view hash);
/// Reads back a replicas CSV (comment lines skipped).
ExperimentResult read_replicas_csv(const std::filesystem::path& path, std::string* hash = nullptr);

void write_report_csv(const std::filesystem::path& path, const std::vector<CltReport>& reports,
                      std::string_view hash);

struct TheoryRow {
  VarianceResult result;
  std::string function;
  std::string parameters;
};
void write_theory_csv(const std::filesystem::path& path, const std::vector<TheoryRow>& rows,
                      std::string_view hash);

/// lambda,density on `points` equispaced nodes over the continuous support.
void write_density_csv(const std::filesystem::path& path, const LimitLaw& law, int points,
                       std::string_view hash);
/// t,re_v,im_v on t = 0..horizon.
void write_kernel_csv(const std::filesystem::path& path, const LimitLaw& law, double step,
                      double horizon, std::string_view hash);
/// t,re_y_volterra,im_y_volterra,re_y_closed,im_y_closed,abs_diff
void write_volterra_csv(const std::filesystem::path& path, const GridFunction& volterra,
                        const GridFunction& closed, std::string_view hash);

}  // namespace rmt
