#include "rmt/output.hpp"

#include <charconv>
#include <sstream>

#include "rmt/errors.hpp"

namespace rmt {

namespace fs = std::filesystem;

CsvWriter::CsvWriter(const fs::path& path, std::string_view hash,
                     std::initializer_list<std::string_view> columns)
    : path_(path), out_(path) {
  if (!out_) throw IoError("cannot open '" + path.string() + "' for writing");
  out_ << "# config_hash=" << hash << '\n';
  for (auto c : columns) *this << c;
  end_row();
}

void CsvWriter::separator() {
  if (row_started_) out_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::operator<<(double v) {
  separator();
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out_.write(buf, res.ptr - buf);
  return *this;
}

CsvWriter& CsvWriter::operator<<(long long v) {
  separator();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::operator<<(std::string_view v) {
  separator();
  if (v.find_first_of(",\"\n") == std::string_view::npos) {
    out_ << v;
  } else {
    out_ << '"';
    for (char ch : v) out_ << (ch == '"' ? "\"\"" : std::string(1, ch));
    out_ << '"';
  }
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  row_started_ = false;
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw IoError("failed writing '" + path_.string() + "'");
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory '" + dir.string() + "'");
}

void write_text_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_replicas_csv(const fs::path& path, const ExperimentResult& result, std::string_view hash) {
  const bool complex_valued = !result.sizes.empty() && !result.sizes.front().imag_values.empty();
  CsvWriter csv = complex_valued ? CsvWriter(path, hash, {"n", "replica", "value", "imag"})
                                 : CsvWriter(path, hash, {"n", "replica", "value"});
  for (const auto& size : result.sizes) {
    for (std::size_t r = 0; r < size.values.size(); ++r) {
      csv << size.n << static_cast<long long>(r) << size.values[r];
      if (complex_valued) csv << size.imag_values[r];
      csv.end_row();
    }
  }
  csv.close();
}

ExperimentResult read_replicas_csv(const fs::path& path, std::string* hash) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  ExperimentResult result;
  std::string line;
  bool header = false;
  bool complex_valued = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "# config_hash=";
      if (hash && line.rfind(key, 0) == 0) *hash = line.substr(key.size());
      continue;
    }
    if (!header) {
      complex_valued = line == "n,replica,value,imag";
      if (line != "n,replica,value" && !complex_valued)
        throw IoError("'" + path.string() + "' is not a replicas CSV");
      header = true;
      continue;
    }
    std::istringstream row(line);
    std::vector<std::string> fields;
    for (std::string f; std::getline(row, f, ',');) fields.push_back(f);
    if (fields.size() != (complex_valued ? 4u : 3u))
      throw IoError("malformed row in '" + path.string() + "': " + line);
    int n = 0;
    double v = 0.0, im = 0.0;
    try {
      n = std::stoi(fields[0]);
      v = std::stod(fields[2]);
      if (complex_valued) im = std::stod(fields[3]);
    } catch (const std::exception&) {
      throw IoError("malformed row in '" + path.string() + "': " + line);
    }
    if (result.sizes.empty() || result.sizes.back().n != n) {
      result.sizes.emplace_back();
      result.sizes.back().n = n;
    }
    result.sizes.back().values.push_back(v);
    if (complex_valued) result.sizes.back().imag_values.push_back(im);
  }
  if (!header) throw IoError("'" + path.string() + "' has no header");
  return result;
}

void write_report_csv(const fs::path& path, const std::vector<CltReport>& reports, std::string_view hash) {
  CsvWriter csv(path, hash,
                {"n", "part", "outside_hypotheses", "replicas", "sample_mean", "sample_variance", "variance_se", "theory_formula",
                 "theory_gaussian_part", "theory_kappa4_part", "theory_variance", "theory_est_error",
                 "degenerate", "ks_statistic", "ks_pvalue", "excess_kurtosis", "ecf_deviation",
                 "bound", "bound_holds"});
  for (const auto& r : reports) {
    csv << r.n << r.part << (r.outside_hypotheses ? 1 : 0) << r.replicas << r.sample_mean << r.sample_variance << r.variance_se
        << to_string(r.theory.formula) << r.theory.gaussian_part << r.theory.kappa4_part
        << r.theory.total << r.theory.est_error << (r.degenerate ? 1 : 0);
    if (r.distributional)
      csv << r.ks_statistic << r.ks_pvalue << r.excess_kurtosis << r.ecf_deviation;
    else
      csv << "" << "" << "" << "";
    if (r.bound_check && r.bound_check->applicable)
      csv << r.bound_check->bound << (r.bound_check->holds ? "true" : "false");
    else
      csv << "" << "not applicable";
    csv.end_row();
  }
  csv.close();
}

void write_theory_csv(const fs::path& path, const std::vector<TheoryRow>& rows, std::string_view hash) {
  CsvWriter csv(path, hash,
                {"formula_tag", "phi", "parameters", "gaussian_part", "kappa4_part", "total", "est_error"});
  for (const auto& row : rows) {
    csv << to_string(row.result.formula) << row.function << row.parameters << row.result.gaussian_part
        << row.result.kappa4_part << row.result.total << row.result.est_error;
    csv.end_row();
  }
  csv.close();
}

void write_density_csv(const fs::path& path, const LimitLaw& law, int points, std::string_view hash) {
  if (points < 2) throw ArgumentError("density table needs at least two points");
  CsvWriter csv(path, hash, {"lambda", "density"});
  const double lo = law.lower_edge();
  const double hi = law.upper_edge();
  for (int i = 0; i < points; ++i) {
    const double lambda = i == points - 1 ? hi : lo + (hi - lo) * i / (points - 1);
    csv << lambda << density(law, lambda);
    csv.end_row();
  }
  csv.close();
}

void write_kernel_csv(const fs::path& path, const LimitLaw& law, double step, double horizon,
                      std::string_view hash) {
  const GridFunction v = GridFunction::sample([&](double t) { return v_kernel(law, t); }, step, horizon);
  CsvWriter csv(path, hash, {"t", "re_v", "im_v"});
  for (std::size_t k = 0; k < v.size(); ++k) {
    csv << v.time(k) << v[k].real() << v[k].imag();
    csv.end_row();
  }
  csv.close();
}

void write_volterra_csv(const fs::path& path, const GridFunction& volterra, const GridFunction& closed,
                        std::string_view hash) {
  if (volterra.size() != closed.size()) throw ArgumentError("volterra and closed-form grids differ");
  CsvWriter csv(path, hash,
                {"t", "re_y_volterra", "im_y_volterra", "re_y_closed", "im_y_closed", "abs_diff"});
  for (std::size_t k = 0; k < volterra.size(); ++k) {
    csv << volterra.time(k) << volterra[k].real() << volterra[k].imag() << closed[k].real()
        << closed[k].imag() << std::abs(volterra[k] - closed[k]);
    csv.end_row();
  }
  csv.close();
}

}  // namespace rmt
