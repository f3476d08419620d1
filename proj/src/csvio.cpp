#include "fdident/csvio.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace fdident {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& s, const std::string& path) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || errno == ERANGE) {
    throw std::runtime_error(path + ": malformed numeric field '" + s + "'");
  }
  return v;
}

long long parse_int(const std::string& s, const std::string& path) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
    throw std::runtime_error(path + ": malformed integer field '" + s + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& path) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
    throw std::runtime_error(path + ": malformed unsigned field '" + s + "'");
  }
  return static_cast<std::uint64_t>(v);
}

double grid_omega(int l, int n) {
  return 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(n);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (const char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_csv(const std::string& path, const Metadata& meta, const std::string& header,
               const std::vector<std::string>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  for (const auto& [key, value] : meta) out << "# " << key << ": " << value << "\n";
  out << header << "\n";
  for (const auto& row : rows) out << row << "\n";
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

const std::string& CsvFile::meta_value(const std::string& key) const {
  for (const auto& [k, v] : meta) {
    if (k == key) return v;
  }
  throw std::runtime_error("missing metadata key '" + key + "'");
}

CsvFile read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  CsvFile file;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body.front() == ' ') body.erase(0, 1);
      const std::size_t pos = body.find(": ");
      if (pos == std::string::npos) {
        file.meta.emplace_back(body, "");
      } else {
        file.meta.emplace_back(body.substr(0, pos), body.substr(pos + 2));
      }
      continue;
    }
    if (!have_header) {
      file.header = line;
      have_header = true;
      continue;
    }
    file.rows.push_back(split(line, ','));
  }
  if (!have_header) throw std::runtime_error(path + ": no header row");
  return file;
}

void write_record_csv(const std::string& path, const ExperimentRecord& rec,
                      const Metadata& extra) {
  Metadata meta;
  meta.emplace_back("n", std::to_string(rec.n()));
  meta.emplace_back("sigma", format_double(rec.sigma));
  meta.emplace_back("seed", std::to_string(rec.seed));
  meta.emplace_back("experiment_id", std::to_string(rec.experiment_id));
  meta.insert(meta.end(), extra.begin(), extra.end());

  std::vector<std::string> rows;
  rows.reserve(rec.r.size());
  for (std::size_t k = 0; k < rec.r.size(); ++k) {
    rows.push_back(std::to_string(k) + "," + format_double(rec.r[k]) + "," +
                   format_double(rec.u[k]) + "," + format_double(rec.y[k]));
  }
  write_csv(path, meta, "k,r,u,y", rows);
}

ExperimentRecord read_record_csv(const std::string& path) {
  const CsvFile file = read_csv(path);
  if (file.header != "k,r,u,y") throw std::runtime_error(path + ": expected header k,r,u,y");

  ExperimentRecord rec;
  rec.sigma = parse_double(file.meta_value("sigma"), path);
  rec.seed = parse_u64(file.meta_value("seed"), path);
  rec.experiment_id = static_cast<int>(parse_int(file.meta_value("experiment_id"), path));

  const long long n = parse_int(file.meta_value("n"), path);
  if (n < 1 || static_cast<std::size_t>(n) != file.rows.size()) {
    throw std::runtime_error(path + ": row count does not match metadata n");
  }
  rec.r.reserve(file.rows.size());
  rec.u.reserve(file.rows.size());
  rec.y.reserve(file.rows.size());
  for (std::size_t i = 0; i < file.rows.size(); ++i) {
    const auto& row = file.rows[i];
    if (row.size() != 4) throw std::runtime_error(path + ": expected 4 columns per row");
    if (parse_int(row[0], path) != static_cast<long long>(i)) {
      throw std::runtime_error(path + ": sample index out of order");
    }
    rec.r.push_back(parse_double(row[1], path));
    rec.u.push_back(parse_double(row[2], path));
    rec.y.push_back(parse_double(row[3], path));
  }
  return rec;
}

void write_estimate_csv(const std::string& path, const PlantEstimate& est,
                        const Metadata& extra) {
  Metadata meta;
  meta.emplace_back("n", std::to_string(est.n));
  meta.emplace_back("method", est.method);
  {
    std::string ids;
    for (std::size_t i = 0; i < est.source_ids.size(); ++i) {
      if (i) ids += " ";
      ids += std::to_string(est.source_ids[i]);
    }
    meta.emplace_back("source_ids", ids);
  }
  meta.insert(meta.end(), extra.begin(), extra.end());

  std::vector<std::string> rows;
  rows.reserve(est.values.size());
  for (int l = 0; l < est.n; ++l) {
    const auto i = static_cast<std::size_t>(l);
    rows.push_back(format_double(grid_omega(l, est.n)) + "," + format_double(est.values[i].real()) +
                   "," + format_double(est.values[i].imag()) + "," +
                   std::to_string(static_cast<int>(est.valid[i])) + "," + est.method);
  }
  write_csv(path, meta, "omega,re,im,valid,method", rows);
}

PlantEstimate read_estimate_csv(const std::string& path) {
  const CsvFile file = read_csv(path);
  if (file.header != "omega,re,im,valid,method") {
    throw std::runtime_error(path + ": expected header omega,re,im,valid,method");
  }
  PlantEstimate est;
  est.method = file.meta_value("method");
  est.n = static_cast<int>(parse_int(file.meta_value("n"), path));
  if (est.n < 1 || static_cast<std::size_t>(est.n) != file.rows.size()) {
    throw std::runtime_error(path + ": row count does not match metadata n");
  }
  for (const auto& row : file.rows) {
    if (row.size() != 5) throw std::runtime_error(path + ": expected 5 columns per row");
    est.values.emplace_back(parse_double(row[1], path), parse_double(row[2], path));
    est.valid.push_back(parse_int(row[3], path) != 0 ? 1 : 0);
  }
  return est;
}

void write_profile_csv(const std::string& path, const VarianceProfile& profile,
                       const Metadata& extra) {
  Metadata meta;
  meta.emplace_back("n", std::to_string(profile.n));
  meta.emplace_back("kind", to_string(profile.kind));
  meta.emplace_back("scale", profile.scale);
  meta.insert(meta.end(), extra.begin(), extra.end());

  std::vector<std::string> rows;
  rows.reserve(profile.values.size());
  for (int l = 0; l < profile.n; ++l) {
    const auto i = static_cast<std::size_t>(l);
    rows.push_back(format_double(grid_omega(l, profile.n)) + "," +
                   format_double(profile.values[i]) + "," + to_string(profile.kind));
  }
  write_csv(path, meta, "omega,value,kind", rows);
}

void write_predicates_csv(const std::string& path, const OrderingPredicates& pred,
                          const Metadata& extra) {
  Metadata meta;
  meta.emplace_back("n", std::to_string(pred.n));
  meta.insert(meta.end(), extra.begin(), extra.end());

  std::vector<std::string> rows;
  rows.reserve(2 * pred.exact.size());
  for (int l = 0; l < pred.n; ++l) {
    const auto i = static_cast<std::size_t>(l);
    rows.push_back(format_double(grid_omega(l, pred.n)) + "," +
                   std::to_string(static_cast<int>(pred.exact[i])) + ",predicate_exact");
  }
  for (int l = 0; l < pred.n; ++l) {
    const auto i = static_cast<std::size_t>(l);
    rows.push_back(format_double(grid_omega(l, pred.n)) + "," +
                   std::to_string(static_cast<int>(pred.approximate[i])) +
                   ",predicate_approximate");
  }
  write_csv(path, meta, "omega,value,kind", rows);
}

void write_comparison_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, std::vector<ComparisonRow>>>& tables,
    const Metadata& extra) {
  Metadata meta;
  meta.emplace_back("normalization", "1/(runs-1)");
  meta.insert(meta.end(), extra.begin(), extra.end());

  std::vector<std::string> rows;
  for (const auto& [estimator, table] : tables) {
    for (const auto& row : table) {
      rows.push_back(format_double(row.omega) + "," + estimator + "," +
                     format_double(row.mc_var) + "," + format_double(row.theory_var) + "," +
                     format_double(row.abs_diff) + "," + format_double(row.rel_diff) + "," +
                     std::to_string(row.validity));
    }
  }
  write_csv(path, meta, "omega,estimator,mc_var,theory_var,abs_diff,rel_diff,validity", rows);
}

void write_signal_csv(const std::string& path, const std::vector<double>& samples) {
  std::vector<std::string> rows;
  rows.reserve(samples.size());
  for (const double s : samples) rows.push_back(format_double(s));
  write_csv(path, {}, "sample", rows);
}

std::vector<double> read_signal_csv(const std::string& path) {
  const CsvFile file = read_csv(path);
  if (file.header != "sample") throw std::runtime_error(path + ": expected header 'sample'");
  std::vector<double> samples;
  samples.reserve(file.rows.size());
  for (const auto& row : file.rows) {
    if (row.size() != 1) throw std::runtime_error(path + ": expected 1 column per row");
    samples.push_back(parse_double(row[0], path));
  }
  return samples;
}

}  // namespace fdident
