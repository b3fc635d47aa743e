#include "phasereg/io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "phasereg/error.hpp"

namespace phasereg {

namespace {

using nlohmann::json;

std::size_t line_at(std::string_view text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size() || field.empty()) {
    throw ParseError("line " + std::to_string(line) + ": expected a number, got '" +
                         std::string(field) + "'",
                     line);
  }
  return v;
}

struct Columns {
  std::vector<double> x;
  std::vector<double> y;
};

Columns parse_two_columns(std::string_view text, std::string_view header) {
  Columns cols;
  std::size_t line = 0;
  std::size_t pos = 0;
  bool seen_header = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view row = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line;
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    if (row.empty()) continue;
    if (!seen_header) {
      if (row != header) {
        throw ParseError("line " + std::to_string(line) + ": expected header '" +
                             std::string(header) + "'",
                         line);
      }
      seen_header = true;
      continue;
    }
    const std::size_t comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError("line " + std::to_string(line) + ": expected two columns", line);
    }
    cols.x.push_back(parse_double(row.substr(0, comma), line));
    cols.y.push_back(parse_double(row.substr(comma + 1), line));
  }
  if (!seen_header) throw ParseError("missing header '" + std::string(header) + "'", 1);
  if (cols.x.size() < 2) throw ParseError("need at least two data rows", line);
  return cols;
}

std::string two_column_csv(std::string_view header, std::span<const double> xs,
                           std::span<const double> ys) {
  std::string out(header);
  out += '\n';
  for (std::size_t j = 0; j < xs.size(); ++j) {
    out += format_double(xs[j]);
    out += ',';
    out += format_double(ys[j]);
    out += '\n';
  }
  return out;
}

json metrics_json(const ReplicateMetrics& m) {
  return {{"lambda_error", m.lambda_error},
          {"arithmetic_error", m.arithmetic_error},
          {"warp_error", m.warp_error},
          {"registration_l2", m.registration_l2},
          {"registration_w2", m.registration_w2},
          {"lemma_slack", m.lemma_slack}};
}

}  // namespace

std::string patterns_to_json(const Interval& domain,
                             std::span<const PointPattern> processes) {
  json doc;
  doc["domain"] = {domain.lo(), domain.hi()};
  doc["processes"] = json::array();
  for (const auto& p : processes) {
    if (p.domain() != domain) {
      throw ValidationError("pattern domain differs from the collection domain");
    }
    doc["processes"].push_back(json(std::vector<double>(p.points().begin(), p.points().end())));
  }
  return doc.dump() + "\n";
}

PatternCollection patterns_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t line = line_at(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("line " + std::to_string(line) + ": " + e.what(), line);
  }
  try {
    const auto& dom = doc.at("domain");
    if (!dom.is_array() || dom.size() != 2) {
      throw ValidationError("\"domain\" must be [lo, hi]");
    }
    const Interval domain(dom[0].get<double>(), dom[1].get<double>());
    const auto& procs = doc.at("processes");
    if (!procs.is_array()) throw ValidationError("\"processes\" must be an array");
    PatternCollection out{domain, {}};
    out.processes.reserve(procs.size());
    for (const auto& p : procs) {
      out.processes.emplace_back(domain, p.get<std::vector<double>>());
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("pattern collection: ") + e.what(), 0);
  }
}

std::string measure_to_csv(const DiffuseMeasure& measure) {
  return two_column_csv("x,F", measure.grid(), measure.cdf_values());
}

DiffuseMeasure measure_from_csv(std::string_view text) {
  Columns cols = parse_two_columns(text, "x,F");
  const Interval domain(cols.x.front(), cols.x.back());
  return DiffuseMeasure(domain, std::move(cols.x), std::move(cols.y));
}

std::string warp_to_csv(const WarpMap& map) {
  return two_column_csv("x,T(x)", map.grid(), map.values());
}

WarpMap warp_from_csv(std::string_view text) {
  Columns cols = parse_two_columns(text, "x,T(x)");
  const Interval domain(cols.x.front(), cols.x.back());
  return WarpMap(domain, std::move(cols.x), std::move(cols.y));
}

std::string study_report_to_json(const StudyReport& report) {
  json doc;
  doc["scenario"] = report.scenario;
  doc["lemma_bound_holds"] = report.lemma_bound_holds;
  doc["slope"] = report.slope ? json(*report.slope) : json(nullptr);
  doc["cells"] = json::array();
  for (const auto& cell : report.cells) {
    json c;
    c["n"] = cell.n;
    c["tau"] = cell.tau;
    json med;
    json iqr;
    for (const auto& [name, field] :
         {std::pair{"lambda_error", &ReplicateMetrics::lambda_error},
          std::pair{"arithmetic_error", &ReplicateMetrics::arithmetic_error},
          std::pair{"warp_error", &ReplicateMetrics::warp_error},
          std::pair{"registration_l2", &ReplicateMetrics::registration_l2},
          std::pair{"registration_w2", &ReplicateMetrics::registration_w2}}) {
      med[name] = cell.median_of(field);
      iqr[name] = cell.iqr_of(field);
    }
    c["median"] = med;
    c["iqr"] = iqr;
    c["replicates"] = json::array();
    for (const auto& m : cell.replicates) c["replicates"].push_back(metrics_json(m));
    doc["cells"].push_back(std::move(c));
  }
  return doc.dump(2) + "\n";
}

std::string covariance_report_to_json(const CovarianceReport& report) {
  json doc;
  doc["xs"] = report.xs;
  doc["empirical"] = report.empirical;
  doc["direct"] = report.direct;
  doc["max_relative_error"] = report.max_relative_error;
  doc["sign_agreement"] = report.sign_agreement;
  doc["thresholded_entries"] = report.thresholded_entries;
  doc["replicates"] = report.replicates;
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace phasereg
