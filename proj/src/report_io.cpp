#include "incidence_lab/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace incidence_lab {

ReportRow report_row(const BoundReport& rep) {
  ReportRow row;
  row.kind = to_string(rep.kind);
  row.m = rep.m;
  row.n = rep.n;
  row.total = rep.total;
  row.max_coplanar = rep.max_coplanar;
  row.r = rep.r;
  row.rich_count = rep.rich_count;
  row.ratio_dominant = rep.ratio;
  return row;
}

const std::string& csv_header() {
  static const std::string header = "kind,m,n,total,max_coplanar,r,rich_count,ratio_dominant";
  return header;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string cell(const std::optional<T>& v) {
  return v ? std::to_string(*v) : std::string();
}

template <class T>
T parse_number(const std::string& s, const char* field) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument(std::string("csv: bad ") + field + " '" + s + "'");
  return v;
}

template <class T>
std::optional<T> parse_optional(const std::string& s, const char* field) {
  if (s.empty()) return std::nullopt;
  return parse_number<T>(s, field);
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw std::invalid_argument("csv: bad ratio_dominant '" + s + "'");
  return v;
}

}  // namespace

std::string to_csv(const ReportRow& row) {
  return row.kind + "," + std::to_string(row.m) + "," + std::to_string(row.n) + "," + std::to_string(row.total) + "," +
         cell(row.max_coplanar) + "," + cell(row.r) + "," + cell(row.rich_count) + "," +
         format_double(row.ratio_dominant);
}

ReportRow parse_csv_row(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  for (std::string item; std::getline(ss, item, ',');) f.push_back(item);
  if (!line.empty() && line.back() == ',') f.emplace_back();
  if (f.size() != 8) throw std::invalid_argument("csv: expected 8 fields, got " + std::to_string(f.size()));
  ReportRow row;
  row.kind = f[0];
  parse_bound_kind(row.kind);
  row.m = parse_number<std::int64_t>(f[1], "m");
  row.n = parse_number<std::int64_t>(f[2], "n");
  row.total = parse_number<std::int64_t>(f[3], "total");
  row.max_coplanar = parse_optional<std::int64_t>(f[4], "max_coplanar");
  row.r = parse_optional<int>(f[5], "r");
  row.rich_count = parse_optional<std::int64_t>(f[6], "rich_count");
  row.ratio_dominant = parse_double(f[7]);
  return row;
}

void write_csv(std::span<const ReportRow> rows, std::ostream& out) {
  out << csv_header() << '\n';
  for (const auto& r : rows) out << to_csv(r) << '\n';
}

std::vector<ReportRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) throw std::invalid_argument("csv: missing header row");
  std::vector<ReportRow> rows;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(parse_csv_row(line));
  return rows;
}

// ---- JSON --------------------------------------------------------------

Json to_json(const ReportRow& row) {
  Json j;
  j["kind"] = row.kind;
  j["m"] = row.m;
  j["n"] = row.n;
  j["total"] = row.total;
  j["max_coplanar"] = row.max_coplanar ? Json(*row.max_coplanar) : Json(nullptr);
  j["r"] = row.r ? Json(*row.r) : Json(nullptr);
  j["rich_count"] = row.rich_count ? Json(*row.rich_count) : Json(nullptr);
  j["ratio_dominant"] = row.ratio_dominant;
  return j;
}

Json to_json(const BoundReport& rep) {
  Json j = to_json(report_row(rep));
  j["lhs"] = rep.lhs;
  Json terms = Json::array();
  for (const auto& t : rep.terms) terms.push_back({{"name", t.name}, {"value", t.value}});
  j["terms"] = terms;
  j["dominant"] = rep.terms.empty() ? Json(nullptr) : Json(rep.terms[rep.dominant].name);
  return j;
}

Json to_json(const IncidenceReport& rep) {
  Json j;
  j["total"] = rep.total;
  j["point_degrees"] = rep.point_degrees;
  j["line_counts"] = rep.line_counts;
  return j;
}

Json to_json(const CliqueResult& c) {
  return {{"members", c.members}, {"witnesses", c.witnesses}, {"general_position", c.general_position}};
}

Json to_json(const GridResult& g) {
  return {{"first", g.first}, {"second", g.second}, {"intersection_points", g.intersection_points}};
}

Json to_json(const Plane& p) {
  Json j = Json::array();
  for (const auto& z : p.tuple()) j.push_back(z.str());
  return j;
}

Json to_json(const Quadric& q) {
  Json j = Json::array();
  for (const auto& c : q.coefficients()) j.push_back(to_string(c));
  return j;
}

Json to_json(const Polynomial3<Rational>& f) {
  Json j = Json::array();
  for (const auto& [e, c] : f.terms()) j.push_back({{"exponent", e}, {"coeff", to_string(c)}});
  return j;
}

Json to_json(const SeparationCertificate& cert) {
  Json j;
  j["step"] = cert.step;
  j["plane"] = to_json(cert.plane);
  j["case"] = to_string(cert.kind);
  Json sides = Json::object();
  std::vector<int> idx(cert.split.a);
  idx.insert(idx.end(), cert.split.b.begin(), cert.split.b.end());
  std::sort(idx.begin(), idx.end());
  for (int i : idx) sides[std::to_string(i)] = cert.side_of(i);
  j["sides"] = sides;
  Json retained = Json::object();
  for (std::size_t t = 0; t < idx.size() && t < cert.after.size(); ++t)
    retained[std::to_string(idx[t])] = {{"before", cert.before[t]}, {"after", cert.after[t]}};
  j["retained"] = retained;
  j["concentrated"] = cert.concentrated;
  return j;
}

Json to_json(const PartitionResult& res, const PartitionConformance& conf) {
  Json j;
  j["D"] = res.D;
  j["degree"] = res.degree;
  j["population_target"] = res.population_target;
  j["conforming"] = res.conforming;
  Json rounds = Json::array();
  for (const auto& r : res.rounds)
    rounds.push_back({{"degree", r.degree},
                      {"classes_bisected", r.classes_bisected},
                      {"attempts", r.attempts},
                      {"polynomial", to_json(r.polynomial)}});
  j["rounds"] = rounds;
  if (!res.f.is_zero()) j["polynomial"] = to_json(res.f);
  j["num_cells"] = res.num_cells;
  Json cells = Json::array();
  for (const auto& [id, count] : res.cell_counts) {
    if (id < 0) continue;
    cells.push_back(
        {{"cell", id}, {"signs", res.cell_signs[static_cast<std::size_t>(id)]}, {"population", count}});
  }
  j["cells"] = cells;
  j["point_labels"] = res.point_labels;
  j["conformance"] = {{"cells_constant", conf.cells_constant},
                      {"population_constant", conf.population_constant},
                      {"max_population", conf.max_population},
                      {"boundary_points", conf.boundary_points},
                      {"conserved", conf.conserved},
                      {"within_budget", conf.within_budget},
                      {"conforming", conf.conforming},
                      {"cells_are_sign_classes", true}};
  return j;
}

Json to_json(const CrossingReport& c) {
  Json line = Json::array();
  for (const auto& z : c.line.tuple()) line.push_back(z.str());
  return {{"line", line}, {"root_count", c.root_count}, {"cells_crossed_upper", c.cells_crossed_upper}};
}

Json to_json(const RecipeDiagnostics& d) {
  Json j;
  j["k"] = d.params.k;
  j["m"] = d.params.m;
  j["n"] = d.params.n;
  j["point_size_formula"] = d.params.point_size_formula;
  j["line_size_formula"] = d.params.line_size_formula;
  j["generator_points"] = d.params.generator_points;
  j["generator_lines"] = d.params.generator_lines;
  j["q"] = to_string(d.params.q);
  j["q_exact"] = d.params.q_exact;
  Json attempts = Json::array();
  for (const auto& a : d.attempts) {
    Json r{{"seed", a.seed}, {"points", a.points}, {"lines", a.lines}, {"x1", a.x1}, {"x2", a.x2}, {"x3", a.x3}};
    r["x4"] = a.x4 ? Json(*a.x4) : Json(nullptr);
    r["trimmed"] = a.trimmed ? Json(*a.trimmed) : Json(nullptr);
    attempts.push_back(r);
  }
  j["attempts"] = attempts;
  j["sample_incidences"] = d.sample_incidences;
  j["output_incidences"] = d.output_incidences;
  j["trim_method"] = d.trim_method;
  j["max_coplanar"] = d.max_coplanar ? Json(*d.max_coplanar) : Json(nullptr);
  return j;
}

void write_gnuplot(std::span<const std::string> columns, std::span<const std::vector<double>> rows, std::ostream& out) {
  out << '#';
  for (const auto& c : columns) out << ' ' << c;
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? " " : "") << format_double(r[i]);
    out << '\n';
  }
}

}  // namespace incidence_lab
