#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "incidence_lab/incidence.hpp"
#include "incidence_lab/partition.hpp"
#include "incidence_lab/pruner.hpp"
#include "incidence_lab/recipes.hpp"
#include "incidence_lab/structure.hpp"

namespace incidence_lab {

using Json = nlohmann::ordered_json;

// ---- CSV ---------------------------------------------------------------

/// One row of `kind,m,n,total,max_coplanar,r,rich_count,ratio_dominant`;
/// absent optional fields are empty cells.
struct ReportRow {
  std::string kind;
  std::int64_t m = 0;
  std::int64_t n = 0;
  std::int64_t total = 0;
  std::optional<std::int64_t> max_coplanar;
  std::optional<int> r;
  std::optional<std::int64_t> rich_count;
  double ratio_dominant = 0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

ReportRow report_row(const BoundReport& rep);

const std::string& csv_header();
std::string to_csv(const ReportRow& row);
/// Inverse of to_csv. Throws std::invalid_argument on a malformed row.
ReportRow parse_csv_row(const std::string& line);
void write_csv(std::span<const ReportRow> rows, std::ostream& out);
std::vector<ReportRow> read_csv(std::istream& in);

// ---- JSON --------------------------------------------------------------

Json to_json(const ReportRow& row);
Json to_json(const BoundReport& rep);
Json to_json(const IncidenceReport& rep);
Json to_json(const CliqueResult& c);
Json to_json(const GridResult& g);
Json to_json(const Plane& p);
Json to_json(const Quadric& q);
/// Terms as {"exponent": [a, b, c], "coeff": "p/q"} in ascending exponent order.
Json to_json(const Polynomial3<Rational>& f);
Json to_json(const SeparationCertificate& cert);
Json to_json(const PartitionResult& res, const PartitionConformance& conf);
Json to_json(const CrossingReport& c);
Json to_json(const RecipeDiagnostics& d);

// ---- gnuplot -----------------------------------------------------------

/// Whitespace-delimited columns under a '#' header line.
void write_gnuplot(std::span<const std::string> columns, std::span<const std::vector<double>> rows, std::ostream& out);

}  // namespace incidence_lab
