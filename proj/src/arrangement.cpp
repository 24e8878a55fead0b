#include "incidence_lab/arrangement.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "incidence_lab/random.hpp"

namespace incidence_lab {

SpatialGridShape spatial_grid_shape(std::int64_t m, std::int64_t n) {
  if (m < 1 || n < 1) throw std::invalid_argument("gen_spatial_grid: m and n must be positive");
  const Integer M(m), N(n);
  // m^{1/2}/n^{1/4} = (m^2/n)^{1/4}
  const Integer m2 = M * M;
  std::optional<Integer> x_range;
  if (m2 % N == 0) x_range = exact_root(m2 / N, 4);
  if (!x_range || *x_range < 1)
    throw std::invalid_argument("gen_spatial_grid: m^{1/2}/n^{1/4} is not a positive integer for (m, n) = (" +
                                std::to_string(m) + ", " + std::to_string(n) + ")");
  // m^{1/4} n^{1/8} = (m^2 n)^{1/8}
  auto offset_range = exact_root(m2 * N, 8);
  if (!offset_range)
    throw std::invalid_argument("gen_spatial_grid: m^{1/4}n^{1/8} is not a positive integer for (m, n) = (" +
                                std::to_string(m) + ", " + std::to_string(n) + ")");
  // n^{3/8}/m^{1/4} = (n^3/m^2)^{1/8}
  const Integer n3 = N * N * N;
  std::optional<Integer> slope_range;
  if (n3 % m2 == 0) slope_range = exact_root(n3 / m2, 8);
  if (!slope_range || *slope_range < 1)
    throw std::invalid_argument("gen_spatial_grid: n^{3/8}/m^{1/4} is not a positive integer for (m, n) = (" +
                                std::to_string(m) + ", " + std::to_string(n) + ")");
  return {*to_int64(*x_range), *to_int64(*offset_range), *to_int64(*slope_range)};
}

Arrangement2 gen_planar_grid(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("gen_planar_grid: n must be positive");
  auto root = exact_root(Integer(n), 3);
  if (!root) throw std::invalid_argument("gen_planar_grid: n = " + std::to_string(n) + " is not a perfect cube");
  const std::int64_t s = *to_int64(*root);
  const std::int64_t s2 = s * s;
  Arrangement2 a;
  a.points.reserve(static_cast<std::size_t>(n));
  a.lines.reserve(static_cast<std::size_t>(n));
  for (std::int64_t x = 1; x <= s; ++x)
    for (std::int64_t y = 1; y <= s2; ++y) a.points.emplace_back(Rational(x), Rational(y));
  // y = a x + b  <=>  a x - y = -b
  for (std::int64_t slope = 1; slope <= s; ++slope)
    for (std::int64_t b = 1; b <= s2; ++b) a.lines.push_back(Line2::from_integers(slope, -1, -b));
  return a;
}

Arrangement3 gen_spatial_grid(std::int64_t m, std::int64_t n) {
  const auto shape = spatial_grid_shape(m, n);
  Arrangement3 a;
  a.points.reserve(static_cast<std::size_t>(m));
  a.lines.reserve(static_cast<std::size_t>(n));
  for (std::int64_t x = 1; x <= shape.x_range; ++x)
    for (std::int64_t y = 1; y <= shape.offset_range; ++y)
      for (std::int64_t z = 1; z <= shape.offset_range; ++z) a.points.emplace_back(Rational(x), Rational(y), Rational(z));
  // Through (0, b, d) with direction (1, a, c): moment (b c - a d, d, -b).
  for (std::int64_t sa = 1; sa <= shape.slope_range; ++sa)
    for (std::int64_t sc = 1; sc <= shape.slope_range; ++sc)
      for (std::int64_t b = 1; b <= shape.offset_range; ++b)
        for (std::int64_t d = 1; d <= shape.offset_range; ++d)
          a.lines.push_back(Line3::from_plucker(Vector3<Integer>(1, sa, sc), Vector3<Integer>(b * sc - sa * d, d, -b)));
  return a;
}

template <int Dim>
Arrangement<Dim> random_subsample(const Arrangement<Dim>& a, const Rational& q, std::uint64_t seed) {
  if (q < 0 || q > 1) throw std::invalid_argument("random_subsample: q outside [0, 1]");
  const GeometryHash hash;
  const std::uint64_t point_seed = hash_mix(seed, static_cast<std::uint64_t>(Stream::points));
  const std::uint64_t line_seed = hash_mix(seed, static_cast<std::uint64_t>(Stream::lines));
  Arrangement<Dim> out;
  for (const auto& p : a.points) {
    SplitMix64 rng(hash_mix(point_seed, hash(p)));
    if (rng.bernoulli(q)) out.points.push_back(p);
  }
  for (const auto& l : a.lines) {
    SplitMix64 rng(hash_mix(line_seed, hash(l)));
    if (rng.bernoulli(q)) out.lines.push_back(l);
  }
  return out;
}

template Arrangement2 random_subsample(const Arrangement2&, const Rational&, std::uint64_t);
template Arrangement3 random_subsample(const Arrangement3&, const Rational&, std::uint64_t);

// ---- text format -------------------------------------------------------

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::size_t header_field(std::string_view token, std::string_view key, std::size_t line) {
  if (token.substr(0, key.size()) != key || token.size() <= key.size() || token[key.size()] != '=')
    throw ParseError(line, "expected '" + std::string(key) + "=<value>' in header, got '" + std::string(token) + "'");
  const auto value = token.substr(key.size() + 1);
  try {
    auto z = parse_integer(value);
    auto v = to_int64(z);
    if (!v || *v < 0) throw std::invalid_argument("out of range");
    return static_cast<std::size_t>(*v);
  } catch (const std::invalid_argument&) {
    throw ParseError(line, "bad header value '" + std::string(token) + "'");
  }
}

template <int Dim>
ReadResult parse_body(std::istream& in, std::size_t line_no, std::size_t want_points, std::size_t want_lines) {
  std::vector<Point<Dim>> points;
  std::vector<Line<Dim>> lines;
  std::string text;
  const std::string_view line_tag = Dim == 2 ? "L2" : "L3";
  while (std::getline(in, text)) {
    ++line_no;
    const auto tok = split_ws(text);
    if (tok.empty() || tok[0][0] == '#') continue;
    try {
      if (tok[0] == "P") {
        if (tok.size() != 1 + Dim)
          throw ParseError(line_no, "point record has " + std::to_string(tok.size() - 1) + " coordinates in a dim=" +
                                        std::to_string(Dim) + " file");
        Point<Dim> p;
        for (int i = 0; i < Dim; ++i) p(i) = parse_rational(tok[1 + i]);
        points.push_back(p);
      } else if (tok[0] == "L2" || tok[0] == "L3") {
        if (tok[0] != line_tag)
          throw ParseError(line_no, std::string(tok[0]) + " record in a dim=" + std::to_string(Dim) + " file");
        if constexpr (Dim == 2) {
          if (tok.size() != 4) throw ParseError(line_no, "L2 record needs 3 integers");
          lines.push_back(Line2::from_integers(parse_integer(tok[1]), parse_integer(tok[2]), parse_integer(tok[3])));
        } else {
          if (tok.size() != 7) throw ParseError(line_no, "L3 record needs 6 integers");
          Vector3<Integer> d, m;
          for (int i = 0; i < 3; ++i) {
            d(i) = parse_integer(tok[1 + i]);
            m(i) = parse_integer(tok[4 + i]);
          }
          lines.push_back(Line3::from_plucker(d, m));
        }
      } else {
        throw ParseError(line_no, "unknown record type '" + std::string(tok[0]) + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (points.size() != want_points || lines.size() != want_lines)
    throw ParseError(line_no, "header announces " + std::to_string(want_points) + " points and " +
                                  std::to_string(want_lines) + " lines, file has " + std::to_string(points.size()) +
                                  " and " + std::to_string(lines.size()));
  ReadResult r;
  r.arrangement = make_arrangement<Dim>(std::move(points), std::move(lines), &r.duplicates);
  return r;
}

}  // namespace

ReadResult read_arrangement(std::istream& in) {
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    const auto tok = split_ws(text);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok.size() != 3) throw ParseError(line_no, "header must be 'dim=2|3 points=m lines=n'");
    const std::size_t dim = header_field(tok[0], "dim", line_no);
    const std::size_t m = header_field(tok[1], "points", line_no);
    const std::size_t n = header_field(tok[2], "lines", line_no);
    if (dim == 2) return parse_body<2>(in, line_no, m, n);
    if (dim == 3) return parse_body<3>(in, line_no, m, n);
    throw ParseError(line_no, "dim must be 2 or 3");
  }
  throw ParseError(line_no, "missing header");
}

ReadResult read_arrangement(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_arrangement(in);
}

template <int Dim>
void write_arrangement(const Arrangement<Dim>& a, std::ostream& out) {
  out << "dim=" << Dim << " points=" << a.m() << " lines=" << a.n() << '\n';
  for (const auto& p : a.points) {
    out << 'P';
    for (int i = 0; i < Dim; ++i) out << ' ' << to_string(p(i));
    out << '\n';
  }
  for (const auto& l : a.lines) {
    if constexpr (Dim == 2) {
      out << "L2 " << l.a() << ' ' << l.b() << ' ' << l.c() << '\n';
    } else {
      out << "L3";
      for (const auto& z : l.tuple()) out << ' ' << z;
      out << '\n';
    }
  }
}

template void write_arrangement(const Arrangement2&, std::ostream&);
template void write_arrangement(const Arrangement3&, std::ostream&);

void write_arrangement(const AnyArrangement& a, std::ostream& out) {
  std::visit([&](const auto& arr) { write_arrangement(arr, out); }, a);
}

void write_arrangement(const AnyArrangement& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_arrangement(a, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<Point3> random_rational_points(std::size_t count, std::uint64_t seed, std::int64_t range,
                                           std::int64_t max_den) {
  if (range < 1 || max_den < 1) throw std::invalid_argument("random_rational_points: bad ranges");
  SplitMix64 rng(hash_mix(seed, static_cast<std::uint64_t>(Stream::sample)));
  std::unordered_set<Point3, GeometryHash> seen;
  std::vector<Point3> out;
  out.reserve(count);
  const auto width = static_cast<std::uint64_t>(2 * range + 1);
  while (out.size() < count) {
    Point3 p;
    for (int i = 0; i < 3; ++i)
      p(i) = Rational(Integer(static_cast<std::int64_t>(rng.below(width)) - range),
                      Integer(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(max_den))) + 1));
    if (seen.insert(p).second) out.push_back(p);
  }
  return out;
}

}  // namespace incidence_lab
