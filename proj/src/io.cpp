#include "hsp/io.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace hsp {

namespace {

using nlohmann::json;

cxd parse_complex(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument("pencil json: complex values must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::string canonical_serial(const Pencil& P) {
  std::ostringstream os;
  os << std::setprecision(17) << P.order();
  for (int i = 0; i <= P.order(); ++i) {
    os << ";";
    for (int m = 0; m <= i; ++m) os << P.a(i, m).real() << "," << P.a(i, m).imag() << ",";
  }
  return os.str();
}

}  // namespace

Pencil parse_pencil_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("pencil json: parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("k") || !doc.contains("Q"))
    throw std::invalid_argument("pencil json: expected object with \"k\" and \"Q\"");
  if (!doc["k"].is_number_integer())
    throw std::invalid_argument("pencil json: \"k\" must be an integer");
  int k = doc["k"].get<int>();
  const json& Q = doc["Q"];
  if (!Q.is_array() || static_cast<int>(Q.size()) != k + 1)
    throw std::invalid_argument("pencil json: \"Q\" must list k+1 polynomials");
  std::vector<ComplexPolynomial> polys;
  for (int i = 0; i <= k; ++i) {
    if (!Q[i].is_array())
      throw std::invalid_argument("pencil json: each Q_i must be a coefficient list");
    std::vector<cxd> c;
    for (const auto& cj : Q[i]) c.push_back(parse_complex(cj));
    ComplexPolynomial p(std::move(c));
    if (!p.is_zero() && p.degree() > i)
      throw std::invalid_argument("pencil json: deg Q_" + std::to_string(i) +
                                  " exceeds " + std::to_string(i));
    polys.push_back(std::move(p));
  }
  return Pencil(std::move(polys));
}

Pencil load_pencil(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open pencil file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_pencil_json(ss.str());
}

std::string pencil_to_json(const Pencil& P, int digits) {
  json Q = json::array();
  for (int i = 0; i <= P.order(); ++i) {
    json poly = json::array();
    int top = P.Q(i).is_zero() ? -1 : P.Q(i).degree();
    for (int m = 0; m <= top; ++m)
      poly.push_back({P.a(i, m).real(), P.a(i, m).imag()});
    Q.push_back(poly);
  }
  json doc{{"k", P.order()}, {"Q", Q}};
  (void)digits;
  return doc.dump(2);
}

std::string pencil_hash(const Pencil& P) {
  std::string s = canonical_serial(P);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string format_real(double x, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

void write_csv(const std::string& path, const std::string& pencil_hash_hex,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows,
               const std::string& extra_comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  out << "# pencil=" << pencil_hash_hex << " version=" << kToolVersion;
  if (!extra_comment.empty()) out << " " << extra_comment;
  out << "\r\n";
  for (size_t c = 0; c < columns.size(); ++c)
    out << columns[c] << (c + 1 < columns.size() ? "," : "");
  out << "\r\n";
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) out << row[c] << (c + 1 < row.size() ? "," : "");
    out << "\r\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_points_csv(const std::string& path, const std::string& hash,
                      const std::vector<cxd>& pts, int digits) {
  std::vector<std::vector<std::string>> rows;
  for (cxd p : pts)
    rows.push_back({format_real(p.real(), digits), format_real(p.imag(), digits)});
  write_csv(path, hash, {"re", "im"}, rows);
}

void write_series_csv(const std::string& path, const std::string& hash,
                      const TruncatedSeries& s, int digits) {
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i <= s.order(); ++i)
    rows.push_back({std::to_string(i), format_real(s.eps(i).real(), digits),
                    format_real(s.eps(i).imag(), digits)});
  write_csv(path, hash, {"index", "re", "im"}, rows,
            std::string("origin=") + origin_name(s.origin));
}

void write_atoms_csv(const std::string& path, const std::string& hash,
                     const RootMeasure& mu, int digits) {
  std::vector<std::vector<std::string>> rows;
  for (cxd a : mu.atoms)
    rows.push_back({format_real(a.real(), digits), format_real(a.imag(), digits),
                    format_real(mu.weight(), digits)});
  write_csv(path, hash, {"re", "im", "weight"}, rows);
}

void write_level_curve_csv(const std::string& path, const std::string& hash,
                           const LevelCurve& level, int digits) {
  std::vector<std::vector<std::string>> rows;
  for (size_t v = 0; v < level.points.size(); ++v)
    rows.push_back({format_real(level.points[v].real(), digits),
                    format_real(level.points[v].imag(), digits),
                    format_real(level.density[v], digits)});
  write_csv(path, hash, {"re", "im", "density"}, rows,
            "pair=" + std::to_string(level.pair.first) + "-" +
                std::to_string(level.pair.second));
}

void write_svg_scatter(const std::string& path, const std::vector<SvgGroup>& groups,
                       const std::string& title) {
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const auto& g : groups)
    for (cxd p : g.pts) {
      x0 = std::min(x0, p.real());
      x1 = std::max(x1, p.real());
      y0 = std::min(y0, p.imag());
      y1 = std::max(y1, p.imag());
    }
  if (x0 > x1) {
    x0 = y0 = -1;
    x1 = y1 = 1;
  }
  double mx = 0.1 * std::max(x1 - x0, 1e-9), my = 0.1 * std::max(y1 - y0, 1e-9);
  x0 -= mx;
  x1 += mx;
  y0 -= my;
  y1 += my;
  const double W = 640;
  const double H = W * (y1 - y0) / (x1 - x0);
  auto X = [&](double x) { return (x - x0) / (x1 - x0) * W; };
  // SVG y runs downward; flip so the plot keeps mathematical orientation
  auto Y = [&](double y) { return (y1 - y) / (y1 - y0) * H; };

  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  out << std::setprecision(8);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << " " << H
      << "\">\n";
  if (!title.empty()) out << "<title>" << title << "</title>\n";
  for (const auto& g : groups) {
    if (g.polyline && g.pts.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << g.color << "\" stroke-width=\""
          << g.radius << "\" points=\"";
      for (cxd p : g.pts) out << X(p.real()) << "," << Y(p.imag()) << " ";
      out << "\"/>\n";
    } else {
      for (cxd p : g.pts)
        out << "<circle cx=\"" << X(p.real()) << "\" cy=\"" << Y(p.imag()) << "\" r=\""
            << g.radius << "\" fill=\"" << g.color << "\"/>\n";
    }
  }
  out << "</svg>\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace hsp
