#pragma once

#include <string>
#include <vector>

#include "hsp/measures.hpp"
#include "hsp/pencil.hpp"
#include "hsp/series.hpp"
#include "hsp/support.hpp"

namespace hsp {

inline constexpr const char* kToolVersion = "0.1.0";

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Pencil ingestion format: { "k": int, "Q": [ [[re,im],...] per polynomial,
/// low-to-high ] }. Rejects deg Q_i > i and malformed documents with
/// std::invalid_argument.
Pencil parse_pencil_json(const std::string& text);
Pencil load_pencil(const std::string& path);
std::string pencil_to_json(const Pencil& P, int digits = 17);

/// FNV-1a 64-bit hash of the canonical pencil serialization, hex encoded.
std::string pencil_hash(const Pencil& P);

std::string format_real(double x, int digits);

/// RFC-4180 CSV with a header row; line 1 is a comment recording the pencil
/// hash and tool version. `columns` names the columns; each row must have the
/// same arity.
void write_csv(const std::string& path, const std::string& pencil_hash_hex,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows,
               const std::string& extra_comment = "");

void write_points_csv(const std::string& path, const std::string& hash,
                      const std::vector<cxd>& pts, int digits);
void write_series_csv(const std::string& path, const std::string& hash,
                      const TruncatedSeries& s, int digits);
void write_atoms_csv(const std::string& path, const std::string& hash,
                     const RootMeasure& mu, int digits);
void write_level_curve_csv(const std::string& path, const std::string& hash,
                           const LevelCurve& level, int digits);

struct SvgGroup {
  std::vector<cxd> pts;
  double radius = 2;       // marker radius in user units
  std::string color = "#000000";
  bool polyline = false;   // render as a connected path instead of markers
};

/// Standalone SVG scatter/polyline plot; viewBox from the data extent plus a
/// 10% margin, no timestamps (byte-stable for identical input).
void write_svg_scatter(const std::string& path, const std::vector<SvgGroup>& groups,
                       const std::string& title = "");

}  // namespace hsp
