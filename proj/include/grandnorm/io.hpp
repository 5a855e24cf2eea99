// Copyright 2026 The grandnorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef GRANDNORM_IO_HPP
#define GRANDNORM_IO_HPP

// CSV ingestion and emission for step functions, grid functions, weights and
// boundary data, plus atomic file replacement.
//
//   step function:  value,measure
//   1D grid:        x,value
//   2D grid:        x,y,value      (row-major, x fastest)
//   boundary data:  index,value    (perimeter index, counterclockwise)
//
// Blank lines and lines starting with '#' are ignored.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "grandnorm/error.hpp"
#include "grandnorm/grid_function.hpp"
#include "grandnorm/monotonicity.hpp"
#include "grandnorm/step_function.hpp"

namespace grandnorm {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline double parse_number(std::string_view field, std::size_t line, const char* column) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), x);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw ParseError(line, std::string("column '") + column + "': '" + std::string(field) +
                               "' is not a number");
  }
  if (!std::isfinite(x)) throw ParseError(line, std::string("column '") + column + "' is not finite");
  return x;
}

struct CsvRecord {
  std::size_t line;
  std::vector<std::string_view> fields;
};

// Reads the header and data records; the header must match one of the
// accepted column lists. Returns the index of the matched header.
class CsvReader {
 public:
  CsvReader(std::istream& in, const std::vector<std::vector<std::string>>& headers) {
    std::string text;
    std::size_t line = 0;
    bool have_header = false;
    while (std::getline(in, text)) {
      ++line;
      const std::string_view t = trim(text);
      if (t.empty() || t.front() == '#') continue;
      lines_.push_back(std::string(t));
      const std::string_view stored = lines_.back();
      auto fields = split_fields(stored);
      if (!have_header) {
        have_header = true;
        for (std::size_t h = 0; h < headers.size(); ++h) {
          if (fields.size() != headers[h].size()) continue;
          bool same = true;
          for (std::size_t c = 0; c < fields.size(); ++c) same = same && fields[c] == headers[h][c];
          if (same) {
            matched_ = h;
            break;
          }
        }
        if (matched_ == npos) throw ParseError(line, "unexpected header '" + std::string(t) + "'");
        width_ = headers[matched_].size();
        continue;
      }
      if (fields.size() != width_) {
        throw ParseError(line, "expected " + std::to_string(width_) + " fields, found " +
                                   std::to_string(fields.size()));
      }
      line_numbers_.push_back(line);
    }
    if (!have_header) throw ParseError(0, "empty input: missing header");
    // Re-split now that the string storage is stable.
    for (std::size_t k = 1; k < lines_.size(); ++k) {
      records_.push_back({line_numbers_[k - 1], split_fields(lines_[k])});
    }
    if (records_.empty()) throw ParseError(0, "no data records after the header");
  }

  std::size_t matched() const { return matched_; }
  const std::vector<CsvRecord>& records() const { return records_; }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<std::string> lines_;
  std::vector<std::size_t> line_numbers_;
  std::vector<CsvRecord> records_;
  std::size_t matched_ = npos;
  std::size_t width_ = 0;
};

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return in;
}

inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Step functions
// ---------------------------------------------------------------------------

inline StepFunction read_step_csv(std::istream& in) {
  detail::CsvReader csv(in, {{"value", "measure"}});
  std::vector<Atom> atoms;
  for (const auto& rec : csv.records()) {
    const double v = detail::parse_number(rec.fields[0], rec.line, "value");
    const double m = detail::parse_number(rec.fields[1], rec.line, "measure");
    if (!(m > 0.0)) throw ParseError(rec.line, "measure must be positive");
    atoms.push_back({v, m});
  }
  return StepFunction(std::move(atoms));
}

inline StepFunction read_step_csv(const std::string& path) {
  auto in = detail::open_input(path);
  return read_step_csv(in);
}

inline std::string step_csv(const StepFunction& f) {
  std::string out = "value,measure\n";
  for (const Atom& a : f.atoms()) {
    out += detail::format_double(a.value) + "," + detail::format_double(a.measure) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Grid functions
// ---------------------------------------------------------------------------

inline GridFunction read_grid_csv(std::istream& in) {
  detail::CsvReader csv(in, {{"x", "value"}, {"x", "y", "value"}});
  const auto& recs = csv.records();
  if (csv.matched() == 0) {
    std::vector<double> xs;
    std::vector<double> vs;
    for (const auto& rec : recs) {
      xs.push_back(detail::parse_number(rec.fields[0], rec.line, "x"));
      vs.push_back(detail::parse_number(rec.fields[1], rec.line, "value"));
    }
    if (xs.size() < 4) throw ParseError(0, "a 1D grid needs at least 4 points");
    const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    if (!(h > 0.0)) throw ParseError(recs[1].line, "x must increase");
    const double tol = 1e-9 * std::max(1.0, std::abs(xs.back() - xs.front()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (std::abs(xs[i] - (xs.front() + h * static_cast<double>(i))) > tol) {
        throw ParseError(recs[i].line, "nonuniform spacing along x");
      }
    }
    return GridFunction::line(std::move(vs), h, xs.front());
  }

  std::vector<double> xs, ys, vs;
  for (const auto& rec : recs) {
    xs.push_back(detail::parse_number(rec.fields[0], rec.line, "x"));
    ys.push_back(detail::parse_number(rec.fields[1], rec.line, "y"));
    vs.push_back(detail::parse_number(rec.fields[2], rec.line, "value"));
  }
  std::size_t nx = 1;
  while (nx < ys.size() && ys[nx] == ys[0]) ++nx;
  if (nx < 4) throw ParseError(recs.front().line, "a 2D grid needs at least 4 points per row");
  if (vs.size() % nx != 0) throw ParseError(recs.back().line, "ragged last row");
  const std::size_t ny = vs.size() / nx;
  if (ny < 4) throw ParseError(0, "a 2D grid needs at least 4 rows");
  const double h = (xs[nx - 1] - xs[0]) / static_cast<double>(nx - 1);
  if (!(h > 0.0)) throw ParseError(recs[1].line, "x must increase along a row");
  const double tol = 1e-9 * std::max({1.0, std::abs(xs[nx - 1] - xs[0]), std::abs(ys.back() - ys[0])});
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t k = j * nx + i;
      const bool x_ok = std::abs(xs[k] - (xs[0] + h * static_cast<double>(i))) <= tol;
      const bool y_ok = std::abs(ys[k] - (ys[0] + h * static_cast<double>(j))) <= tol;
      if (!x_ok || !y_ok) {
        throw ParseError(recs[k].line, "not a uniform row-major grid with equal spacing on both axes");
      }
    }
  }
  return GridFunction::plane(std::move(vs), nx, ny, h, xs[0], ys[0]);
}

inline GridFunction read_grid_csv(const std::string& path) {
  auto in = detail::open_input(path);
  return read_grid_csv(in);
}

inline Weight read_weight_csv(const std::string& path) {
  GridFunction g = read_grid_csv(path);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!(g[k] > 0.0)) throw ParseError(0, "weight sample " + std::to_string(k) + " is not positive");
  }
  return Weight(std::move(g));
}

inline std::string grid_csv(const GridFunction& g) {
  std::string out = g.dim() == 1 ? "x,value\n" : "x,y,value\n";
  for (std::size_t j = 0; j < (g.dim() == 1 ? 1 : g.ny()); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      out += detail::format_double(g.x(i)) + ",";
      if (g.dim() == 2) out += detail::format_double(g.y(j)) + ",";
      out += detail::format_double(g[j * g.nx() + i]) + "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Boundary data
// ---------------------------------------------------------------------------

inline BoundaryData read_boundary_csv(std::istream& in, std::size_t nx, std::size_t ny) {
  detail::CsvReader csv(in, {{"index", "value"}});
  const std::size_t count = BoundaryData::perimeter(nx, ny);
  BoundaryData b{nx, ny, std::vector<double>(count, 0.0)};
  std::vector<bool> seen(count, false);
  for (const auto& rec : csv.records()) {
    const double idx = detail::parse_number(rec.fields[0], rec.line, "index");
    if (idx < 0 || idx != std::floor(idx) || idx >= static_cast<double>(count)) {
      throw ParseError(rec.line, "index out of range [0, " + std::to_string(count) + ")");
    }
    const auto k = static_cast<std::size_t>(idx);
    if (seen[k]) throw ParseError(rec.line, "duplicate index " + std::to_string(k));
    seen[k] = true;
    b.values[k] = detail::parse_number(rec.fields[1], rec.line, "value");
  }
  for (std::size_t k = 0; k < count; ++k) {
    if (!seen[k]) throw ParseError(0, "missing perimeter index " + std::to_string(k));
  }
  return b;
}

inline BoundaryData read_boundary_csv(const std::string& path, std::size_t nx, std::size_t ny) {
  auto in = detail::open_input(path);
  return read_boundary_csv(in, nx, ny);
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

/// Writes to a sibling temporary file and renames it over the target.
inline void write_atomically(const std::filesystem::path& target, const std::string& content) {
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename '" + tmp.string() + "' to '" + target.string() +
                             "': " + ec.message());
  }
}

}  // namespace grandnorm

#endif  // GRANDNORM_IO_HPP
