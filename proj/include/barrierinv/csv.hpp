#pragma once

// CSV contract shared by every command: UTF-8, '#'-prefixed header lines
// carrying one JSON metadata object, a column-name row, then two-column
// numeric rows.  Floats are written in shortest round-trip form (<= 17
// significant digits), so identical inputs produce byte-identical files.
// Writes go through a temp file and a rename.

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "barrierinv/constants.hpp"
#include "barrierinv/errors.hpp"
#include "barrierinv/forward.hpp"
#include "barrierinv/inversion.hpp"
#include "barrierinv/tabulated.hpp"

namespace barrierinv {

inline std::string format_double(double v) {
  std::array<char, 40> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (res.ec != std::errc())
    raise(errc::io_error, "format_double: conversion failed");
  return std::string(buf.data(), res.ptr);
}

inline double parse_double(std::string_view s, const std::string& context) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc())
    raise(errc::io_error, "could not parse number '" + std::string(s) + "' in " + context);
  return v;
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const char ch : bytes) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

struct csv_document {
  nlohmann::json meta;
  std::vector<std::string> columns;
  std::vector<std::array<double, 2>> rows;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io_error, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file_atomic(const std::filesystem::path& path, const std::string& body) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(errc::io_error, "cannot open '" + tmp.string() + "' for writing");
    out << body;
    if (!out) raise(errc::io_error, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) raise(errc::io_error, "rename to '" + path.string() + "' failed: " + ec.message());
}

inline std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

inline void write_csv(const std::filesystem::path& path, const nlohmann::json& meta,
                      const std::string& col_a, const std::string& col_b,
                      const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) raise(errc::io_error, "write_csv: column length mismatch");
  std::ostringstream body;
  body << "# " << meta.dump() << "\n";
  body << col_a << "," << col_b << "\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    body << format_double(xs[i]) << "," << format_double(ys[i]) << "\n";
  detail::write_file_atomic(path, body.str());
}

inline csv_document read_csv(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  csv_document doc;
  std::istringstream in(text);
  std::string line;
  bool have_columns = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (doc.meta.is_null()) {
        const auto brace = line.find('{');
        if (brace != std::string::npos) {
          const auto parsed =
              nlohmann::json::parse(line.substr(brace), nullptr, /*allow_exceptions=*/false);
          if (!parsed.is_discarded()) doc.meta = parsed;
        }
      }
      continue;
    }
    if (!have_columns) {
      doc.columns = detail::split_csv_row(line);
      if (doc.columns.size() != 2)
        raise(errc::io_error, path.string() + ": expected two columns, got " +
                                  std::to_string(doc.columns.size()));
      have_columns = true;
      continue;
    }
    const auto cells = detail::split_csv_row(line);
    if (cells.size() != 2)
      raise(errc::io_error,
            path.string() + ":" + std::to_string(line_no) + ": expected two cells");
    const std::string ctx = path.string() + ":" + std::to_string(line_no);
    doc.rows.push_back({parse_double(cells[0], ctx), parse_double(cells[1], ctx)});
  }
  if (!have_columns || doc.rows.empty())
    raise(errc::io_error, path.string() + ": no data rows");
  return doc;
}

inline std::string input_hash(const std::filesystem::path& path) {
  return fnv1a64_hex(detail::read_file(path));
}

// --- typed wrappers -------------------------------------------------------

inline void write_curve_csv(const std::filesystem::path& path, const scattering_curve& curve,
                            nlohmann::json extra = nlohmann::json::object()) {
  nlohmann::json meta = std::move(extra);
  meta["type"] = "scattering_curve";
  meta["kind"] = curve_kind_name(curve.kind);
  meta["hbar"] = curve.consts.hbar;
  meta["mass"] = curve.consts.mass;
  if (curve.u0) meta["u0"] = *curve.u0;
  write_csv(path, meta, "E", "value", curve.data.abscissa, curve.data.values);
}

inline scattering_curve read_curve_csv(const std::filesystem::path& path) {
  const csv_document doc = read_csv(path);
  if (!doc.meta.is_object() || !doc.meta.contains("kind"))
    raise(errc::io_error, path.string() + ": missing scattering-curve metadata");
  scattering_curve curve;
  curve.kind = curve_kind_from_name(doc.meta.at("kind").get<std::string>());
  curve.consts.hbar = doc.meta.value("hbar", 1.0);
  curve.consts.mass = doc.meta.value("mass", 1.0);
  if (doc.meta.contains("u0")) curve.u0 = doc.meta.at("u0").get<double>();
  std::vector<double> e, v;
  e.reserve(doc.rows.size());
  v.reserve(doc.rows.size());
  for (const auto& r : doc.rows) {
    e.push_back(r[0]);
    v.push_back(r[1]);
  }
  try {
    curve.data = tabulated_function(std::move(e), std::move(v));
  } catch (const error& err) {
    raise(errc::io_error, path.string() + ": " + err.what());
  }
  return curve;
}

inline void write_width_csv(const std::filesystem::path& path, const width_function& wf,
                            double u0, const physical_constants& consts,
                            nlohmann::json extra = nlohmann::json::object()) {
  nlohmann::json meta = std::move(extra);
  meta["type"] = "width_function";
  meta["u0"] = u0;
  meta["hbar"] = consts.hbar;
  meta["mass"] = consts.mass;
  write_csv(path, meta, "U", "width", wf.u_grid, wf.width);
}

struct width_file {
  width_function wf;
  double u0 = 0.0;
  physical_constants consts;
};

inline width_file read_width_csv(const std::filesystem::path& path) {
  const csv_document doc = read_csv(path);
  if (!doc.meta.is_object() || doc.meta.value("type", "") != "width_function" ||
      !doc.meta.contains("u0"))
    raise(errc::io_error, path.string() + ": missing width-function metadata");
  width_file out;
  out.u0 = doc.meta.at("u0").get<double>();
  out.consts.hbar = doc.meta.value("hbar", 1.0);
  out.consts.mass = doc.meta.value("mass", 1.0);
  for (const auto& r : doc.rows) {
    out.wf.u_grid.push_back(r[0]);
    out.wf.width.push_back(r[1]);
  }
  try {
    out.wf.validate();
  } catch (const error& err) {
    raise(errc::io_error, path.string() + ": " + err.what());
  }
  return out;
}

inline void write_xu_csv(const std::filesystem::path& path, const std::vector<double>& xs,
                         const std::vector<double>& us,
                         nlohmann::json meta = nlohmann::json::object()) {
  if (!meta.contains("type")) meta["type"] = "potential_table";
  write_csv(path, meta, "x", "U", xs, us);
}

inline tabulated_function read_xu_csv(const std::filesystem::path& path) {
  const csv_document doc = read_csv(path);
  std::vector<double> xs, us;
  for (const auto& r : doc.rows) {
    xs.push_back(r[0]);
    us.push_back(r[1]);
  }
  try {
    return tabulated_function(std::move(xs), std::move(us));
  } catch (const error& err) {
    raise(errc::io_error, path.string() + ": " + err.what());
  }
}

}  // namespace barrierinv
