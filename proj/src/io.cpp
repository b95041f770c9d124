#include "ompbound/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "ompbound/errors.hpp"

namespace ompbound {

namespace {

double parse_double(const std::string& token, const std::string& where) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ValidationError(where + ": not a decimal literal: '" + token + "'");
  }
  if (!std::isfinite(v)) {
    throw ValidationError(where + ": non-finite entry '" + token + "'");
  }
  return v;
}

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Matrix parse_matrix_csv(std::istream& in, const std::string& name) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trimmed(line);
    if (body.empty()) continue;
    std::vector<double> row;
    std::stringstream cells(body);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::ostringstream where;
      where << name << ":" << line_no;
      row.push_back(parse_double(trimmed(cell), where.str()));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream os;
      os << name << ":" << line_no << ": row has " << row.size()
         << " entries, expected " << rows.front().size();
      throw ValidationError(os.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) {
    throw ValidationError(name + ": empty matrix");
  }
  Matrix a(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      a(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return a;
}

Matrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open matrix file: " + path);
  return parse_matrix_csv(in, path);
}

void write_matrix_csv(std::ostream& out, const Matrix& a) {
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_roundtrip(a(i, j));
    }
    out << '\n';
  }
}

Vector parse_vector(std::istream& in, const std::string& name) {
  std::vector<double> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trimmed(line);
    if (body.empty()) continue;
    std::ostringstream where;
    where << name << ":" << line_no;
    entries.push_back(parse_double(body, where.str()));
  }
  if (entries.empty()) throw ValidationError(name + ": empty vector");
  Vector v(static_cast<Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Index>(i)) = entries[i];
  return v;
}

Vector load_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open vector file: " + path);
  return parse_vector(in, path);
}

void write_vector(std::ostream& out, const Vector& v) {
  for (Index i = 0; i < v.size(); ++i) out << format_roundtrip(v(i)) << '\n';
}

std::string format_sig12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_roundtrip(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, result.ptr);
}

std::string format_index_set(const IndexSet& s) {
  std::ostringstream os;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) os << ' ';
    os << s[i];
  }
  return os.str();
}

}  // namespace ompbound
