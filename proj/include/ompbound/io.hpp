#pragma once

#include <iosfwd>
#include <string>

#include "ompbound/numkernel.hpp"

namespace ompbound {

/// Matrix CSV: one row per line, comma-separated decimal literals, no header.
Matrix load_matrix_csv(const std::string& path);
Matrix parse_matrix_csv(std::istream& in, const std::string& name);
void write_matrix_csv(std::ostream& out, const Matrix& a);

/// Vector file: one decimal literal per line.
Vector load_vector(const std::string& path);
Vector parse_vector(std::istream& in, const std::string& name);
void write_vector(std::ostream& out, const Vector& v);

/// Text-mode formatting: 12 significant digits.
std::string format_sig12(double v);

/// CSV-mode formatting: shortest representation that round-trips exactly.
std::string format_roundtrip(double v);

std::string format_index_set(const IndexSet& s);  // space-separated

}  // namespace ompbound
