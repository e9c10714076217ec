#pragma once

#include "empirical.hpp"
#include "error.hpp"

#include <charconv>
#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace tkcopula {

//! Shortest decimal representation that parses back to the same double.
inline std::string
format_real(double value)
{
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

inline double
parse_real(std::string_view text)
{
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
    text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' ||
                           text.back() == '\r'))
    text.remove_suffix(1);
  if (!text.empty() && text.front() == '+')
    text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
    std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw DomainError("csv: cannot parse number '" + std::string(text) + "'");
  return value;
}

inline std::vector<std::string_view>
split_fields(std::string_view line, char sep = ',')
{
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return fields;
}

//! Reads a numeric CSV table whose header must equal `columns`. Blank lines
//! are skipped; CR before LF is tolerated.
inline std::vector<std::vector<double>>
read_csv(std::istream& in, const std::vector<std::string>& columns)
{
  std::string line;
  if (!std::getline(in, line))
    throw DomainError("csv: missing header");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  const auto header = split_fields(line);
  bool header_ok = header.size() == columns.size();
  for (std::size_t i = 0; header_ok && i < columns.size(); ++i)
    header_ok = header[i] == columns[i];
  if (!header_ok)
    throw DomainError("csv: unexpected header '" + line + "'");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    const auto fields = split_fields(line);
    if (fields.size() != columns.size())
      throw DomainError("csv: wrong number of fields in '" + line + "'");
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields)
      row.push_back(parse_real(f));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void
write_sample_csv(std::ostream& out, std::span<const Pair> pairs)
{
  out << "x,y\n";
  for (const auto& p : pairs)
    out << format_real(p.x) << ',' << format_real(p.y) << '\n';
}

inline Sample
read_sample_csv(std::istream& in)
{
  const auto rows = read_csv(in, { "x", "y" });
  std::vector<Pair> pairs;
  pairs.reserve(rows.size());
  for (const auto& r : rows)
    pairs.push_back({ r[0], r[1] });
  return Sample(std::move(pairs));
}

} // namespace tkcopula
