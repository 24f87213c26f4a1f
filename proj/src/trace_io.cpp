#include "marketclear/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "marketclear/error.hpp"

namespace marketclear {

namespace {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void malformed(std::size_t line, const std::string& message) {
  throw Error(ErrorCode::kMalformedDocument, "trace line " + std::to_string(line) + ": " + message);
}

double parse_double(std::string_view text, std::size_t line) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
  // strtod accepts every %.17g rendering including inf/nan, which we reject.
  std::string owned(text);
  char* end = nullptr;
  const double x = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size()) malformed(line, "bad number '" + owned + "'");
  if (!std::isfinite(x)) malformed(line, "non-finite number '" + owned + "'");
  return x;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

void write_trace(std::ostream& out, const Trace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& row : trace.rows) {
    out << row.iter << ',' << format_double(row.ter) << ',' << format_double(row.grad_norm) << ','
        << format_double(row.min_excess) << ',' << format_double(row.complementarity) << ','
        << format_double(row.step) << '\n';
  }
  out << "# price = [";
  for (std::size_t i = 0; i < trace.price.size(); ++i) {
    if (i > 0) out << ", ";
    out << format_double(trace.price[i]);
  }
  out << "]\n";
}

Trace read_trace(std::istream& in) {
  Trace trace;
  std::string line;
  std::size_t number = 0;
  bool footer = false;
  if (!std::getline(in, line)) malformed(1, "empty trace");
  ++number;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) malformed(number, "expected header '" + std::string(kTraceHeader) + "'");
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (footer) malformed(number, "content after price footer");
    constexpr std::string_view kPrefix = "# price = [";
    if (line.starts_with('#')) {
      if (!line.starts_with(kPrefix) || !line.ends_with(']')) malformed(number, "bad price footer");
      const std::string_view body =
          std::string_view(line).substr(kPrefix.size(), line.size() - kPrefix.size() - 1);
      if (!body.empty()) {
        for (auto part : split(body, ',')) trace.price.push_back(parse_double(part, number));
      }
      footer = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 6) malformed(number, "expected 6 columns, got " + std::to_string(cells.size()));
    TraceRow row{};
    const auto iter_text = cells[0];
    const auto [ptr, ec] = std::from_chars(iter_text.data(), iter_text.data() + iter_text.size(), row.iter);
    if (ec != std::errc() || ptr != iter_text.data() + iter_text.size()) {
      malformed(number, "bad iteration index");
    }
    row.ter = parse_double(cells[1], number);
    row.grad_norm = parse_double(cells[2], number);
    row.min_excess = parse_double(cells[3], number);
    row.complementarity = parse_double(cells[4], number);
    row.step = parse_double(cells[5], number);
    trace.rows.push_back(row);
  }
  if (!footer) malformed(number, "missing price footer");
  return trace;
}

}  // namespace marketclear
