#include "albama/tidy_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "albama/error.hpp"

namespace albama {

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

TidyCsvWriter::TidyCsvWriter(const std::string& path) : out_(path) {
  if (!out_) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  out_ << "date,method,value,defined\n";
}

void TidyCsvWriter::add(const TimeSeries& series, const std::string& method,
                        const FilterOutput& output, bool method_ok) {
  for (std::size_t t = 0; t < series.size(); ++t) {
    const bool defined = method_ok && output.defined[t];
    out_ << series.stamp(t).str() << ',' << method << ','
         << format_value(output.values[t]) << ',' << (defined ? 1 : 0) << '\n';
  }
}

std::vector<TidyRow> read_tidy_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("date,method,value,defined", 0) != 0)
    throw Error(ErrorKind::bad_value, "bad tidy header in " + path);
  std::vector<TidyRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 4)
      throw Error(ErrorKind::bad_value, "bad tidy row: " + line);
    TidyRow row;
    row.date = YearMonth::parse(fields[0]);
    row.method = fields[1];
    char* end = nullptr;
    row.value = std::strtod(fields[2].c_str(), &end);
    if (fields[2].empty() || end != fields[2].c_str() + fields[2].size())
      throw Error(ErrorKind::bad_value, "bad tidy value: " + line);
    row.defined = fields[3] == "1";
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace albama
