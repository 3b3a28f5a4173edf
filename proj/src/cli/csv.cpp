#include <charconv>
#include <fstream>
#include <iostream>

#include "msm/cli.hpp"

namespace msm::cli {

void Table::add(std::string name, std::vector<double> col) {
  if (!columns.empty() && col.size() != rows())
    throw std::logic_error("Table: column '" + name + "' has the wrong length");
  header.push_back(std::move(name));
  columns.push_back(std::move(col));
}

std::string format_number(double v) {
  char buf[64];
  // to_chars ignores the locale, so the decimal point is always '.'
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::string short_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t j = 0; j < t.header.size(); ++j) os << (j ? "," : "") << t.header[j];
  os << '\n';
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << format_number(t.columns[j][i]);
    os << '\n';
  }
}

void emit(const Table& t, const std::string& out) {
  if (out.empty() || out == "-") {
    write_csv(std::cout, t);
    std::cout.flush();
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw ParseError("cannot open output file '" + out + "'");
  write_csv(f, t);
  if (!f) throw std::runtime_error("write to '" + out + "' failed");
}

}  // namespace msm::cli
