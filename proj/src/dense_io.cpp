#include "sylkit/dense_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace sylkit::la {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IoError, "cannot open for reading: " + path);
  return is;
}

bool is_blank(const std::string& s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_matrix_market_array(const DenseMat& m, std::ostream& os) {
  os << "%%MatrixMarket matrix array real general\n";
  os << m.rows() << ' ' << m.cols() << '\n';
  for (double v : m.storage()) os << format_double(v) << '\n';
}

void write_matrix_market_array(const DenseMat& m, const std::string& path) {
  auto os = open_out(path);
  write_matrix_market_array(m, os);
}

DenseMat read_matrix_market_array(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(is, line)) throw ParseError("empty input", 1);
  ++lineno;
  {
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || object != "matrix" || format != "array")
      throw ParseError("expected '%%MatrixMarket matrix array' header", lineno);
    if (field != "real" && field != "double" && field != "integer")
      throw ParseError("unsupported field '" + field + "'", lineno);
    if (symmetry != "general")
      throw ParseError("unsupported symmetry '" + symmetry + "'", lineno);
  }
  std::size_t rows = 0, cols = 0;
  bool have_size = false;
  DenseMat m;
  std::size_t idx = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%' || is_blank(line)) continue;
    std::istringstream ls(line);
    if (!have_size) {
      if (!(ls >> rows >> cols)) throw ParseError("bad size line", lineno);
      m = DenseMat(rows, cols);
      have_size = true;
      continue;
    }
    double v;
    if (!(ls >> v)) throw ParseError("bad value", lineno);
    if (idx >= m.size()) throw ParseError("too many entries", lineno);
    m.data()[idx++] = v;
  }
  if (!have_size) throw ParseError("missing size line", lineno);
  if (idx != m.size())
    throw ParseError("expected " + std::to_string(m.size()) + " entries, found " +
                         std::to_string(idx),
                     lineno);
  return m;
}

DenseMat read_matrix_market_array(const std::string& path) {
  auto is = open_in(path);
  return read_matrix_market_array(is);
}

void write_csv(const DenseMat& m, std::ostream& os) {
  os << m.rows() << ',' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

void write_csv(const DenseMat& m, const std::string& path) {
  auto os = open_out(path);
  write_csv(m, os);
}

DenseMat read_csv(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  auto to_num = [&](const std::string& s) {
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw ParseError("not a number: '" + s + "'", lineno);
    }
    if (!is_blank(s.substr(pos))) throw ParseError("trailing characters in '" + s + "'", lineno);
    return v;
  };
  if (!std::getline(is, line)) throw ParseError("empty input", 1);
  ++lineno;
  auto head = split(line);
  if (head.size() != 2) throw ParseError("header must be 'rows,cols'", lineno);
  const double r = to_num(head[0]), c = to_num(head[1]);
  if (r < 0 || c < 0) throw ParseError("negative dimension", lineno);
  DenseMat m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  std::size_t i = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    if (i >= m.rows()) throw ParseError("too many rows", lineno);
    auto cells = split(line);
    if (cells.size() != m.cols())
      throw ParseError("expected " + std::to_string(m.cols()) + " columns", lineno);
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = to_num(cells[j]);
    ++i;
  }
  if (i != m.rows()) throw DimensionMismatch("csv: expected " + std::to_string(m.rows()) +
                                             " rows, found " + std::to_string(i));
  return m;
}

DenseMat read_csv(const std::string& path) {
  auto is = open_in(path);
  return read_csv(is);
}

}  // namespace sylkit::la
