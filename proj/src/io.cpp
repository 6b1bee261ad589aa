#include "stoqease/io.hpp"

#include <cmath>
#include <limits>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace stoqease {

Matrix read_matrix_text(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::vector<double> values;
    std::string token;
    while (row >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) {
        throw InvalidArgument("matrix line " + std::to_string(line_no) + ": cannot parse '" + token + "'");
      }
      values.push_back(v);
    }
    if (values.empty()) continue;
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw InvalidArgument("matrix line " + std::to_string(line_no) + ": expected " +
                            std::to_string(rows.front().size()) + " columns, got " + std::to_string(values.size()));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw InvalidArgument("matrix input is empty");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

Matrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open matrix file '" + path.string() + "'");
  return read_matrix_text(in);
}

DenseOperator read_dense_operator(const std::filesystem::path& path, std::vector<int> local_dims) {
  Matrix m = read_matrix_file(path);
  if (local_dims.empty()) return DenseOperator::qubits(std::move(m));
  return DenseOperator(std::move(m), std::move(local_dims));
}

void write_matrix_text(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << format_double(m(i, j));
    out << '\n';
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw InvalidArgument("CsvTable: header must be non-empty");
}

void CsvTable::add_row(std::vector<Cell> row) {
  if (row.size() != header_.size()) {
    throw InvalidArgument("CsvTable: row has " + std::to_string(row.size()) + " cells, header has " +
                          std::to_string(header_.size()));
  }
  rows_.push_back(std::move(row));
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct CellPrinter {
  std::string operator()(std::int64_t v) const { return std::to_string(v); }
  std::string operator()(double v) const { return format_double(v); }
  std::string operator()(const std::string& s) const { return quote(s); }
};

}  // namespace

void CsvTable::write(std::ostream& out) const {
  for (std::size_t k = 0; k < header_.size(); ++k) out << (k ? "," : "") << quote(header_[k]);
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << std::visit(CellPrinter{}, row[k]);
    out << '\n';
  }
}

std::string CsvTable::str() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

std::optional<double>& PlotGrid::at(int ix, int iy) {
  return values.at(static_cast<std::size_t>(iy) * x.steps + ix);
}

const std::optional<double>& PlotGrid::at(int ix, int iy) const {
  return values.at(static_cast<std::size_t>(iy) * x.steps + ix);
}

int PlotGrid::gaps() const {
  int n = 0;
  for (const auto& v : values) n += !v.has_value();
  return n;
}

PlotGrid make_plot_grid(std::string observable, const GridAxis& x, const GridAxis& y) {
  if (x.steps < 1 || y.steps < 1) throw InvalidArgument("make_plot_grid: axes need at least one step");
  PlotGrid g{std::move(observable), x, y, {}};
  g.values.assign(static_cast<std::size_t>(x.steps) * y.steps, std::nullopt);
  return g;
}

void write_plotdata(std::ostream& out, const PlotGrid& g) {
  out << "# observable " << g.observable << '\n';
  out << "# x " << g.x.name << ' ' << format_double(g.x.min) << ' ' << format_double(g.x.max) << ' ' << g.x.steps << '\n';
  out << "# y " << g.y.name << ' ' << format_double(g.y.min) << ' ' << format_double(g.y.max) << ' ' << g.y.steps << '\n';
  out << g.y.name << '\\' << g.x.name;
  for (int ix = 0; ix < g.x.steps; ++ix) out << ' ' << format_double(g.x.value(ix));
  out << '\n';
  for (int iy = 0; iy < g.y.steps; ++iy) {
    out << format_double(g.y.value(iy));
    for (int ix = 0; ix < g.x.steps; ++ix) {
      const auto& v = g.at(ix, iy);
      out << ' ' << (v ? format_double(*v) : "NA");
    }
    out << '\n';
  }
}

namespace {

double parse_number(const std::string& token) {
  if (token == "inf") return std::numeric_limits<double>::infinity();
  if (token == "-inf") return -std::numeric_limits<double>::infinity();
  if (token == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size()) throw InvalidArgument("plotdata: cannot parse '" + token + "'");
  return v;
}

GridAxis read_axis_line(std::istream& in, const char* tag) {
  std::string line, hash, t;
  if (!std::getline(in, line)) throw InvalidArgument(std::string("plotdata: missing '# ") + tag + "' line");
  std::istringstream row(line);
  GridAxis axis;
  std::string lo, hi;
  if (!(row >> hash >> t >> axis.name >> lo >> hi >> axis.steps) || hash != "#" || t != tag || axis.steps < 1) {
    throw InvalidArgument(std::string("plotdata: malformed '# ") + tag + "' line");
  }
  axis.min = parse_number(lo);
  axis.max = parse_number(hi);
  return axis;
}

}  // namespace

PlotGrid read_plotdata(std::istream& in) {
  std::string line, hash, tag, observable;
  if (!std::getline(in, line)) throw InvalidArgument("plotdata: empty input");
  {
    std::istringstream row(line);
    if (!(row >> hash >> tag >> observable) || hash != "#" || tag != "observable") {
      throw InvalidArgument("plotdata: missing '# observable' line");
    }
  }
  const GridAxis x = read_axis_line(in, "x");
  const GridAxis y = read_axis_line(in, "y");
  PlotGrid g = make_plot_grid(observable, x, y);
  if (!std::getline(in, line)) throw InvalidArgument("plotdata: missing column header");
  for (int iy = 0; iy < y.steps; ++iy) {
    if (!std::getline(in, line)) throw InvalidArgument("plotdata: missing row " + std::to_string(iy));
    std::istringstream row(line);
    std::string token;
    row >> token;  // y coordinate
    for (int ix = 0; ix < x.steps; ++ix) {
      if (!(row >> token)) throw InvalidArgument("plotdata: short row " + std::to_string(iy));
      if (token != "NA") g.at(ix, iy) = parse_number(token);
    }
  }
  return g;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

std::uint64_t write_text_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
  return fnv1a64(contents);
}

}  // namespace stoqease
