#pragma once

#include "stoqease/config.hpp"
#include "stoqease/dense_operator.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace stoqease {

/// Whitespace-separated rows; blank lines and '#' comments skipped.
Matrix read_matrix_text(std::istream& in);
Matrix read_matrix_file(const std::filesystem::path& path);
/// Empty local_dims means qubits.
DenseOperator read_dense_operator(const std::filesystem::path& path, std::vector<int> local_dims = {});
void write_matrix_text(std::ostream& out, const Matrix& m);

/// %.17g, with "inf", "-inf" and "nan" spelled out.
std::string format_double(double v);

using Cell = std::variant<std::int64_t, double, std::string>;

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
  void add_row(std::vector<Cell> row);

  void write(std::ostream& out) const;
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

/// Values on a two-axis grid, row index = y, column index = x. Missing
/// points are empty optionals and print as "NA".
struct PlotGrid {
  std::string observable;
  GridAxis x, y;
  std::vector<std::optional<double>> values;  ///< y-major, size x.steps * y.steps

  std::optional<double>& at(int ix, int iy);
  const std::optional<double>& at(int ix, int iy) const;
  int gaps() const;
};

PlotGrid make_plot_grid(std::string observable, const GridAxis& x, const GridAxis& y);
void write_plotdata(std::ostream& out, const PlotGrid& g);
PlotGrid read_plotdata(std::istream& in);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

/// Writes `contents` to dir/name and returns the FNV-1a checksum.
std::uint64_t write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace stoqease
