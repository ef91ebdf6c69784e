#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "ringbumps/errors.hpp"

namespace ringbumps {

// doubles are written with 17 significant digits so reruns are byte-identical
std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  template <typename... Ts>
  void row(const Ts&... vals) {
    if (sizeof...(vals) != cols_)
      throw IoError("csv row width does not match header");
    std::string line;
    append(line, vals...);
    out_ << line << '\n';
  }

 private:
  static void append_one(std::string& line, double v) { line += format_number(v); }
  static void append_one(std::string& line, const std::string& v) { line += v; }
  static void append_one(std::string& line, const char* v) { line += v; }
  template <typename T>
    requires std::is_integral_v<T>
  static void append_one(std::string& line, T v) { line += std::to_string(v); }

  template <typename T, typename... Rest>
  static void append(std::string& line, const T& v, const Rest&... rest) {
    append_one(line, v);
    if constexpr (sizeof...(rest) > 0) {
      line += ',';
      append(line, rest...);
    }
  }

  std::ofstream out_;
  std::size_t cols_;
};

// space-time heatmap, x: time, y: position on S, color: value
void svg_heatmap(const std::string& path, const std::vector<double>& times,
                 const Eigen::ArrayXd& positions,
                 const std::vector<Eigen::ArrayXd>& columns,
                 const std::string& title);

struct LineSeries {
  std::string name;
  std::vector<double> x, y;
};

void svg_lineplot(const std::string& path, const std::vector<LineSeries>& series,
                  const std::string& title);

std::uint64_t fnv1a64(const std::string& s);

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& kv);

}  // namespace ringbumps
