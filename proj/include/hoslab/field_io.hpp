#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hoslab/field.hpp"

#include <json.hpp>

namespace hoslab {

// Flat binary container. Header, little-endian: int64 d, int64 k, double L,
// int64 n. Payload: interleaved re/im doubles of the physical samples in
// row-major order.
void write_field(const std::filesystem::path& path, const Field& f);
Field read_field(const std::filesystem::path& path);

// JSON form for small grids (n^d <= 4096): {"grid": {...}, "re": [...], "im": [...]}.
nlohmann::json field_to_json(const Field& f);
Field field_from_json(const nlohmann::json& j);

// CSV helper: '.' decimal separator, LF line endings, header row, shortest
// round-trip double formatting so identical runs produce identical bytes.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);
  void comment(const std::string& text);  // '#' line before the header
  const std::string& str() const { return buf_; }
  void save(const std::filesystem::path& path) const;

  static std::string format_double(double v);

 private:
  std::string buf_;
  std::size_t width_;
};

}  // namespace hoslab
