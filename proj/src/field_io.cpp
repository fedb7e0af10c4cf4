#include "hoslab/field_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>

namespace hoslab {

static_assert(std::endian::native == std::endian::little,
              "field container is little-endian; add byte swaps for this platform");

namespace {

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("field read: truncated file");
  return v;
}

}  // namespace

void write_field(const std::filesystem::path& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("field write: cannot open " + path.string());
  const GridSpec& g = f.grid();
  put<std::int64_t>(os, g.d);
  put<std::int64_t>(os, g.k);
  put<double>(os, g.L);
  put<std::int64_t>(os, g.n);
  const ArrayXcd& u = f.physical();
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    put<double>(os, u[i].real());
    put<double>(os, u[i].imag());
  }
  if (!os) throw std::runtime_error("field write: short write to " + path.string());
}

Field read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("field read: cannot open " + path.string());
  const auto d = get<std::int64_t>(is);
  const auto k = get<std::int64_t>(is);
  const auto L = get<double>(is);
  const auto n = get<std::int64_t>(is);
  GridSpec g(int(d), int(k), L, int(n));
  ArrayXcd u(g.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    u[i] = {re, im};
  }
  return Field::from_physical(g, std::move(u));
}

nlohmann::json field_to_json(const Field& f) {
  const GridSpec& g = f.grid();
  if (g.size() > 4096) throw std::invalid_argument("field_to_json: grid too large for JSON form");
  nlohmann::json j;
  j["grid"] = {{"d", g.d}, {"k", g.k}, {"L", g.L}, {"n", g.n}};
  std::vector<double> re(g.size()), im(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    re[i] = f.physical()[i].real();
    im[i] = f.physical()[i].imag();
  }
  j["re"] = re;
  j["im"] = im;
  return j;
}

Field field_from_json(const nlohmann::json& j) {
  GridSpec g(j.at("grid").at("d").get<int>(), j.at("grid").at("k").get<int>(),
             j.at("grid").at("L").get<double>(), j.at("grid").at("n").get<int>());
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (std::int64_t(re.size()) != g.size() || im.size() != re.size())
    throw std::invalid_argument("field_from_json: value count mismatch");
  ArrayXcd u(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) u[i] = {re[i], im[i]};
  return Field::from_physical(g, std::move(u));
}

std::string CsvWriter::format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += header[i];
  }
  buf_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw std::invalid_argument("csv: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += format_double(values[i]);
  }
  buf_ += '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::invalid_argument("csv: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += cells[i];
  }
  buf_ += '\n';
}

void CsvWriter::comment(const std::string& text) {
  buf_.insert(0, "# " + text + "\n");
}

void CsvWriter::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);  // binary: keep LF on every platform
  if (!os) throw std::runtime_error("csv: cannot open " + path.string());
  os << buf_;
}

}  // namespace hoslab
