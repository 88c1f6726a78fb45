#include "adaef/io.hpp"

#include <fstream>

namespace adaef {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  return f;
}

[[noreturn]] void malformed(const std::string& path, std::streamoff offset,
                            const std::string& what) {
  throw std::runtime_error(path + ": " + what + " at byte offset " +
                           std::to_string(offset));
}

}  // namespace

RowMatrixf load_fvecs(const std::string& path) {
  std::ifstream f = open_in(path);
  std::vector<float> values;
  std::int32_t dim = -1;
  std::int64_t n = 0;
  for (;;) {
    const std::streamoff offset = f.tellg();
    std::int32_t d = 0;
    if (!f.read(reinterpret_cast<char*>(&d), 4)) break;  // clean EOF
    if (d < 1) malformed(path, offset, "non-positive dimension");
    if (dim < 0) dim = d;
    if (d != dim) malformed(path, offset, "inconsistent dimension");
    const std::size_t old = values.size();
    values.resize(old + d);
    if (!f.read(reinterpret_cast<char*>(values.data() + old), 4LL * d)) {
      malformed(path, offset, "truncated record");
    }
    ++n;
  }
  if (n == 0) return RowMatrixf(0, 0);
  return Eigen::Map<const RowMatrixf>(values.data(), n, dim);
}

void save_fvecs(const std::string& path, const RowMatrixf& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  const std::int32_t d = static_cast<std::int32_t>(rows.cols());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    f.write(reinterpret_cast<const char*>(&d), 4);
    f.write(reinterpret_cast<const char*>(rows.row(i).data()), 4LL * d);
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<std::vector<std::int32_t>> load_ivecs(const std::string& path) {
  std::ifstream f = open_in(path);
  std::vector<std::vector<std::int32_t>> rows;
  for (;;) {
    const std::streamoff offset = f.tellg();
    std::int32_t d = 0;
    if (!f.read(reinterpret_cast<char*>(&d), 4)) break;
    if (d < 0) malformed(path, offset, "negative length");
    std::vector<std::int32_t> row(d);
    if (d > 0 && !f.read(reinterpret_cast<char*>(row.data()), 4LL * d)) {
      malformed(path, offset, "truncated record");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void save_ivecs(const std::string& path,
                const std::vector<std::vector<std::int32_t>>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  for (const auto& row : rows) {
    const std::int32_t d = static_cast<std::int32_t>(row.size());
    f.write(reinterpret_cast<const char*>(&d), 4);
    f.write(reinterpret_cast<const char*>(row.data()), 4LL * d);
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace adaef
