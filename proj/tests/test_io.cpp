#include "adaef/io.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <string>

using namespace adaef;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) {
    path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
           "/adaef_test_" + name;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("fvecs round trip is bit exact") {
  std::mt19937_64 rng(5);
  std::normal_distribution<float> gauss;
  RowMatrixf rows(100, 8);
  for (Eigen::Index i = 0; i < rows.size(); ++i) rows.data()[i] = gauss(rng);

  TempFile tmp("roundtrip.fvecs");
  save_fvecs(tmp.path, rows);
  const RowMatrixf loaded = load_fvecs(tmp.path);
  REQUIRE(loaded.rows() == rows.rows());
  REQUIRE(loaded.cols() == rows.cols());
  CHECK((loaded.array() == rows.array()).all());
}

TEST_CASE("empty fvecs file loads as empty dataset") {
  TempFile tmp("empty.fvecs");
  std::ofstream(tmp.path, std::ios::binary).close();
  const RowMatrixf loaded = load_fvecs(tmp.path);
  CHECK(loaded.rows() == 0);
}

TEST_CASE("mismatched dimension header reports byte offset") {
  TempFile tmp("bad.fvecs");
  {
    std::ofstream f(tmp.path, std::ios::binary);
    std::int32_t d = 2;
    float values[2] = {1.0f, 2.0f};
    f.write(reinterpret_cast<char*>(&d), 4);
    f.write(reinterpret_cast<char*>(values), 8);
    d = 3;  // second record disagrees, offset 12
    f.write(reinterpret_cast<char*>(&d), 4);
    f.write(reinterpret_cast<char*>(values), 8);
  }
  CHECK_THROWS_WITH_AS(load_fvecs(tmp.path),
                       doctest::Contains("byte offset 12"),
                       std::runtime_error);
}

TEST_CASE("truncated fvecs record is rejected") {
  TempFile tmp("trunc.fvecs");
  {
    std::ofstream f(tmp.path, std::ios::binary);
    std::int32_t d = 4;
    float value = 1.0f;
    f.write(reinterpret_cast<char*>(&d), 4);
    f.write(reinterpret_cast<char*>(&value), 4);
  }
  CHECK_THROWS_AS(load_fvecs(tmp.path), std::runtime_error);
}

TEST_CASE("ivecs round trip") {
  std::vector<std::vector<std::int32_t>> rows = {{1, 2, 3}, {}, {42}};
  TempFile tmp("roundtrip.ivecs");
  save_ivecs(tmp.path, rows);
  CHECK(load_ivecs(tmp.path) == rows);
}
