#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <vector>

#include "aitsde/error.hpp"
#include "aitsde/noise.hpp"
#include "doctest.h"

using namespace aitsde;

TEST_CASE("grid spec") {
  const GridSpec g = GridSpec::make(1.0, 1024);
  CHECK(g.tau_fine() == 0x1p-10);
  CHECK(GridSpec::from_step(1.0, 0x1p-15).n_fine == 32768);
  CHECK_THROWS_AS(GridSpec::make(1.0, 1000), Error);
  CHECK_THROWS_AS(GridSpec::make(0.0, 8), Error);
  CHECK_THROWS_AS(GridSpec::from_step(1.0, 0.3), Error);
}

TEST_CASE("determinism and independence of streams") {
  const GridSpec g = GridSpec::make(1.0, 4096);
  const auto a = make_increments(99, 5, g);
  const auto b = make_increments(99, 5, g);
  CHECK(a.increments == b.increments);
  CHECK(a.increments.size() == 4096);
  CHECK(make_increments(99, 6, g).increments != a.increments);
  CHECK(make_increments(100, 5, g).increments != a.increments);
  std::vector<double> buf(4096);
  fill_increments(99, 5, g, buf);
  CHECK(buf == a.increments);
}

TEST_CASE("moments of 10^6 increments") {
  const GridSpec g = GridSpec::make(1024.0 * 1024.0 / 1024.0, 1u << 20);  // horizon 1024: tau_fine = 2^-10
  const auto t = make_increments(2024, 0, g);
  REQUIRE(g.tau_fine() == 0x1p-10);
  const double n = static_cast<double>(t.increments.size());
  double mean = 0.0;
  for (double v : t.increments) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : t.increments) var += (v - mean) * (v - mean);
  var /= n - 1.0;
  CHECK(std::abs(mean) <= 4.0 * std::sqrt(0x1p-10 / 1e6));
  CHECK(std::abs(var / 0x1p-10 - 1.0) <= 0.01);
}

TEST_CASE("coarsening") {
  const GridSpec g = GridSpec::make(1.0, 1024);
  const auto t = make_increments(1, 3, g);
  CHECK(coarsen(t, 1) == t.increments);
  const auto c4 = coarsen(t, 4);
  REQUIRE(c4.size() == 256);
  for (std::size_t k = 0; k < c4.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < 4; ++j) s += t.increments[4 * k + j];
    CHECK(c4[k] == s);
  }
  const auto c2 = coarsen(t, 2);
  const auto c22 = coarsen(c2, 2);
  for (std::size_t k = 0; k < c4.size(); ++k) CHECK(std::abs(c22[k] - c4[k]) <= 1e-15);

  // Whole-path sum, same left-to-right order.
  const auto whole = coarsen(t, 1024);
  double s = 0.0;
  for (double v : t.increments) s += v;
  CHECK(whole[0] == s);

  CHECK_THROWS_AS(coarsen(t, 3), Error);
  CHECK_THROWS_AS(coarsen(t, 2048), Error);
  try {
    coarsen(t, 3);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::FactorNotDivisor);
  }
  // coarse variance scales with the factor
  const GridSpec big = GridSpec::make(1.0, 1u << 18);
  const auto bt = make_increments(4, 0, big);
  const auto bc = coarsen(bt, 8);
  double v = 0.0;
  for (double x : bc) v += x * x;
  v /= static_cast<double>(bc.size());
  CHECK(std::abs(v / (8 * big.tau_fine()) - 1.0) < 0.03);
}

TEST_CASE("paths 0 and 1 are uncorrelated") {
  const GridSpec g = GridSpec::make(1.0, 1u << 17);
  const auto a = make_increments(42, 0, g).increments;
  const auto b = make_increments(42, 1, g).increments;
  const std::size_t n = 100000;
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sa += a[i];
    sb += b[i];
    saa += a[i] * a[i];
    sbb += b[i] * b[i];
    sab += a[i] * b[i];
  }
  const double cov = sab / n - sa / n * sb / n;
  const double corr = cov / std::sqrt((saa / n - sa / n * sa / n) * (sbb / n - sb / n * sb / n));
  CHECK(std::abs(corr) <= 0.01);
}

TEST_CASE("dump round trip") {
  const GridSpec g = GridSpec::make(2.0, 256);
  const auto t = make_increments(0xdeadbeef, 17, g);
  const auto file = std::filesystem::temp_directory_path() / "aitsde_noise_dump.bin";
  write_increments(file, t);
  CHECK(std::filesystem::file_size(file) == 32 + 8 * 256);
  const auto r = read_increments(file, 2.0);
  CHECK(r.increments == t.increments);
  CHECK(r.seed == t.seed);
  CHECK(r.path_index == 17);
  CHECK(r.grid.n_fine == 256);
  std::FILE* f = std::fopen(file.string().c_str(), "rb");
  char magic[4];
  REQUIRE(std::fread(magic, 1, 4, f) == 4);
  std::fclose(f);
  CHECK(std::string(magic, 4) == "AITW");
  std::filesystem::remove(file);
  CHECK_THROWS_AS(read_increments(file, 2.0), Error);
}
