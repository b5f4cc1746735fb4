#include "aitsde/noise.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "aitsde/error.hpp"
#include "aitsde/special.hpp"

namespace aitsde {

namespace {

bool is_power_of_two(std::uint64_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

void put_u32(std::ostream& os, std::uint32_t v) {
  std::array<char, 4> buf{};
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  os.write(buf.data(), buf.size());
}

void put_u64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> buf{};
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  os.write(buf.data(), buf.size());
}

std::uint64_t get_le(std::istream& is, int bytes) {
  std::array<unsigned char, 8> buf{};
  is.read(reinterpret_cast<char*>(buf.data()), bytes);
  if (!is) throw Error(Errc::IoError, "truncated increment dump");
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

GridSpec GridSpec::make(double horizon, std::uint64_t n_fine) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw Error(Errc::InvalidGrid, "horizon must be positive");
  }
  if (!is_power_of_two(n_fine)) {
    throw Error(Errc::InvalidGrid, "n_fine must be a power of two, got " + std::to_string(n_fine));
  }
  return GridSpec{horizon, n_fine};
}

GridSpec GridSpec::from_step(double horizon, double tau) {
  if (!(tau > 0.0) || !(horizon > 0.0)) throw Error(Errc::InvalidGrid, "step and horizon must be positive");
  const double ratio = horizon / tau;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-9 * n) {
    throw Error(Errc::InvalidGrid, "horizon / tau is not an integer");
  }
  return make(horizon, static_cast<std::uint64_t>(n));
}

std::uint64_t path_stream_seed(std::uint64_t master_seed, std::uint64_t path_index) noexcept {
  return mix64(master_seed ^ mix64(path_index));
}

void fill_increments(std::uint64_t master_seed, std::uint64_t path_index, const GridSpec& grid,
                     std::span<double> out) {
  if (out.size() != grid.n_fine) throw Error(Errc::InvalidGrid, "output span does not match grid");
  std::mt19937_64 gen(path_stream_seed(master_seed, path_index));
  const double scale = std::sqrt(grid.tau_fine());
  constexpr double two_m53 = 0x1.0p-53;
  for (double& dw : out) {
    // 53 random bits mapped to the open interval (0, 1).
    const double u = (static_cast<double>(gen() >> 11) + 0.5) * two_m53;
    dw = scale * normal_quantile(u);
  }
}

IncrementTable make_increments(std::uint64_t master_seed, std::uint64_t path_index,
                               const GridSpec& grid) {
  IncrementTable t{grid, master_seed, path_index, std::vector<double>(grid.n_fine)};
  fill_increments(master_seed, path_index, grid, t.increments);
  return t;
}

void coarsen_into(std::span<const double> fine, std::size_t factor, std::span<double> out) {
  if (factor == 0 || fine.size() % factor != 0) {
    throw Error(Errc::FactorNotDivisor, "factor " + std::to_string(factor) +
                                            " does not divide " + std::to_string(fine.size()));
  }
  if (out.size() != fine.size() / factor) {
    throw Error(Errc::FactorNotDivisor, "output span has the wrong length");
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    double s = 0.0;
    const std::size_t base = k * factor;
    for (std::size_t j = 0; j < factor; ++j) s += fine[base + j];
    out[k] = s;
  }
}

std::vector<double> coarsen(std::span<const double> fine, std::size_t factor) {
  if (factor == 0 || fine.size() % factor != 0) {
    throw Error(Errc::FactorNotDivisor, "factor " + std::to_string(factor) +
                                            " does not divide " + std::to_string(fine.size()));
  }
  std::vector<double> out(fine.size() / factor);
  coarsen_into(fine, factor, out);
  return out;
}

std::vector<double> coarsen(const IncrementTable& table, std::size_t factor) {
  return coarsen(std::span<const double>(table.increments), factor);
}

void write_increments(const std::filesystem::path& file, const IncrementTable& table) {
  std::ofstream os(file, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(Errc::IoError, "cannot open " + file.string());
  os.write("AITW", 4);
  put_u32(os, kIncrementDumpVersion);
  put_u64(os, table.grid.n_fine);
  put_u64(os, table.seed);
  put_u64(os, table.path_index);
  for (double v : table.increments) put_u64(os, std::bit_cast<std::uint64_t>(v));
  if (!os) throw Error(Errc::IoError, "write failed for " + file.string());
}

IncrementTable read_increments(const std::filesystem::path& file, double horizon) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw Error(Errc::IoError, "cannot open " + file.string());
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  if (!is || std::string(magic.data(), 4) != "AITW") {
    throw Error(Errc::IoError, "bad magic in " + file.string());
  }
  const auto version = static_cast<std::uint32_t>(get_le(is, 4));
  if (version != kIncrementDumpVersion) {
    throw Error(Errc::IoError, "unsupported dump version " + std::to_string(version));
  }
  const std::uint64_t n = get_le(is, 8);
  IncrementTable t;
  t.grid = GridSpec::make(horizon, n);
  t.seed = get_le(is, 8);
  t.path_index = get_le(is, 8);
  t.increments.resize(n);
  for (double& v : t.increments) v = std::bit_cast<double>(get_le(is, 8));
  return t;
}

}  // namespace aitsde
