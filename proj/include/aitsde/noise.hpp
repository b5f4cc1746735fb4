#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace aitsde {

// Uniform mesh on [0, horizon] with a power-of-two number of steps.
struct GridSpec {
  double horizon = 1.0;
  std::uint64_t n_fine = 1;

  static GridSpec make(double horizon, std::uint64_t n_fine);
  // Grid whose step is `tau`; T / tau must be an integral power of two.
  static GridSpec from_step(double horizon, double tau);

  double tau_fine() const noexcept { return horizon / static_cast<double>(n_fine); }
};

// Brownian increments of one path on the finest grid. Fully determined by
// (seed, path_index, grid).
struct IncrementTable {
  GridSpec grid;
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
  std::vector<double> increments;
};

// Seed of the generator driving path `path_index`.
std::uint64_t path_stream_seed(std::uint64_t master_seed, std::uint64_t path_index) noexcept;

IncrementTable make_increments(std::uint64_t master_seed, std::uint64_t path_index,
                               const GridSpec& grid);

// Allocation-free variant; `out.size()` must equal grid.n_fine.
void fill_increments(std::uint64_t master_seed, std::uint64_t path_index, const GridSpec& grid,
                     std::span<double> out);

// Entry k is the left-to-right sum of fine entries k*factor .. (k+1)*factor-1.
std::vector<double> coarsen(std::span<const double> fine, std::size_t factor);
std::vector<double> coarsen(const IncrementTable& table, std::size_t factor);
void coarsen_into(std::span<const double> fine, std::size_t factor, std::span<double> out);

// Replay dump: 32-byte little-endian header ("AITW", u32 version, u64 n_fine,
// u64 seed, u64 path) followed by n_fine little-endian f64 values.
inline constexpr std::uint32_t kIncrementDumpVersion = 1;
void write_increments(const std::filesystem::path& file, const IncrementTable& table);
// The horizon is not part of the dump and must be supplied by the caller.
IncrementTable read_increments(const std::filesystem::path& file, double horizon);

}  // namespace aitsde
