#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bv/arith_tables.hpp"
#include "bv/verifier.hpp"

namespace bv {

enum class OutputFormat { Json, Csv, Both };

struct RunConfig {
  std::uint64_t x_max = 0;  // 0 = derive from the grid
  GridSpec grid = GridSpec::defaults();
  std::optional<GridPoint> single_point;  // --x/--Q/--Q1 override
  std::optional<double> c3_override;
  std::uint64_t e0_prime_limit = 1'000'000;
  std::string out_dir;  // empty = $BVCHECK_OUT or "reports"
  OutputFormat format = OutputFormat::Both;
  int jobs = 1;
  std::uint64_t mem_budget_bytes = std::uint64_t{4} << 30;
  bool timings = false;

  std::uint64_t table_limit() const;  // x_max or grid maximum
  std::string resolved_out_dir() const;
  SieveOptions sieve_options() const;

  std::string to_json() const;
  static RunConfig from_json(const std::string& text);
  static RunConfig from_file(const std::string& path);
};

}  // namespace bv
