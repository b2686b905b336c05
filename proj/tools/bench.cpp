// Benchmarks the OpenMP kernels against their serial reference paths and
// checks that both produce bit-identical results.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include "bv/arith_tables.hpp"
#include "bv/parallel.hpp"
#include "bv/vaughan.hpp"
#include "bv/verifier.hpp"

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct Row {
  const char* kernel;
  double serial_ms;
  double parallel_ms;
  bool identical;
};

void print_row(const Row& r) {
  std::printf("%-28s %10.1f ms %10.1f ms   x%.2f   %s\n", r.kernel, r.serial_ms, r.parallel_ms,
              r.parallel_ms > 0 ? r.serial_ms / r.parallel_ms : 0.0,
              r.identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t x_max = 2'000'000;
  int jobs = 0;  // 0 = all hardware threads
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--x-max") == 0 && i + 1 < argc) x_max = std::stoull(argv[++i]);
    if (std::strcmp(argv[i], "--jobs") == 0 && i + 1 < argc) jobs = std::stoi(argv[++i]);
  }
  const int threads = bv::effective_threads(jobs);
  std::printf("x_max = %llu, parallel threads = %d\n\n",
              static_cast<unsigned long long>(x_max), threads);
  std::printf("%-28s %13s %13s %7s\n", "kernel", "serial", "parallel", "speedup");

  bv::SieveOptions serial_opts;
  serial_opts.threads = 1;
  bv::SieveOptions parallel_opts;
  parallel_opts.threads = threads;

  // segmented Lambda sieve
  double t0 = now_ms();
  const bv::LambdaTable table_serial = bv::build_lambda_table(x_max, serial_opts);
  double t1 = now_ms();
  const bv::LambdaTable table_parallel = bv::build_lambda_table(x_max, parallel_opts);
  double t2 = now_ms();
  bool same = true;
  for (std::uint64_t n = 0; n <= x_max; n += 97)
    if (table_serial.psi_cumulative(n) != table_parallel.psi_cumulative(n)) same = false;
  print_row({"lambda sieve", t1 - t0, t2 - t1, same});

  // b_k divisor sieve
  const std::uint64_t Y = std::max<std::uint64_t>(x_max, 1'000'000);
  t0 = now_ms();
  const bv::BkSeries bk_serial = bv::bk_second_moment(Y, 100.0, serial_opts);
  t1 = now_ms();
  const bv::BkSeries bk_parallel = bv::bk_second_moment(Y, 100.0, parallel_opts);
  t2 = now_ms();
  print_row({"b_k second moment", t1 - t0, t2 - t1,
             bk_serial.second_moment == bk_parallel.second_moment &&
                 bk_serial.values == bk_parallel.values});

  // progression-deviation sweep (the Theorem-1 left-hand side)
  const double x = std::min<double>(1e5, static_cast<double>(x_max));
  t0 = now_ms();
  const double lhs_serial = bv::bv_lhs(table_serial, x, std::sqrt(x), 1.0, 1);
  t1 = now_ms();
  const double lhs_parallel = bv::bv_lhs(table_serial, x, std::sqrt(x), 1.0, threads);
  t2 = now_ms();
  print_row({"deviation sweep", t1 - t0, t2 - t1, lhs_serial == lhs_parallel});

  // script-S character scan
  const double sx = 1e4;
  const bv::MoebiusTable mobius(1024);
  const bv::VaughanParams params = bv::choose_params(sx, 100.0);
  t0 = now_ms();
  const double s4_serial = bv::script_S(4, sx, 100.0, params, table_serial, mobius, 1);
  t1 = now_ms();
  const double s4_parallel = bv::script_S(4, sx, 100.0, params, table_serial, mobius, threads);
  t2 = now_ms();
  print_row({"script-S character scan", t1 - t0, t2 - t1, s4_serial == s4_parallel});

  return 0;
}
