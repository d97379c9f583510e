// Wall-clock comparison of the sequential and OpenMP execution paths on the
// same schedule.  Both paths must produce bit-identical output; the benchmark
// aborts if they do not.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "bsptensor/core.hpp"
#include "bsptensor/engine.hpp"
#include "bsptensor/rng.hpp"
#include "bsptensor/transforms.hpp"

namespace {

using namespace bsptensor;

double time_run(const LinearBspAlgorithm& alg, const DistributedArray& input,
                ExecMode mode, int reps, std::vector<Complex>* out) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    RunResult res = run(alg, input, mode);
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    *out = res.output.gather();
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  i64 n = 1 << 18;
  i64 p = 8;
  int reps = 5;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--n") == 0 && i + 1 < argc) {
      n = std::atoll(argv[++i]);
    } else if (std::strcmp(argv[i], "--p") == 0 && i + 1 < argc) {
      p = std::atoll(argv[++i]);
    } else if (std::strcmp(argv[i], "--reps") == 0 && i + 1 < argc) {
      reps = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: bsp_bench [--n N] [--p P] [--reps R]\n");
      return 2;
    }
  }

  LinearBspAlgorithm alg = make_fft_rank1(n, p);

  Xorshift64 rng(42);
  std::vector<Complex> global(static_cast<size_t>(n));
  for (auto& v : global) v = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
  DistributedArray input = DistributedArray::scatter(alg.in_dist, global);

  std::vector<Complex> seq_out, par_out;
  double t_seq = time_run(alg, input, ExecMode::Sequential, reps, &seq_out);
  double t_par = time_run(alg, input, ExecMode::Parallel, reps, &par_out);

  if (std::memcmp(seq_out.data(), par_out.data(),
                  seq_out.size() * sizeof(Complex)) != 0) {
    std::fprintf(stderr, "FATAL: sequential and parallel outputs differ\n");
    return 1;
  }

  std::printf("fft n=%lld p=%lld reps=%d\n", static_cast<long long>(n),
              static_cast<long long>(p), reps);
  std::printf("  sequential: %9.3f ms\n", t_seq * 1e3);
  std::printf("  parallel:   %9.3f ms\n", t_par * 1e3);
  std::printf("  speedup:    %9.2fx\n", t_seq / t_par);
  std::printf("  outputs bit-identical: yes\n");
  return 0;
}
