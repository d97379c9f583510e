#pragma once

#include <span>
#include <vector>

#include "bsptensor/algorithm.hpp"
#include "bsptensor/core.hpp"

namespace bsptensor {

// Precomputed n-th roots of unity: entries[t] = exp(-2*pi*i*t/n).
// Kernels index tables by (j*k mod n) instead of recomputing phases,
// keeping results reproducible bit-for-bit.
class TwiddleTable {
 public:
  explicit TwiddleTable(i64 n);
  i64 size() const { return static_cast<i64>(entries_.size()); }
  const Complex& operator[](i64 t) const {
    return entries_[static_cast<size_t>(t)];
  }

 private:
  std::vector<Complex> entries_;
};

// Half-step phases: entries[k] = exp(-i*pi*k/(2n)) for k in [n].
class HalfTwiddle {
 public:
  explicit HalfTwiddle(i64 n);
  i64 size() const { return static_cast<i64>(entries_.size()); }
  const Complex& operator[](i64 k) const {
    return entries_[static_cast<size_t>(k)];
  }

 private:
  std::vector<Complex> entries_;
};

// Serial DFT plan: mixed-radix Cooley-Tukey when n factors into {2,3,5},
// direct O(n^2) summation otherwise.
class DftPlan {
 public:
  explicit DftPlan(i64 n);
  i64 length() const { return n_; }
  bool mixed_radix() const { return smooth_; }
  // out is contiguous length n; in is strided.
  void transform(const Complex* in, i64 in_stride, Complex* out) const;

 private:
  void recurse(const Complex* in, i64 in_stride, Complex* out, i64 n,
               i64 tw_stride) const;
  void direct(const Complex* in, i64 in_stride, Complex* out, i64 n,
              i64 tw_stride) const;

  i64 n_;
  TwiddleTable table_;
  bool smooth_;
};

std::vector<Complex> local_dft(std::span<const Complex> x);

// Four-step FFT of length n over p processors, cyclic in and out.
// Structure [computation, communication, computation]. Requires p^2 | n.
LinearBspAlgorithm make_fft_rank1(i64 n, i64 p);

// Rank-d FFT assembled by the tensor combinator from rank-1 factors.
LinearBspAlgorithm make_fft_rankd(const Shape& shape,
                                  const ProcessorGrid& grid);

// Hand-written rank-d FFT: per-axis local DFTs, product twiddle, one
// vector-indexed put round, per-axis strided DFTs. Built without the
// combinator so the two construction paths can be cross-checked.
// Requires p_l^2 | n_l for every axis.
LinearBspAlgorithm make_fft_rankd_reference(const Shape& shape,
                                            const ProcessorGrid& grid);

// DCT-II of length n over p processors via symmetric extension to length
// 2n, a 2n-point FFT (inlined supersteps) and phase extraction. Structure
// [comp, comm, comp, comm, comp, comp]. Requires p^2 | 2n.
LinearBspAlgorithm make_dct2_rank1(i64 n, i64 p);

// The DCT's extension-reversal communication step: element k of the
// duplicated local array stays put for k < n/p and is sent to processor
// p-1-s, local index 3n/p-1-k, otherwise. Requires p | n.
CommunicationStep dct_comm_maps(i64 n, i64 p);

// Rank-d DCT-II as the tensor product of rank-1 instances.
LinearBspAlgorithm make_dct2_rankd(const Shape& shape,
                                   const ProcessorGrid& grid);

// No-op algorithm (empty superstep list) on a cyclic distribution.
LinearBspAlgorithm make_identity(const Shape& shape,
                                 const ProcessorGrid& grid);

}  // namespace bsptensor
