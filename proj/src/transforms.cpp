#include "bsptensor/transforms.hpp"

#include <cmath>
#include <numbers>

#include "bsptensor/tensor.hpp"

namespace bsptensor {

TwiddleTable::TwiddleTable(i64 n) {
  if (n < 1) throw ArgumentError("twiddle table: length must be >= 1");
  entries_.resize(static_cast<size_t>(n));
  entries_[0] = Complex(1.0, 0.0);
  for (i64 t = 1; t < n; ++t) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(t) /
                         static_cast<double>(n);
    entries_[static_cast<size_t>(t)] = Complex(std::cos(angle),
                                               std::sin(angle));
  }
}

HalfTwiddle::HalfTwiddle(i64 n) {
  if (n < 1) throw ArgumentError("half twiddle: length must be >= 1");
  entries_.resize(static_cast<size_t>(n));
  entries_[0] = Complex(1.0, 0.0);
  for (i64 k = 1; k < n; ++k) {
    const double angle = -std::numbers::pi * static_cast<double>(k) /
                         (2.0 * static_cast<double>(n));
    entries_[static_cast<size_t>(k)] = Complex(std::cos(angle),
                                               std::sin(angle));
  }
}

namespace {

i64 smallest_factor_235(i64 n) {
  if (n % 2 == 0) return 2;
  if (n % 3 == 0) return 3;
  if (n % 5 == 0) return 5;
  return 0;
}

bool is_smooth_235(i64 n) {
  for (i64 f : {2, 3, 5}) {
    while (n % f == 0) n /= f;
  }
  return n == 1;
}

}  // namespace

DftPlan::DftPlan(i64 n) : n_(n), table_(n), smooth_(is_smooth_235(n)) {
  if (n < 1) throw ArgumentError("dft: length must be >= 1");
}

void DftPlan::transform(const Complex* in, i64 in_stride, Complex* out) const {
  if (smooth_) {
    recurse(in, in_stride, out, n_, 1);
  } else {
    direct(in, in_stride, out, n_, 1);
  }
}

// Decimation in time: split into r interleaved subsequences of length m,
// transform each, recombine with twiddles read from the shared top-level
// table (the length-n roots are every tw_stride-th entry).
void DftPlan::recurse(const Complex* in, i64 in_stride, Complex* out, i64 n,
                      i64 tw_stride) const {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const i64 r = smallest_factor_235(n);
  const i64 m = n / r;
  std::vector<Complex> sub(static_cast<size_t>(n));
  for (i64 q = 0; q < r; ++q) {
    recurse(in + q * in_stride, in_stride * r, sub.data() + q * m, m,
            tw_stride * r);
  }
  for (i64 t = 0; t < r; ++t) {
    for (i64 k = 0; k < m; ++k) {
      const i64 out_idx = k + t * m;
      Complex acc(0.0, 0.0);
      for (i64 q = 0; q < r; ++q) {
        acc += table_[((q * out_idx) % n) * tw_stride] *
               sub[static_cast<size_t>(q * m + k)];
      }
      out[out_idx] = acc;
    }
  }
}

void DftPlan::direct(const Complex* in, i64 in_stride, Complex* out, i64 n,
                     i64 tw_stride) const {
  for (i64 k = 0; k < n; ++k) {
    Complex acc(0.0, 0.0);
    for (i64 j = 0; j < n; ++j) {
      acc += in[j * in_stride] * table_[((j * k) % n) * tw_stride];
    }
    out[k] = acc;
  }
}

std::vector<Complex> local_dft(std::span<const Complex> x) {
  const i64 n = static_cast<i64>(x.size());
  if (n < 1) throw ArgumentError("local_dft: length must be >= 1");
  std::vector<Complex> out(static_cast<size_t>(n));
  DftPlan(n).transform(x.data(), 1, out.data());
  return out;
}

LinearBspAlgorithm make_fft_rank1(i64 n, i64 p) {
  if (n < 1 || p < 1) {
    throw ArgumentError("fft requires n >= 1 and p >= 1");
  }
  if (n % (p * p) != 0) {
    throw ArgumentError("fft requires p^2 | n, got n=" + std::to_string(n) +
                        ", p=" + std::to_string(p));
  }
  const Distribution dist =
      Distribution::cyclic(Shape::of(n), ProcessorGrid::of(p));
  const i64 m = n / p;

  LinearBspAlgorithm alg;
  alg.in_dist = dist;
  alg.out_dist = dist;
  alg.steps.emplace_back(make_computation(
      {Kernel::separable({DftAtom{m, 1}}),
       Kernel::separable({DiagonalAtom{DiagKind::FftTwiddle, n, p}})}));
  alg.steps.emplace_back(
      CommunicationStep{CommRule(FftTransposeRule{n, p}), Shape::of(m)});
  alg.steps.emplace_back(
      make_computation({Kernel::separable({DftAtom{p, n / (p * p)}})}));
  return alg;
}

LinearBspAlgorithm make_fft_rankd(const Shape& shape,
                                  const ProcessorGrid& grid) {
  if (shape.rank() != grid.rank()) {
    throw ArgumentError("fft shape and grid ranks differ");
  }
  std::vector<LinearBspAlgorithm> factors;
  for (i64 l = 0; l < shape.rank(); ++l) {
    factors.push_back(make_fft_rank1(shape.dim(l), grid.dim(l)));
  }
  return tensor(factors);
}

LinearBspAlgorithm make_fft_rankd_reference(const Shape& shape,
                                            const ProcessorGrid& grid) {
  const i64 d = shape.rank();
  if (d != grid.rank()) {
    throw ArgumentError("fft shape and grid ranks differ");
  }
  std::vector<i64> local(static_cast<size_t>(d));
  for (i64 l = 0; l < d; ++l) {
    const i64 n = shape.dim(l);
    const i64 p = grid.dim(l);
    if (n < 1 || p < 1 || n % (p * p) != 0) {
      throw ArgumentError("fft requires p_l^2 | n_l, got n_" +
                          std::to_string(l) + "=" + std::to_string(n) +
                          ", p_" + std::to_string(l) + "=" +
                          std::to_string(p));
    }
    local[static_cast<size_t>(l)] = n / p;
  }
  const Shape local_shape(local);
  const Distribution dist = Distribution::cyclic(shape, grid);

  std::vector<KernelAtom> dfts, twiddles, final_dfts;
  for (i64 l = 0; l < d; ++l) {
    const i64 n = shape.dim(l);
    const i64 p = grid.dim(l);
    dfts.push_back(DftAtom{n / p, 1});
    twiddles.push_back(DiagonalAtom{DiagKind::FftTwiddle, n, p});
    final_dfts.push_back(DftAtom{p, n / (p * p)});
  }

  // The redistribution round as an explicit put table: processor s sends
  // its elements with per-axis remainders k to processor k, packed as the
  // s-th contiguous block along each axis.
  TableRule table;
  table.grid = grid;
  table.local = local_shape;
  const i64 pc = grid.count();
  const i64 L = local_shape.total();
  table.dst_proc.resize(static_cast<size_t>(pc * L));
  table.dst_index.resize(static_cast<size_t>(pc * L));
  for (i64 sl = 0; sl < pc; ++sl) {
    const auto s = delinearize(sl, grid.dims());
    for (i64 kl = 0; kl < L; ++kl) {
      const auto k = delinearize(kl, local_shape.dims());
      std::vector<i64> dproc(static_cast<size_t>(d));
      std::vector<i64> didx(static_cast<size_t>(d));
      for (i64 l = 0; l < d; ++l) {
        const i64 p = grid.dim(l);
        const i64 block = shape.dim(l) / (p * p);
        dproc[static_cast<size_t>(l)] = k[static_cast<size_t>(l)] % p;
        didx[static_cast<size_t>(l)] =
            s[static_cast<size_t>(l)] * block + k[static_cast<size_t>(l)] / p;
      }
      const size_t cell = static_cast<size_t>(sl * L + kl);
      table.dst_proc[cell] = linear_index(dproc, grid.dims());
      table.dst_index[cell] = linear_index(didx, local_shape.dims());
    }
  }

  LinearBspAlgorithm alg;
  alg.in_dist = dist;
  alg.out_dist = dist;
  alg.steps.emplace_back(make_computation(
      {Kernel::separable(std::move(dfts)),
       Kernel::separable(std::move(twiddles))}));
  alg.steps.emplace_back(
      CommunicationStep{CommRule(std::move(table)), local_shape});
  alg.steps.emplace_back(
      make_computation({Kernel::separable(std::move(final_dfts))}));
  return alg;
}

CommunicationStep dct_comm_maps(i64 n, i64 p) {
  if (n < 1 || p < 1 || n % p != 0) {
    throw ArgumentError("dct reversal requires p | n, got n=" +
                        std::to_string(n) + ", p=" + std::to_string(p));
  }
  return CommunicationStep{CommRule(DctReversalRule{n, p}),
                           Shape::of(2 * n / p)};
}

LinearBspAlgorithm make_dct2_rank1(i64 n, i64 p) {
  if (n < 1 || p < 1) {
    throw ArgumentError("dct requires n >= 1 and p >= 1");
  }
  if ((2 * n) % (p * p) != 0) {
    throw ArgumentError("dct requires p^2 | 2n, got n=" + std::to_string(n) +
                        ", p=" + std::to_string(p));
  }
  const Distribution dist =
      Distribution::cyclic(Shape::of(n), ProcessorGrid::of(p));
  const i64 b = n / p;       // local block before extension
  const i64 e = 2 * n / p;   // local block of the extended signal

  LinearBspAlgorithm alg;
  alg.in_dist = dist;
  alg.out_dist = dist;
  // Extend: duplicate locally, then reverse the second copy globally.
  alg.steps.emplace_back(
      make_computation({Kernel::separable({DuplicateAtom{b, 2}})}));
  alg.steps.emplace_back(dct_comm_maps(n, p));
  // 2n-point FFT, supersteps inlined.
  alg.steps.emplace_back(make_computation(
      {Kernel::separable({DftAtom{e, 1}}),
       Kernel::separable({DiagonalAtom{DiagKind::FftTwiddle, 2 * n, p}})}));
  alg.steps.emplace_back(
      CommunicationStep{CommRule(FftTransposeRule{2 * n, p}), Shape::of(e)});
  alg.steps.emplace_back(
      make_computation({Kernel::separable({DftAtom{p, 2 * n / (p * p)}})}));
  // Extract: keep the first half of the spectrum, apply the half-sample
  // phase, indexed by the global position s + k*p.
  alg.steps.emplace_back(make_computation(
      {Kernel::separable({ProjectAtom{e, StridedView{0, 1, b}}}),
       Kernel::separable({DiagonalAtom{DiagKind::DctHalfShift, n, p}})}));
  return alg;
}

LinearBspAlgorithm make_dct2_rankd(const Shape& shape,
                                   const ProcessorGrid& grid) {
  if (shape.rank() != grid.rank()) {
    throw ArgumentError("dct shape and grid ranks differ");
  }
  std::vector<LinearBspAlgorithm> factors;
  for (i64 l = 0; l < shape.rank(); ++l) {
    factors.push_back(make_dct2_rank1(shape.dim(l), grid.dim(l)));
  }
  return tensor(factors);
}

LinearBspAlgorithm make_identity(const Shape& shape,
                                 const ProcessorGrid& grid) {
  return LinearBspAlgorithm::identity(Distribution::cyclic(shape, grid));
}

}  // namespace bsptensor
