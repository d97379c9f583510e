#include "bsptensor/oracles.hpp"

#include <cmath>
#include <numbers>

namespace bsptensor::oracle {

namespace {

// exp(-2*pi*i*t/n) with the integer phase reduced mod n first, so large
// j*k products do not lose precision in the trig argument.
Complex unit_root(i64 t, i64 n) {
  const double angle =
      -2.0 * std::numbers::pi * static_cast<double>(t % n) /
      static_cast<double>(n);
  return Complex(std::cos(angle), std::sin(angle));
}

// cos(g*pi/(2n)) with g reduced mod 4n (the integer period).
double half_cos(i64 g, i64 n) {
  const double angle = std::numbers::pi * static_cast<double>(g % (4 * n)) /
                       (2.0 * static_cast<double>(n));
  return std::cos(angle);
}

}  // namespace

std::vector<Complex> dft(std::span<const Complex> x) {
  const i64 n = static_cast<i64>(x.size());
  if (n < 1) throw ArgumentError("dft oracle: length must be >= 1");
  std::vector<Complex> y(static_cast<size_t>(n));
  for (i64 k = 0; k < n; ++k) {
    Complex acc(0.0, 0.0);
    for (i64 j = 0; j < n; ++j) {
      acc += x[static_cast<size_t>(j)] * unit_root(j * k, n);
    }
    y[static_cast<size_t>(k)] = acc;
  }
  return y;
}

std::vector<Complex> dft_rankd(std::span<const Complex> x,
                               const Shape& shape) {
  const i64 total = shape.total();
  if (static_cast<i64>(x.size()) != total) {
    throw ArgumentError("dft oracle: array size does not match shape " +
                        shape.str());
  }
  std::vector<Complex> y(static_cast<size_t>(total));
  for (i64 kl = 0; kl < total; ++kl) {
    const auto k = delinearize(kl, shape.dims());
    Complex acc(0.0, 0.0);
    for (i64 jl = 0; jl < total; ++jl) {
      const auto j = delinearize(jl, shape.dims());
      Complex term = x[static_cast<size_t>(jl)];
      for (i64 l = 0; l < shape.rank(); ++l) {
        term *= unit_root(j[static_cast<size_t>(l)] * k[static_cast<size_t>(l)],
                          shape.dim(l));
      }
      acc += term;
    }
    y[static_cast<size_t>(kl)] = acc;
  }
  return y;
}

std::vector<Complex> dct2(std::span<const Complex> x) {
  const i64 n = static_cast<i64>(x.size());
  if (n < 1) throw ArgumentError("dct2 oracle: length must be >= 1");
  std::vector<Complex> y(static_cast<size_t>(n));
  for (i64 k = 0; k < n; ++k) {
    Complex acc(0.0, 0.0);
    for (i64 j = 0; j < n; ++j) {
      acc += x[static_cast<size_t>(j)] * half_cos((2 * j + 1) * k, n);
    }
    y[static_cast<size_t>(k)] = acc;
  }
  return y;
}

std::vector<Complex> dct2_rankd(std::span<const Complex> x,
                                const Shape& shape) {
  const i64 total = shape.total();
  if (static_cast<i64>(x.size()) != total) {
    throw ArgumentError("dct2 oracle: array size does not match shape " +
                        shape.str());
  }
  std::vector<Complex> y(static_cast<size_t>(total));
  for (i64 kl = 0; kl < total; ++kl) {
    const auto k = delinearize(kl, shape.dims());
    Complex acc(0.0, 0.0);
    for (i64 jl = 0; jl < total; ++jl) {
      const auto j = delinearize(jl, shape.dims());
      double factor = 1.0;
      for (i64 l = 0; l < shape.rank(); ++l) {
        factor *= half_cos((2 * j[static_cast<size_t>(l)] + 1) *
                               k[static_cast<size_t>(l)],
                           shape.dim(l));
      }
      acc += x[static_cast<size_t>(jl)] * factor;
    }
    y[static_cast<size_t>(kl)] = acc;
  }
  return y;
}

std::vector<Complex> kron_apply(const std::vector<Matrix>& matrices,
                                std::span<const Complex> x,
                                const Shape& shape) {
  if (static_cast<i64>(matrices.size()) != shape.rank()) {
    throw ArgumentError("kron_apply: one matrix per axis required");
  }
  std::vector<i64> dims = shape.dims();
  if (static_cast<i64>(x.size()) != shape.total()) {
    throw ArgumentError("kron_apply: array size does not match shape " +
                        shape.str());
  }
  std::vector<Complex> cur(x.begin(), x.end());
  for (size_t ax = 0; ax < matrices.size(); ++ax) {
    const Matrix& m = matrices[ax];
    if (m.cols != dims[ax]) {
      throw ArgumentError("kron_apply: matrix " + std::to_string(ax) +
                          " does not match axis extent");
    }
    std::vector<i64> out_dims = dims;
    out_dims[ax] = m.rows;
    i64 out_total = 1;
    for (i64 d : out_dims) out_total *= d;
    std::vector<Complex> next(static_cast<size_t>(out_total),
                              Complex(0.0, 0.0));
    // Strides of the axis being transformed, before and after.
    i64 inner = 1;
    for (size_t l = ax + 1; l < dims.size(); ++l) inner *= dims[l];
    i64 outer = 1;
    for (size_t l = 0; l < ax; ++l) outer *= dims[l];
    const i64 in_ax = dims[ax];
    for (i64 o = 0; o < outer; ++o) {
      for (i64 i = 0; i < inner; ++i) {
        for (i64 r = 0; r < m.rows; ++r) {
          Complex acc(0.0, 0.0);
          for (i64 c = 0; c < in_ax; ++c) {
            acc += m.at(r, c) *
                   cur[static_cast<size_t>((o * in_ax + c) * inner + i)];
          }
          next[static_cast<size_t>((o * m.rows + r) * inner + i)] = acc;
        }
      }
    }
    cur = std::move(next);
    dims = std::move(out_dims);
  }
  return cur;
}

}  // namespace bsptensor::oracle
