#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bsptensor/errors.hpp"

namespace bsptensor {

using Complex = std::complex<double>;
using i64 = std::int64_t;

// Engine execution mode. Parallel runs one OpenMP worker per logical
// processor; Sequential is the serial reference. Both must produce
// bit-identical results.
enum class ExecMode { Sequential, Parallel };

i64 linear_index(std::span<const i64> coords, std::span<const i64> dims);
std::vector<i64> delinearize(i64 index, std::span<const i64> dims);
i64 checked_total(std::span<const i64> dims);
std::string dims_str(std::span<const i64> dims);

// Extents of a rank-d array, row-major (last axis fastest).
class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<i64> dims);
  static Shape of(i64 n) { return Shape({n}); }

  i64 rank() const { return static_cast<i64>(dims_.size()); }
  i64 dim(i64 l) const { return dims_[static_cast<size_t>(l)]; }
  i64 total() const;
  const std::vector<i64>& dims() const { return dims_; }
  std::vector<i64> strides() const;
  std::string str() const { return dims_str(dims_); }
  bool operator==(const Shape&) const = default;

 private:
  std::vector<i64> dims_;
};

// A point in a rank-d index set.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<i64> coords) : coords_(std::move(coords)) {}

  i64 rank() const { return static_cast<i64>(coords_.size()); }
  i64 operator[](i64 l) const { return coords_[static_cast<size_t>(l)]; }
  i64& operator[](i64 l) { return coords_[static_cast<size_t>(l)]; }
  const std::vector<i64>& coords() const { return coords_; }
  std::string str() const { return dims_str(coords_); }
  bool operator==(const MultiIndex&) const = default;

 private:
  std::vector<i64> coords_;
};

// Extents of a rank-d processor grid.
class ProcessorGrid {
 public:
  ProcessorGrid() = default;
  explicit ProcessorGrid(std::vector<i64> dims);
  static ProcessorGrid of(i64 p) { return ProcessorGrid({p}); }

  i64 rank() const { return static_cast<i64>(dims_.size()); }
  i64 dim(i64 l) const { return dims_[static_cast<size_t>(l)]; }
  i64 count() const;
  const std::vector<i64>& dims() const { return dims_; }
  std::string str() const { return dims_str(dims_); }
  bool operator==(const ProcessorGrid&) const = default;

 private:
  std::vector<i64> dims_;
};

// Product of rank-1 grids, factor order = axis order (axis 0 slowest).
ProcessorGrid product_grid(const std::vector<ProcessorGrid>& factors);

enum class DistKind { CyclicRank1, ProductOfCyclic };

// Bijection between the global index set and the disjoint union of
// per-processor local index sets. Only cyclic maps are supported:
// along each axis, global j = s + k*p for processor coordinate s and
// local coordinate k.
class Distribution {
 public:
  Distribution() = default;
  static Distribution cyclic(Shape global, ProcessorGrid grid);

  DistKind kind() const { return kind_; }
  const Shape& global_shape() const { return global_; }
  const ProcessorGrid& grid() const { return grid_; }
  const Shape& local_shape() const { return local_; }
  bool operator==(const Distribution&) const = default;

 private:
  DistKind kind_ = DistKind::CyclicRank1;
  Shape global_;
  ProcessorGrid grid_;
  Shape local_;
};

// Global index owned by processor s at local index k.
MultiIndex cyclic_global(const Distribution& dist, const MultiIndex& s,
                         const MultiIndex& k);
// Owner and local index of global index j.
std::pair<MultiIndex, MultiIndex> cyclic_local(const Distribution& dist,
                                               const MultiIndex& j);

// Elements start, start+stride, ..., start+(count-1)*stride of one axis.
struct StridedView {
  i64 start = 0;
  i64 stride = 1;
  i64 count = 0;
  bool operator==(const StridedView&) const = default;
};

std::vector<Complex> strided_read(std::span<const Complex> a,
                                  const StridedView& view);
// Rank-d gather: one view per axis, result row-major over per-axis
// view positions.
std::vector<Complex> strided_read(std::span<const Complex> a,
                                  const Shape& shape,
                                  const std::vector<StridedView>& views);

// Dense row-major complex matrix.
struct Matrix {
  i64 rows = 0;
  i64 cols = 0;
  std::vector<Complex> data;

  static Matrix zero(i64 rows, i64 cols);
  static Matrix identity(i64 n);
  Complex& at(i64 r, i64 c) { return data[static_cast<size_t>(r * cols + c)]; }
  const Complex& at(i64 r, i64 c) const {
    return data[static_cast<size_t>(r * cols + c)];
  }
};

std::vector<Complex> matvec(const Matrix& m, std::span<const Complex> x);
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace bsptensor
