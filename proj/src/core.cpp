#include "bsptensor/core.hpp"

#include <limits>
#include <sstream>

namespace bsptensor {

namespace {

void check_positive_dims(std::span<const i64> dims, const char* what) {
  if (dims.empty()) {
    throw ArgumentError(std::string(what) + " must have rank >= 1");
  }
  for (i64 d : dims) {
    if (d < 1) {
      throw ArgumentError(std::string(what) + " extents must be >= 1, got " +
                          dims_str(dims));
    }
  }
  checked_total(dims);
}

}  // namespace

i64 checked_total(std::span<const i64> dims) {
  i64 total = 1;
  for (i64 d : dims) {
    if (d > 0 && total > std::numeric_limits<i64>::max() / 4 / d) {
      throw ArgumentError("total size overflows platform integer: " +
                          dims_str(dims));
    }
    total *= d;
  }
  return total;
}

std::string dims_str(std::span<const i64> dims) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < dims.size(); ++i) {
    if (i) os << ",";
    os << dims[i];
  }
  os << ")";
  return os.str();
}

i64 linear_index(std::span<const i64> coords, std::span<const i64> dims) {
  if (coords.size() != dims.size()) {
    throw IndexError("rank mismatch: index " + dims_str(coords) +
                     " vs extents " + dims_str(dims));
  }
  i64 idx = 0;
  for (size_t l = 0; l < dims.size(); ++l) {
    if (coords[l] < 0 || coords[l] >= dims[l]) {
      throw IndexError("index " + dims_str(coords) + " out of range for " +
                       dims_str(dims));
    }
    idx = idx * dims[l] + coords[l];
  }
  return idx;
}

std::vector<i64> delinearize(i64 index, std::span<const i64> dims) {
  i64 total = 1;
  for (i64 d : dims) total *= d;
  if (index < 0 || index >= total) {
    throw IndexError("linear index " + std::to_string(index) +
                     " out of range for " + dims_str(dims));
  }
  std::vector<i64> coords(dims.size());
  for (size_t l = dims.size(); l-- > 0;) {
    coords[l] = index % dims[l];
    index /= dims[l];
  }
  return coords;
}

Shape::Shape(std::vector<i64> dims) : dims_(std::move(dims)) {
  check_positive_dims(dims_, "shape");
}

i64 Shape::total() const {
  i64 t = 1;
  for (i64 d : dims_) t *= d;
  return t;
}

std::vector<i64> Shape::strides() const {
  std::vector<i64> st(dims_.size());
  i64 acc = 1;
  for (size_t l = dims_.size(); l-- > 0;) {
    st[l] = acc;
    acc *= dims_[l];
  }
  return st;
}

ProcessorGrid::ProcessorGrid(std::vector<i64> dims) : dims_(std::move(dims)) {
  check_positive_dims(dims_, "processor grid");
}

i64 ProcessorGrid::count() const {
  i64 t = 1;
  for (i64 d : dims_) t *= d;
  return t;
}

ProcessorGrid product_grid(const std::vector<ProcessorGrid>& factors) {
  if (factors.empty()) {
    throw ArgumentError("product_grid requires at least one factor");
  }
  std::vector<i64> dims;
  for (const auto& g : factors) {
    if (g.rank() != 1) {
      throw ArgumentError("product_grid factors must be rank-1, got " +
                          g.str());
    }
    dims.push_back(g.dim(0));
  }
  return ProcessorGrid(dims);
}

Distribution Distribution::cyclic(Shape global, ProcessorGrid grid) {
  if (global.rank() != grid.rank()) {
    throw ArgumentError("distribution rank mismatch: shape " + global.str() +
                        " vs grid " + grid.str());
  }
  std::vector<i64> local(static_cast<size_t>(global.rank()));
  for (i64 l = 0; l < global.rank(); ++l) {
    if (global.dim(l) % grid.dim(l) != 0) {
      throw ArgumentError("cyclic distribution requires p_l | n_l, got n_" +
                          std::to_string(l) + "=" +
                          std::to_string(global.dim(l)) + ", p_" +
                          std::to_string(l) + "=" +
                          std::to_string(grid.dim(l)));
    }
    local[static_cast<size_t>(l)] = global.dim(l) / grid.dim(l);
  }
  Distribution d;
  d.kind_ = global.rank() == 1 ? DistKind::CyclicRank1
                               : DistKind::ProductOfCyclic;
  d.global_ = std::move(global);
  d.grid_ = std::move(grid);
  d.local_ = Shape(std::move(local));
  return d;
}

MultiIndex cyclic_global(const Distribution& dist, const MultiIndex& s,
                         const MultiIndex& k) {
  linear_index(s.coords(), dist.grid().dims());
  linear_index(k.coords(), dist.local_shape().dims());
  std::vector<i64> j(static_cast<size_t>(dist.global_shape().rank()));
  for (i64 l = 0; l < dist.global_shape().rank(); ++l) {
    j[static_cast<size_t>(l)] = s[l] + k[l] * dist.grid().dim(l);
  }
  return MultiIndex(std::move(j));
}

std::pair<MultiIndex, MultiIndex> cyclic_local(const Distribution& dist,
                                               const MultiIndex& j) {
  linear_index(j.coords(), dist.global_shape().dims());
  std::vector<i64> s(static_cast<size_t>(dist.global_shape().rank()));
  std::vector<i64> k(s.size());
  for (i64 l = 0; l < dist.global_shape().rank(); ++l) {
    s[static_cast<size_t>(l)] = j[l] % dist.grid().dim(l);
    k[static_cast<size_t>(l)] = j[l] / dist.grid().dim(l);
  }
  return {MultiIndex(std::move(s)), MultiIndex(std::move(k))};
}

namespace {

void check_view(const StridedView& v, i64 extent) {
  if (v.stride < 1 || v.start < 0 || v.count < 0) {
    throw IndexError("invalid strided view (start=" + std::to_string(v.start) +
                     ", stride=" + std::to_string(v.stride) +
                     ", count=" + std::to_string(v.count) + ")");
  }
  if (v.count > 0 && v.start + (v.count - 1) * v.stride >= extent) {
    throw IndexError("strided view exceeds extent " + std::to_string(extent) +
                     " (start=" + std::to_string(v.start) +
                     ", stride=" + std::to_string(v.stride) +
                     ", count=" + std::to_string(v.count) + ")");
  }
}

}  // namespace

std::vector<Complex> strided_read(std::span<const Complex> a,
                                  const StridedView& view) {
  check_view(view, static_cast<i64>(a.size()));
  std::vector<Complex> out(static_cast<size_t>(view.count));
  for (i64 i = 0; i < view.count; ++i) {
    out[static_cast<size_t>(i)] =
        a[static_cast<size_t>(view.start + i * view.stride)];
  }
  return out;
}

std::vector<Complex> strided_read(std::span<const Complex> a,
                                  const Shape& shape,
                                  const std::vector<StridedView>& views) {
  if (static_cast<i64>(views.size()) != shape.rank()) {
    throw IndexError("strided_read: one view per axis required");
  }
  if (static_cast<i64>(a.size()) != shape.total()) {
    throw IndexError("strided_read: array size does not match shape " +
                     shape.str());
  }
  std::vector<i64> out_dims(views.size());
  for (size_t l = 0; l < views.size(); ++l) {
    check_view(views[l], shape.dim(static_cast<i64>(l)));
    out_dims[l] = views[l].count;
  }
  i64 out_total = 1;
  for (i64 d : out_dims) out_total *= d;
  std::vector<Complex> out(static_cast<size_t>(out_total));
  const auto strides = shape.strides();
  for (i64 t = 0; t < out_total; ++t) {
    auto pos = delinearize(t, out_dims);
    i64 src = 0;
    for (size_t l = 0; l < views.size(); ++l) {
      src += (views[l].start + pos[l] * views[l].stride) * strides[l];
    }
    out[static_cast<size_t>(t)] = a[static_cast<size_t>(src)];
  }
  return out;
}

Matrix Matrix::zero(i64 rows, i64 cols) {
  Matrix m;
  m.rows = rows;
  m.cols = cols;
  m.data.assign(static_cast<size_t>(rows * cols), Complex(0.0, 0.0));
  return m;
}

Matrix Matrix::identity(i64 n) {
  Matrix m = zero(n, n);
  for (i64 i = 0; i < n; ++i) m.at(i, i) = Complex(1.0, 0.0);
  return m;
}

std::vector<Complex> matvec(const Matrix& m, std::span<const Complex> x) {
  if (static_cast<i64>(x.size()) != m.cols) {
    throw ArgumentError("matvec: size mismatch");
  }
  std::vector<Complex> y(static_cast<size_t>(m.rows), Complex(0.0, 0.0));
  for (i64 r = 0; r < m.rows; ++r) {
    Complex acc(0.0, 0.0);
    for (i64 c = 0; c < m.cols; ++c) {
      acc += m.at(r, c) * x[static_cast<size_t>(c)];
    }
    y[static_cast<size_t>(r)] = acc;
  }
  return y;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw ArgumentError("matmul: size mismatch");
  Matrix out = Matrix::zero(a.rows, b.cols);
  for (i64 r = 0; r < a.rows; ++r) {
    for (i64 k = 0; k < a.cols; ++k) {
      const Complex av = a.at(r, k);
      if (av == Complex(0.0, 0.0)) continue;
      for (i64 c = 0; c < b.cols; ++c) {
        out.at(r, c) += av * b.at(k, c);
      }
    }
  }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::zero(a.rows * b.rows, a.cols * b.cols);
  for (i64 i = 0; i < a.rows; ++i) {
    for (i64 j = 0; j < a.cols; ++j) {
      for (i64 k = 0; k < b.rows; ++k) {
        for (i64 l = 0; l < b.cols; ++l) {
          out.at(i * b.rows + k, j * b.cols + l) = a.at(i, j) * b.at(k, l);
        }
      }
    }
  }
  return out;
}

}  // namespace bsptensor
