#include "bsptensor/kernel.hpp"

#include <utility>

#include "bsptensor/transforms.hpp"

namespace bsptensor {

i64 atom_in_extent(const KernelAtom& atom) {
  return std::visit(
      [](const auto& a) -> i64 {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, IdentityAtom>) return a.extent;
        if constexpr (std::is_same_v<T, DftAtom>) return a.dft_len * a.num_views;
        if constexpr (std::is_same_v<T, DiagonalAtom>) return a.n / a.p;
        if constexpr (std::is_same_v<T, DuplicateAtom>) return a.block;
        if constexpr (std::is_same_v<T, ProjectAtom>) return a.in_extent;
      },
      atom);
}

i64 atom_out_extent(const KernelAtom& atom) {
  return std::visit(
      [](const auto& a) -> i64 {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, IdentityAtom>) return a.extent;
        if constexpr (std::is_same_v<T, DftAtom>) return a.dft_len * a.num_views;
        if constexpr (std::is_same_v<T, DiagonalAtom>) return a.n / a.p;
        if constexpr (std::is_same_v<T, DuplicateAtom>)
          return a.block * a.copies;
        if constexpr (std::is_same_v<T, ProjectAtom>) return a.view.count;
      },
      atom);
}

namespace {

void check_atom(const KernelAtom& atom) {
  std::visit(
      [](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, IdentityAtom>) {
          if (a.extent < 1) throw ArgumentError("identity atom: extent >= 1");
        } else if constexpr (std::is_same_v<T, DftAtom>) {
          if (a.dft_len < 1 || a.num_views < 1) {
            throw ArgumentError("dft atom: length and view count >= 1");
          }
        } else if constexpr (std::is_same_v<T, DiagonalAtom>) {
          if (a.n < 1 || a.p < 1 || a.n % a.p != 0) {
            throw ArgumentError("diagonal atom: requires p >= 1 and p | n");
          }
        } else if constexpr (std::is_same_v<T, DuplicateAtom>) {
          if (a.block < 1 || a.copies < 1) {
            throw ArgumentError("duplicate atom: block and copies >= 1");
          }
        } else if constexpr (std::is_same_v<T, ProjectAtom>) {
          if (a.in_extent < 1 || a.view.count < 1 || a.view.stride < 1 ||
              a.view.start < 0 ||
              a.view.start + (a.view.count - 1) * a.view.stride >=
                  a.in_extent) {
            throw ArgumentError("project atom: view exceeds input extent");
          }
        }
      },
      atom);
}

}  // namespace

Kernel Kernel::separable(std::vector<KernelAtom> axes) {
  if (axes.empty()) throw ArgumentError("kernel must cover at least one axis");
  std::vector<i64> in_dims, out_dims;
  for (const auto& atom : axes) {
    check_atom(atom);
    in_dims.push_back(atom_in_extent(atom));
    out_dims.push_back(atom_out_extent(atom));
  }
  Kernel k;
  k.axes_ = std::move(axes);
  k.in_shape_ = Shape(std::move(in_dims));
  k.out_shape_ = Shape(std::move(out_dims));
  return k;
}

Kernel Kernel::dense(DenseKernel d) {
  if (d.per_proc.empty()) {
    throw ArgumentError("dense kernel needs at least one matrix");
  }
  for (const Matrix& m : d.per_proc) {
    if (m.rows != d.out_shape.total() || m.cols != d.in_shape.total()) {
      throw ArgumentError("dense kernel matrix does not match shapes");
    }
  }
  Kernel k;
  k.in_shape_ = d.in_shape;
  k.out_shape_ = d.out_shape;
  k.dense_ = std::move(d);
  return k;
}

Kernel Kernel::identity(const Shape& local) {
  std::vector<KernelAtom> axes;
  for (i64 l = 0; l < local.rank(); ++l) {
    axes.push_back(IdentityAtom{local.dim(l)});
  }
  return separable(std::move(axes));
}

bool kernel_proc_independent(const Kernel& kernel) {
  if (kernel.is_dense()) return kernel.dense_kernel().shared();
  for (const auto& atom : kernel.axes()) {
    if (std::holds_alternative<DiagonalAtom>(atom)) return false;
  }
  return true;
}

namespace {

// Apply `atom` along axis `ax`, all other axes fixed. s_ax is the
// processor coordinate along that axis.
std::vector<Complex> apply_atom_axis(const KernelAtom& atom, i64 ax, i64 s_ax,
                                     std::span<const Complex> in,
                                     const Shape& in_shape,
                                     Shape& out_shape) {
  std::vector<i64> out_dims = in_shape.dims();
  out_dims[static_cast<size_t>(ax)] = atom_out_extent(atom);
  out_shape = Shape(out_dims);

  const auto in_strides = in_shape.strides();
  const auto out_strides = out_shape.strides();
  const i64 st_in = in_strides[static_cast<size_t>(ax)];
  const i64 st_out = out_strides[static_cast<size_t>(ax)];

  std::vector<Complex> out(static_cast<size_t>(out_shape.total()));

  // Enumerate fibers: all coordinate combinations of the other axes.
  std::vector<i64> comp_dims;
  std::vector<size_t> comp_axes;
  for (i64 l = 0; l < in_shape.rank(); ++l) {
    if (l == ax) continue;
    comp_dims.push_back(in_shape.dim(l));
    comp_axes.push_back(static_cast<size_t>(l));
  }
  i64 comp_total = 1;
  for (i64 d : comp_dims) comp_total *= d;

  // Per-atom state shared across fibers.
  const DftAtom* dft = std::get_if<DftAtom>(&atom);
  const DiagonalAtom* diag = std::get_if<DiagonalAtom>(&atom);
  std::optional<DftPlan> plan;
  std::vector<Complex> tmp;
  if (dft) {
    plan.emplace(dft->dft_len);
    tmp.resize(static_cast<size_t>(dft->dft_len));
  }
  std::optional<TwiddleTable> twiddle;
  std::optional<HalfTwiddle> half;
  if (diag) {
    if (diag->kind == DiagKind::FftTwiddle) {
      twiddle.emplace(diag->n);
    } else {
      half.emplace(diag->n);
    }
  }

  for (i64 c = 0; c < comp_total; ++c) {
    i64 base_in = 0, base_out = 0;
    if (!comp_dims.empty()) {
      const auto pos = delinearize(c, comp_dims);
      for (size_t i = 0; i < comp_axes.size(); ++i) {
        base_in += pos[i] * in_strides[comp_axes[i]];
        base_out += pos[i] * out_strides[comp_axes[i]];
      }
    }
    const Complex* fin = in.data() + base_in;
    Complex* fout = out.data() + base_out;

    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, IdentityAtom>) {
            for (i64 i = 0; i < a.extent; ++i) {
              fout[i * st_out] = fin[i * st_in];
            }
          } else if constexpr (std::is_same_v<T, DftAtom>) {
            for (i64 t = 0; t < a.num_views; ++t) {
              plan->transform(fin + t * st_in, st_in * a.num_views,
                              tmp.data());
              for (i64 i = 0; i < a.dft_len; ++i) {
                fout[(t + i * a.num_views) * st_out] =
                    tmp[static_cast<size_t>(i)];
              }
            }
          } else if constexpr (std::is_same_v<T, DiagonalAtom>) {
            const i64 ext = a.n / a.p;
            if (a.kind == DiagKind::FftTwiddle) {
              for (i64 k = 0; k < ext; ++k) {
                fout[k * st_out] =
                    fin[k * st_in] * (*twiddle)[(k * s_ax) % a.n];
              }
            } else {
              for (i64 k = 0; k < ext; ++k) {
                fout[k * st_out] =
                    fin[k * st_in] * (0.5 * (*half)[s_ax + k * a.p]);
              }
            }
          } else if constexpr (std::is_same_v<T, DuplicateAtom>) {
            for (i64 q = 0; q < a.copies; ++q) {
              for (i64 i = 0; i < a.block; ++i) {
                fout[(q * a.block + i) * st_out] = fin[i * st_in];
              }
            }
          } else if constexpr (std::is_same_v<T, ProjectAtom>) {
            for (i64 k = 0; k < a.view.count; ++k) {
              fout[k * st_out] =
                  fin[(a.view.start + k * a.view.stride) * st_in];
            }
          }
        },
        atom);
  }
  return out;
}

}  // namespace

std::vector<Complex> apply_kernel(const Kernel& kernel,
                                  const ProcessorGrid& grid,
                                  const MultiIndex& s,
                                  std::span<const Complex> in) {
  if (static_cast<i64>(in.size()) != kernel.in_shape().total()) {
    throw ContractError("kernel input does not match shape " +
                        kernel.in_shape().str());
  }
  if (kernel.is_dense()) {
    const DenseKernel& d = kernel.dense_kernel();
    const size_t which =
        d.shared() ? 0
                   : static_cast<size_t>(linear_index(s.coords(), grid.dims()));
    return matvec(d.per_proc[which], in);
  }
  if (static_cast<i64>(kernel.axes().size()) != grid.rank() ||
      s.rank() != grid.rank()) {
    throw ContractError("kernel rank does not match processor grid " +
                        grid.str());
  }
  std::vector<Complex> cur(in.begin(), in.end());
  Shape cur_shape = kernel.in_shape();
  for (i64 ax = 0; ax < cur_shape.rank(); ++ax) {
    Shape next_shape;
    cur = apply_atom_axis(kernel.axes()[static_cast<size_t>(ax)], ax, s[ax],
                          cur, cur_shape, next_shape);
    cur_shape = next_shape;
  }
  return cur;
}

Matrix kernel_matrix(const Kernel& kernel, const ProcessorGrid& grid,
                     const MultiIndex& s) {
  const i64 in_total = kernel.in_shape().total();
  const i64 out_total = kernel.out_shape().total();
  Matrix m = Matrix::zero(out_total, in_total);
  std::vector<Complex> e(static_cast<size_t>(in_total), Complex(0.0, 0.0));
  for (i64 j = 0; j < in_total; ++j) {
    e[static_cast<size_t>(j)] = Complex(1.0, 0.0);
    const auto col = apply_kernel(kernel, grid, s, e);
    for (i64 r = 0; r < out_total; ++r) {
      m.at(r, j) = col[static_cast<size_t>(r)];
    }
    e[static_cast<size_t>(j)] = Complex(0.0, 0.0);
  }
  return m;
}

}  // namespace bsptensor
