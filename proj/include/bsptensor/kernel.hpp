#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "bsptensor/core.hpp"

namespace bsptensor {

// A kernel atom is a linear map acting along one axis of the local array.
// A separable kernel holds one atom per axis and acts as their tensor
// product; compositions of such kernels form a computation superstep's
// per-processor map.

struct IdentityAtom {
  i64 extent = 1;
  bool operator==(const IdentityAtom&) const = default;
};

// For t in [num_views]: out(t : num_views : dft_len) =
// DFT_{dft_len}(in(t : num_views : dft_len)). Extent = dft_len * num_views.
struct DftAtom {
  i64 dft_len = 1;
  i64 num_views = 1;
  bool operator==(const DftAtom&) const = default;
};

enum class DiagKind {
  // out[k] = w^(k*s) * in[k] with w = exp(-2*pi*i/n); the inter-stage
  // scaling of the four-step FFT. Extent n/p.
  FftTwiddle,
  // out[k] = (1/2) * exp(-i*pi*(s + k*p)/(2n)) * in[k]; the DCT-II
  // extraction phase, indexed by the global position s + k*p. Extent n/p.
  DctHalfShift,
};

struct DiagonalAtom {
  DiagKind kind = DiagKind::FftTwiddle;
  i64 n = 1;
  i64 p = 1;
  bool operator==(const DiagonalAtom&) const = default;
};

// out[q*block + i] = in[i] for q in [copies]. Extent block -> copies*block.
struct DuplicateAtom {
  i64 block = 1;
  i64 copies = 1;
  bool operator==(const DuplicateAtom&) const = default;
};

// out[k] = in[view.start + k*view.stride]. Extent in_extent -> view.count.
struct ProjectAtom {
  i64 in_extent = 1;
  StridedView view;
  bool operator==(const ProjectAtom&) const = default;
};

using KernelAtom = std::variant<IdentityAtom, DftAtom, DiagonalAtom,
                                DuplicateAtom, ProjectAtom>;

i64 atom_in_extent(const KernelAtom& atom);
i64 atom_out_extent(const KernelAtom& atom);

// Arbitrary per-processor linear map on the flattened local array.
// One matrix shared by all processors, or one per processor (linearized
// grid order).
struct DenseKernel {
  Shape in_shape;
  Shape out_shape;
  std::vector<Matrix> per_proc;
  bool shared() const { return per_proc.size() == 1; }
};

class Kernel {
 public:
  static Kernel separable(std::vector<KernelAtom> axes);
  static Kernel dense(DenseKernel d);
  static Kernel identity(const Shape& local);

  bool is_dense() const { return dense_.has_value(); }
  const std::vector<KernelAtom>& axes() const { return axes_; }
  const DenseKernel& dense_kernel() const { return *dense_; }
  const Shape& in_shape() const { return in_shape_; }
  const Shape& out_shape() const { return out_shape_; }

 private:
  std::vector<KernelAtom> axes_;
  std::optional<DenseKernel> dense_;
  Shape in_shape_;
  Shape out_shape_;
};

// Apply one kernel on processor s of the grid.
std::vector<Complex> apply_kernel(const Kernel& kernel,
                                  const ProcessorGrid& grid,
                                  const MultiIndex& s,
                                  std::span<const Complex> in);

// Materialize the kernel's local map on processor s (impulse columns).
Matrix kernel_matrix(const Kernel& kernel, const ProcessorGrid& grid,
                     const MultiIndex& s);

// True when the kernel's action is the same on every processor.
bool kernel_proc_independent(const Kernel& kernel);

}  // namespace bsptensor
