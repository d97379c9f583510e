#include "bsptensor/tensor.hpp"

#include <utility>

namespace bsptensor {

namespace {

AxisRule to_axis_rule(const CommRule& rule) {
  return std::visit(
      [](const auto& r) -> AxisRule {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ProductRule>) {
          if (r.factors.size() != 1) {
            throw StructureError(
                "communication factor is not rank-1; cannot combine");
          }
          return r.factors.front();
        } else {
          return AxisRule(r);
        }
      },
      rule);
}

KernelAtom to_axis_atom(const Kernel& kernel) {
  if (kernel.is_dense() || kernel.axes().size() != 1) {
    throw StructureError("kernel factor is not a rank-1 atom");
  }
  return kernel.axes().front();
}

// Materialize a rank-1 kernel as per-processor matrices (a single shared
// matrix when the kernel does not depend on the processor index).
std::vector<Matrix> materialize_rank1(const Kernel& kernel,
                                      const ProcessorGrid& grid) {
  if (kernel.is_dense()) {
    return kernel.dense_kernel().per_proc;
  }
  if (kernel_proc_independent(kernel)) {
    return {kernel_matrix(kernel, grid, MultiIndex({0}))};
  }
  std::vector<Matrix> mats;
  mats.reserve(static_cast<size_t>(grid.count()));
  for (i64 s = 0; s < grid.count(); ++s) {
    mats.push_back(kernel_matrix(kernel, grid, MultiIndex({s})));
  }
  return mats;
}

Kernel tensor_kernel(const std::vector<Kernel>& factors,
                     const std::vector<ProcessorGrid>& grids) {
  bool any_dense = false;
  for (const Kernel& k : factors) any_dense |= k.is_dense();

  if (!any_dense) {
    std::vector<KernelAtom> axes;
    axes.reserve(factors.size());
    for (const Kernel& k : factors) axes.push_back(to_axis_atom(k));
    return Kernel::separable(std::move(axes));
  }

  // A dense factor forces the whole combination dense: the Kronecker
  // product is materialized per processor tuple.
  std::vector<i64> in_dims, out_dims;
  i64 in_total = 1, out_total = 1;
  for (const Kernel& k : factors) {
    if (k.in_shape().rank() != 1) {
      throw StructureError("kernel factor is not rank-1");
    }
    in_dims.push_back(k.in_shape().dim(0));
    out_dims.push_back(k.out_shape().dim(0));
    in_total *= in_dims.back();
    out_total *= out_dims.back();
  }
  if (in_total > kEnumerationGuard || out_total > kEnumerationGuard) {
    throw ArgumentError(
        "dense Kronecker combination exceeds the size guard of " +
        std::to_string(kEnumerationGuard));
  }

  std::vector<std::vector<Matrix>> mats;
  bool all_shared = true;
  for (size_t l = 0; l < factors.size(); ++l) {
    mats.push_back(materialize_rank1(factors[l], grids[l]));
    all_shared &= mats.back().size() == 1;
  }

  DenseKernel dense;
  dense.in_shape = Shape(in_dims);
  dense.out_shape = Shape(out_dims);
  if (all_shared) {
    Matrix m = mats.front().front();
    for (size_t l = 1; l < mats.size(); ++l) m = kron(m, mats[l].front());
    dense.per_proc.push_back(std::move(m));
  } else {
    std::vector<i64> grid_dims;
    for (const auto& g : grids) grid_dims.push_back(g.dim(0));
    const i64 total_procs = checked_total(grid_dims);
    dense.per_proc.reserve(static_cast<size_t>(total_procs));
    for (i64 sl = 0; sl < total_procs; ++sl) {
      const auto s = delinearize(sl, grid_dims);
      const auto& first = mats[0];
      Matrix m = first[first.size() == 1 ? 0 : static_cast<size_t>(s[0])];
      for (size_t l = 1; l < mats.size(); ++l) {
        const auto& ml = mats[l];
        m = kron(m, ml[ml.size() == 1 ? 0 : static_cast<size_t>(s[l])]);
      }
      dense.per_proc.push_back(std::move(m));
    }
  }
  return Kernel::dense(std::move(dense));
}

}  // namespace

ComputationStep tensor_computation(const std::vector<ComputationStep>& steps,
                                   const std::vector<ProcessorGrid>& grids) {
  if (steps.empty()) {
    throw ArgumentError("tensor_computation requires at least one factor");
  }
  if (grids.size() != steps.size()) {
    throw ArgumentError("tensor_computation: one grid per factor required");
  }
  for (const auto& g : grids) {
    if (g.rank() != 1) {
      throw StructureError("tensor_computation factors must be rank-1");
    }
  }
  size_t depth = 0;
  for (const auto& st : steps) depth = std::max(depth, st.kernels.size());

  // Compositions of unequal length are padded with trailing identities,
  // then combined position by position.
  std::vector<Kernel> kernels;
  for (size_t pos = 0; pos < depth; ++pos) {
    std::vector<Kernel> factors;
    factors.reserve(steps.size());
    for (const auto& st : steps) {
      if (pos < st.kernels.size()) {
        factors.push_back(st.kernels[pos]);
      } else {
        factors.push_back(Kernel::identity(st.out_shape()));
      }
    }
    kernels.push_back(tensor_kernel(factors, grids));
  }
  return make_computation(std::move(kernels));
}

CommunicationStep tensor_communication(
    const std::vector<CommunicationStep>& steps) {
  if (steps.empty()) {
    throw ArgumentError("tensor_communication requires at least one factor");
  }
  ProductRule product;
  std::vector<i64> local_dims;
  for (const auto& st : steps) {
    if (st.local_shape.rank() != 1) {
      throw StructureError("tensor_communication factors must be rank-1");
    }
    product.factors.push_back(to_axis_rule(st.rule));
    local_dims.push_back(st.local_shape.dim(0));
  }
  return CommunicationStep{CommRule(std::move(product)), Shape(local_dims)};
}

LinearBspAlgorithm tensor(const std::vector<LinearBspAlgorithm>& factors) {
  if (factors.empty()) {
    throw ArgumentError("tensor requires at least one factor");
  }
  std::vector<ProcessorGrid> grids;
  std::vector<i64> in_dims, out_dims;
  for (const auto& alg : factors) {
    if (alg.in_dist.global_shape().rank() != 1 ||
        alg.out_dist.global_shape().rank() != 1) {
      throw ArgumentError("tensor factors must be rank-1 algorithms");
    }
    grids.push_back(alg.grid());
    in_dims.push_back(alg.in_dist.global_shape().dim(0));
    out_dims.push_back(alg.out_dist.global_shape().dim(0));
  }
  const StructureSignature sig = factors.front().signature();
  for (const auto& alg : factors) {
    if (alg.signature() != sig) {
      throw StructureError(
          "tensor factors have mismatched structure signatures; pad with "
          "identity supersteps first");
    }
  }

  LinearBspAlgorithm out;
  const ProcessorGrid grid = product_grid(grids);
  out.in_dist = Distribution::cyclic(Shape(in_dims), grid);
  out.out_dist = Distribution::cyclic(Shape(out_dims), grid);
  for (size_t i = 0; i < sig.size(); ++i) {
    if (sig[i] == StepKind::Computation) {
      std::vector<ComputationStep> comp;
      for (const auto& alg : factors) {
        comp.push_back(std::get<ComputationStep>(alg.steps[i]));
      }
      out.steps.emplace_back(tensor_computation(comp, grids));
    } else {
      std::vector<CommunicationStep> comm;
      for (const auto& alg : factors) {
        comm.push_back(std::get<CommunicationStep>(alg.steps[i]));
      }
      out.steps.emplace_back(tensor_communication(comm));
    }
  }
  return out;
}

LinearBspAlgorithm pad_identity(const LinearBspAlgorithm& alg,
                                const StructureSignature& target) {
  LinearBspAlgorithm out;
  out.in_dist = alg.in_dist;
  out.out_dist = alg.out_dist;

  Shape cur = alg.in_dist.local_shape();
  size_t next = 0;
  for (StepKind kind : target) {
    if (next < alg.steps.size() && step_kind(alg.steps[next]) == kind) {
      out.steps.push_back(alg.steps[next]);
      if (const auto* comp = std::get_if<ComputationStep>(&alg.steps[next])) {
        cur = comp->out_shape();
      }
      ++next;
    } else if (kind == StepKind::Computation) {
      out.steps.emplace_back(
          make_computation({Kernel::identity(cur)}));
    } else {
      out.steps.emplace_back(CommunicationStep{CommRule(IdentityRule{}), cur});
    }
  }
  if (next != alg.steps.size()) {
    throw StructureError(
        "algorithm structure does not embed into the target signature");
  }
  return out;
}

}  // namespace bsptensor
