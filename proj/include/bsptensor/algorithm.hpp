#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bsptensor/comm.hpp"
#include "bsptensor/core.hpp"
#include "bsptensor/kernel.hpp"

namespace bsptensor {

// One computation superstep: every processor applies the same composition
// of kernels (kernels[0] first) to its own local array. No processor reads
// another processor's data.
struct ComputationStep {
  std::vector<Kernel> kernels;

  const Shape& in_shape() const { return kernels.front().in_shape(); }
  const Shape& out_shape() const { return kernels.back().out_shape(); }
};

ComputationStep make_computation(std::vector<Kernel> kernels);

// One communication superstep: a permutation of the disjoint union of
// local index sets, realized as puts that take effect at the barrier.
struct CommunicationStep {
  CommRule rule;
  Shape local_shape;
};

using Step = std::variant<ComputationStep, CommunicationStep>;

enum class StepKind { Computation, Communication };
using StructureSignature = std::vector<StepKind>;

StepKind step_kind(const Step& step);

// A linear BSP algorithm: an input distribution, an alternating list of
// computation and communication supersteps over one processor grid, and
// an output distribution.
struct LinearBspAlgorithm {
  Distribution in_dist;
  Distribution out_dist;
  std::vector<Step> steps;

  const ProcessorGrid& grid() const { return in_dist.grid(); }
  StructureSignature signature() const;

  static LinearBspAlgorithm identity(const Distribution& dist);
};

// Static checks: grid consistency, local-shape chaining across steps,
// and full-enumeration bijectivity of every communication step. Returns
// human-readable violations, empty when the algorithm is well formed.
std::vector<std::string> validate(const LinearBspAlgorithm& alg);

// The global matrix of the algorithm, built by running impulse inputs
// through it (columns). Guarded: global sizes must be <= 4096.
Matrix as_matrix(const LinearBspAlgorithm& alg);

// Scatter x by the input distribution, run, gather by the output
// distribution.
std::vector<Complex> apply_global(const LinearBspAlgorithm& alg,
                                  std::span<const Complex> x,
                                  ExecMode mode = ExecMode::Sequential);

// Composition of the step's kernels on processor s as one matrix.
Matrix computation_local_matrix(const ComputationStep& step,
                                const ProcessorGrid& grid,
                                const MultiIndex& s);

// destinations[linearized (s, k)] = {dest processor, dest index},
// both linearized. The enumerated form of the step's permutation.
std::vector<std::pair<i64, i64>> enumerate_targets(
    const CommunicationStep& step, const ProcessorGrid& grid);

inline constexpr i64 kEnumerationGuard = 4096;

}  // namespace bsptensor
