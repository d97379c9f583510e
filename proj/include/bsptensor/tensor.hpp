#pragma once

#include <vector>

#include "bsptensor/algorithm.hpp"

namespace bsptensor {

// Tensor-product combinator: lifts rank-1 algorithms with identical
// structure signatures to one rank-d algorithm on the product grid.
// Factor l becomes axis l. Computation supersteps combine kernel
// compositions pairwise (tensor products of per-axis atoms; dense kernels
// become materialized Kronecker products); communication supersteps
// combine componentwise into product rules.
LinearBspAlgorithm tensor(const std::vector<LinearBspAlgorithm>& factors);

// Combine rank-1 computation steps into one rank-d step. grids[l] is the
// (rank-1) grid of factor l; needed to materialize dense combinations.
ComputationStep tensor_computation(const std::vector<ComputationStep>& steps,
                                   const std::vector<ProcessorGrid>& grids);

// Combine rank-1 communication steps into one componentwise product rule.
CommunicationStep tensor_communication(
    const std::vector<CommunicationStep>& steps);

// Insert identity supersteps so the algorithm's signature becomes `target`.
// The original signature must embed in order (subsequence); otherwise a
// StructureError is thrown.
LinearBspAlgorithm pad_identity(const LinearBspAlgorithm& alg,
                                const StructureSignature& target);

}  // namespace bsptensor
