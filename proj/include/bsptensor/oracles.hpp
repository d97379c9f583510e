#pragma once

#include <span>
#include <vector>

#include "bsptensor/core.hpp"

// Brute-force reference transforms used to verify the distributed
// implementations. Everything here is written as the literal defining
// summation, independent of the kernel/engine machinery, and is O(n^2)
// on purpose.
namespace bsptensor::oracle {

// y_k = sum_j x_j * exp(-2*pi*i*j*k/n).
std::vector<Complex> dft(std::span<const Complex> x);

// Rank-d DFT as nested sums over the multi-index set of `shape`,
// row-major layout.
std::vector<Complex> dft_rankd(std::span<const Complex> x, const Shape& shape);

// DCT-II: y_k = sum_j x_j * cos((2j+1)*k*pi/(2n)).
std::vector<Complex> dct2(std::span<const Complex> x);

std::vector<Complex> dct2_rankd(std::span<const Complex> x,
                                const Shape& shape);

// Apply matrices[l] along axis l of x (shape row-major), i.e. the action
// of kron(matrices[0], ..., matrices[d-1]) with axis 0 slowest.
std::vector<Complex> kron_apply(const std::vector<Matrix>& matrices,
                                std::span<const Complex> x,
                                const Shape& shape);

}  // namespace bsptensor::oracle
