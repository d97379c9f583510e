#pragma once

#include <variant>
#include <vector>

#include "bsptensor/core.hpp"

namespace bsptensor {

// Communication rules give each local element (s, k) a destination
// (processor, local index). Every rule is a closed form or an explicit
// table; full enumeration over the index set is the single source of
// truth for bijectivity checks, volume counting and schedule dumps.

struct IdentityRule {
  bool operator==(const IdentityRule&) const = default;
};

// The four-step FFT redistribution round (length n over p, local n/p):
// element k of processor s moves to processor (k mod p), local index
// s*n/p^2 + floor(k/p).
struct FftTransposeRule {
  i64 n = 1;
  i64 p = 1;
  bool operator==(const FftTransposeRule&) const = default;
};

// The DCT extension reversal (length n over p, local 2n/p): the first
// n/p elements stay, element k >= n/p moves to processor p-1-s, local
// index 3n/p-1-k.
struct DctReversalRule {
  i64 n = 1;
  i64 p = 1;
  bool operator==(const DctReversalRule&) const = default;
};

// Explicit destination table, indexed by linearized (s, k).
struct TableRule {
  ProcessorGrid grid;
  Shape local;
  std::vector<i64> dst_proc;
  std::vector<i64> dst_index;
};

using AxisRule =
    std::variant<IdentityRule, FftTransposeRule, DctReversalRule, TableRule>;

// Componentwise product of rank-1 rules, factor l acting on axis l.
struct ProductRule {
  std::vector<AxisRule> factors;
};

using CommRule = std::variant<IdentityRule, FftTransposeRule, DctReversalRule,
                              TableRule, ProductRule>;

// Destination of axis element k on axis processor s. p and local_len
// describe the axis; returns {dest processor, dest local index}.
std::pair<i64, i64> axis_rule_target(const AxisRule& rule, i64 p,
                                     i64 local_len, i64 s, i64 k);

// Destination of local element k on processor s. Writes into proc_out
// and index_out (resized to the grid/local rank).
void rule_target(const CommRule& rule, const ProcessorGrid& grid,
                 const Shape& local, const MultiIndex& s, const MultiIndex& k,
                 MultiIndex& proc_out, MultiIndex& index_out);

std::pair<MultiIndex, MultiIndex> rule_target(const CommRule& rule,
                                              const ProcessorGrid& grid,
                                              const Shape& local,
                                              const MultiIndex& s,
                                              const MultiIndex& k);

}  // namespace bsptensor
