#include "bsptensor/comm.hpp"

namespace bsptensor {

std::pair<i64, i64> axis_rule_target(const AxisRule& rule, i64 p,
                                     i64 local_len, i64 s, i64 k) {
  return std::visit(
      [&](const auto& r) -> std::pair<i64, i64> {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, IdentityRule>) {
          return {s, k};
        } else if constexpr (std::is_same_v<T, FftTransposeRule>) {
          if (r.p != p || r.n / r.p != local_len) {
            throw ContractError("fft transpose rule does not match axis");
          }
          return {k % r.p, s * (r.n / (r.p * r.p)) + k / r.p};
        } else if constexpr (std::is_same_v<T, DctReversalRule>) {
          const i64 b = r.n / r.p;
          if (r.p != p || 2 * b != local_len) {
            throw ContractError("dct reversal rule does not match axis");
          }
          if (k < b) return {s, k};
          return {r.p - 1 - s, 3 * b - 1 - k};
        } else {  // TableRule
          if (r.grid.rank() != 1 || r.local.rank() != 1 || r.grid.dim(0) != p ||
              r.local.dim(0) != local_len) {
            throw ContractError("table rule does not match axis");
          }
          const size_t cell = static_cast<size_t>(s * local_len + k);
          return {r.dst_proc[cell], r.dst_index[cell]};
        }
      },
      rule);
}

void rule_target(const CommRule& rule, const ProcessorGrid& grid,
                 const Shape& local, const MultiIndex& s, const MultiIndex& k,
                 MultiIndex& proc_out, MultiIndex& index_out) {
  const i64 rank = grid.rank();
  if (proc_out.rank() != rank) proc_out = MultiIndex(std::vector<i64>(rank));
  if (index_out.rank() != rank) index_out = MultiIndex(std::vector<i64>(rank));

  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, IdentityRule>) {
          proc_out = s;
          index_out = k;
        } else if constexpr (std::is_same_v<T, ProductRule>) {
          if (static_cast<i64>(r.factors.size()) != rank) {
            throw ContractError("product rule rank does not match grid " +
                                grid.str());
          }
          for (i64 l = 0; l < rank; ++l) {
            const auto [dp, di] =
                axis_rule_target(r.factors[static_cast<size_t>(l)],
                                 grid.dim(l), local.dim(l), s[l], k[l]);
            proc_out[l] = dp;
            index_out[l] = di;
          }
        } else if constexpr (std::is_same_v<T, TableRule>) {
          if (!(r.grid == grid) || !(r.local == local)) {
            throw ContractError("table rule does not match grid/local shape");
          }
          const i64 cell = linear_index(s.coords(), grid.dims()) *
                               local.total() +
                           linear_index(k.coords(), local.dims());
          proc_out = MultiIndex(
              delinearize(r.dst_proc[static_cast<size_t>(cell)], grid.dims()));
          index_out = MultiIndex(delinearize(
              r.dst_index[static_cast<size_t>(cell)], local.dims()));
        } else {
          // Rank-1 closed forms used directly as the whole rule.
          if (rank != 1) {
            throw ContractError("rank-1 rule used on a rank-" +
                                std::to_string(rank) + " grid");
          }
          const auto [dp, di] = axis_rule_target(AxisRule(r), grid.dim(0),
                                                 local.dim(0), s[0], k[0]);
          proc_out[0] = dp;
          index_out[0] = di;
        }
      },
      rule);
}

std::pair<MultiIndex, MultiIndex> rule_target(const CommRule& rule,
                                              const ProcessorGrid& grid,
                                              const Shape& local,
                                              const MultiIndex& s,
                                              const MultiIndex& k) {
  MultiIndex proc, index;
  rule_target(rule, grid, local, s, k, proc, index);
  return {proc, index};
}

}  // namespace bsptensor
