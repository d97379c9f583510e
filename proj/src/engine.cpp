#include "bsptensor/engine.hpp"

#include <algorithm>
#include <cstring>

namespace bsptensor {

DistributedArray DistributedArray::scatter(const Distribution& dist,
                                           std::span<const Complex> global) {
  if (static_cast<i64>(global.size()) != dist.global_shape().total()) {
    throw ArgumentError("scatter: array size does not match shape " +
                        dist.global_shape().str());
  }
  const i64 p = dist.grid().count();
  const i64 L = dist.local_shape().total();
  DistributedArray a;
  a.dist = dist;
  a.locals.assign(static_cast<size_t>(p),
                  std::vector<Complex>(static_cast<size_t>(L)));
  const auto gdims = dist.global_shape().dims();
  for (i64 sl = 0; sl < p; ++sl) {
    const MultiIndex s(delinearize(sl, dist.grid().dims()));
    for (i64 kl = 0; kl < L; ++kl) {
      const MultiIndex k(delinearize(kl, dist.local_shape().dims()));
      const MultiIndex j = cyclic_global(dist, s, k);
      a.locals[static_cast<size_t>(sl)][static_cast<size_t>(kl)] =
          global[static_cast<size_t>(linear_index(j.coords(), gdims))];
    }
  }
  return a;
}

std::vector<Complex> DistributedArray::gather() const {
  const i64 p = dist.grid().count();
  const i64 L = dist.local_shape().total();
  std::vector<Complex> global(static_cast<size_t>(dist.global_shape().total()));
  const auto gdims = dist.global_shape().dims();
  for (i64 sl = 0; sl < p; ++sl) {
    const MultiIndex s(delinearize(sl, dist.grid().dims()));
    for (i64 kl = 0; kl < L; ++kl) {
      const MultiIndex k(delinearize(kl, dist.local_shape().dims()));
      const MultiIndex j = cyclic_global(dist, s, k);
      global[static_cast<size_t>(linear_index(j.coords(), gdims))] =
          locals[static_cast<size_t>(sl)][static_cast<size_t>(kl)];
    }
  }
  return global;
}

namespace {

// Intermediate arrays between supersteps are plain per-processor blocks;
// re-attach a cyclic distribution whose global shape is grid * local.
Distribution synth_dist(const ProcessorGrid& grid, const Shape& local) {
  std::vector<i64> global(static_cast<size_t>(local.rank()));
  for (i64 l = 0; l < local.rank(); ++l) {
    global[static_cast<size_t>(l)] = local.dim(l) * grid.dim(l);
  }
  return Distribution::cyclic(Shape(std::move(global)), grid);
}

void check_local_sizes(const DistributedArray& x) {
  const i64 p = x.dist.grid().count();
  if (static_cast<i64>(x.locals.size()) != p) {
    throw ContractError("distributed array holds " +
                        std::to_string(x.locals.size()) +
                        " local blocks for a grid of " + std::to_string(p));
  }
  const i64 L = x.dist.local_shape().total();
  for (const auto& loc : x.locals) {
    if (static_cast<i64>(loc.size()) != L) {
      throw ContractError("local block size does not match local shape " +
                          x.dist.local_shape().str());
    }
  }
}

}  // namespace

DistributedArray exec_computation(const ComputationStep& step,
                                  const DistributedArray& x, ExecMode mode) {
  check_local_sizes(x);
  if (!(step.in_shape() == x.dist.local_shape())) {
    throw ContractError("computation step expects local shape " +
                        step.in_shape().str() + ", array has " +
                        x.dist.local_shape().str());
  }
  const ProcessorGrid& grid = x.dist.grid();
  const i64 p = grid.count();
  DistributedArray out;
  out.dist = synth_dist(grid, step.out_shape());
  out.locals.assign(static_cast<size_t>(p), {});

  const bool par = mode == ExecMode::Parallel;
#pragma omp parallel for schedule(static) if (par)
  for (i64 sl = 0; sl < p; ++sl) {
    const MultiIndex s(delinearize(sl, grid.dims()));
    std::vector<Complex> cur = x.locals[static_cast<size_t>(sl)];
    for (const Kernel& k : step.kernels) {
      cur = apply_kernel(k, grid, s, cur);
    }
    out.locals[static_cast<size_t>(sl)] = std::move(cur);
  }
  return out;
}

DistributedArray exec_communication(const CommunicationStep& step,
                                    const DistributedArray& x, ExecMode mode,
                                    CommEntry* entry) {
  check_local_sizes(x);
  if (!(step.local_shape == x.dist.local_shape())) {
    throw ContractError("communication step expects local shape " +
                        step.local_shape.str() + ", array has " +
                        x.dist.local_shape().str());
  }
  const ProcessorGrid& grid = x.dist.grid();
  const i64 p = grid.count();
  const i64 L = step.local_shape.total();

  // Each worker fills a private put list; lists are merged at the barrier.
  std::vector<std::vector<PutRecord>> put_lists(static_cast<size_t>(p));
  std::vector<std::string> worker_errors(static_cast<size_t>(p));

  const bool par = mode == ExecMode::Parallel;
#pragma omp parallel for schedule(static) if (par)
  for (i64 sl = 0; sl < p; ++sl) {
    auto& puts = put_lists[static_cast<size_t>(sl)];
    puts.reserve(static_cast<size_t>(L));
    try {
      const MultiIndex s(delinearize(sl, grid.dims()));
      MultiIndex k(std::vector<i64>(grid.rank(), 0));
      MultiIndex dproc, didx;
      for (i64 kl = 0; kl < L; ++kl) {
        rule_target(step.rule, grid, step.local_shape, s, k, dproc, didx);
        PutRecord rec;
        rec.src_proc = sl;
        rec.dst_proc = linear_index(dproc.coords(), grid.dims());
        rec.dst_index = linear_index(didx.coords(), step.local_shape.dims());
        rec.value = x.locals[static_cast<size_t>(sl)][static_cast<size_t>(kl)];
        puts.push_back(rec);
        // Advance the row-major odometer.
        for (i64 l = grid.rank(); l-- > 0;) {
          if (++k[l] < step.local_shape.dim(l)) break;
          k[l] = 0;
        }
      }
    } catch (const std::exception& e) {
      worker_errors[static_cast<size_t>(sl)] = e.what();
    }
  }
  for (const auto& err : worker_errors) {
    if (!err.empty()) throw ScheduleError(err);
  }

  // Barrier: merge in canonical order and apply, checking that the step
  // is a permutation (each destination cell written exactly once).
  std::vector<PutRecord> merged;
  merged.reserve(static_cast<size_t>(p * L));
  for (auto& puts : put_lists) {
    merged.insert(merged.end(), puts.begin(), puts.end());
  }
  std::sort(merged.begin(), merged.end(),
            [](const PutRecord& a, const PutRecord& b) {
              if (a.dst_proc != b.dst_proc) return a.dst_proc < b.dst_proc;
              return a.dst_index < b.dst_index;
            });

  DistributedArray out;
  out.dist = x.dist;
  out.locals.assign(static_cast<size_t>(p),
                    std::vector<Complex>(static_cast<size_t>(L)));
  std::vector<uint8_t> written(static_cast<size_t>(p * L), 0);
  std::vector<i64> sent(static_cast<size_t>(p), 0);
  std::vector<i64> received(static_cast<size_t>(p), 0);
  std::vector<i64> self_kept(static_cast<size_t>(p), 0);
  for (const PutRecord& rec : merged) {
    if (rec.dst_proc < 0 || rec.dst_proc >= p || rec.dst_index < 0 ||
        rec.dst_index >= L) {
      throw ScheduleError("destination out of range: processor " +
                          std::to_string(rec.dst_proc) + ", local index " +
                          std::to_string(rec.dst_index));
    }
    uint8_t& w =
        written[static_cast<size_t>(rec.dst_proc * L + rec.dst_index)];
    if (w) {
      throw ScheduleError("duplicate destination: processor " +
                          std::to_string(rec.dst_proc) + ", local index " +
                          std::to_string(rec.dst_index));
    }
    w = 1;
    out.locals[static_cast<size_t>(rec.dst_proc)]
              [static_cast<size_t>(rec.dst_index)] = rec.value;
    if (rec.dst_proc == rec.src_proc) {
      ++self_kept[static_cast<size_t>(rec.src_proc)];
    } else {
      ++sent[static_cast<size_t>(rec.src_proc)];
      ++received[static_cast<size_t>(rec.dst_proc)];
    }
  }
  // One put per source cell plus no duplicates implies full coverage.

  if (entry) {
    entry->sent = std::move(sent);
    entry->received = std::move(received);
    entry->self_kept = std::move(self_kept);
    entry->h = 0;
    for (i64 sl = 0; sl < p; ++sl) {
      entry->h = std::max(entry->h,
                          std::max(entry->sent[static_cast<size_t>(sl)],
                                   entry->received[static_cast<size_t>(sl)]));
    }
  }
  return out;
}

CommEntry comm_volume(const CommunicationStep& step,
                      const ProcessorGrid& grid) {
  const i64 p = grid.count();
  const i64 L = step.local_shape.total();
  CommEntry entry;
  entry.sent.assign(static_cast<size_t>(p), 0);
  entry.received.assign(static_cast<size_t>(p), 0);
  entry.self_kept.assign(static_cast<size_t>(p), 0);
  const auto targets = enumerate_targets(step, grid);
  for (i64 cell = 0; cell < p * L; ++cell) {
    const i64 src = cell / L;
    const auto [dp, di] = targets[static_cast<size_t>(cell)];
    if (di < 0 || di >= L || dp < 0 || dp >= p) {
      throw ScheduleError("destination out of range while counting volume");
    }
    if (dp == src) {
      ++entry.self_kept[static_cast<size_t>(src)];
    } else {
      ++entry.sent[static_cast<size_t>(src)];
      ++entry.received[static_cast<size_t>(dp)];
    }
  }
  entry.h = 0;
  for (i64 sl = 0; sl < p; ++sl) {
    entry.h = std::max(entry.h,
                       std::max(entry.sent[static_cast<size_t>(sl)],
                                entry.received[static_cast<size_t>(sl)]));
  }
  return entry;
}

RunResult run(const LinearBspAlgorithm& alg, const DistributedArray& input,
              ExecMode mode) {
  if (!(input.dist == alg.in_dist)) {
    throw ContractError(
        "input distribution does not match the algorithm's declared input "
        "distribution");
  }
  check_local_sizes(input);

  RunResult result;
  DistributedArray cur = input;
  for (size_t i = 0; i < alg.steps.size(); ++i) {
    if (const auto* comp = std::get_if<ComputationStep>(&alg.steps[i])) {
      cur = exec_computation(*comp, cur, mode);
    } else {
      CommEntry entry;
      cur = exec_communication(std::get<CommunicationStep>(alg.steps[i]), cur,
                               mode, &entry);
      entry.step_index = static_cast<i64>(i);
      result.report.entries.push_back(std::move(entry));
    }
  }
  if (!(cur.dist.local_shape() == alg.out_dist.local_shape())) {
    throw ContractError(
        "final local shape does not match the declared output distribution");
  }
  cur.dist = alg.out_dist;
  result.output = std::move(cur);
  return result;
}

}  // namespace bsptensor
