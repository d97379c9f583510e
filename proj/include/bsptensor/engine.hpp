#pragma once

#include <span>
#include <vector>

#include "bsptensor/algorithm.hpp"
#include "bsptensor/core.hpp"

namespace bsptensor {

// An array split into per-processor local blocks (linearized grid order).
struct DistributedArray {
  Distribution dist;
  std::vector<std::vector<Complex>> locals;

  static DistributedArray scatter(const Distribution& dist,
                                  std::span<const Complex> global);
  std::vector<Complex> gather() const;
};

// One pending write, produced by a communication superstep. Indices are
// linearized (grid order for processors, row-major for cells).
struct PutRecord {
  i64 src_proc = 0;
  i64 dst_proc = 0;
  i64 dst_index = 0;
  Complex value;
};

// Traffic counters for one communication superstep. sent/received count
// elements that cross processors; self_kept counts puts whose source and
// destination processor coincide. h is the max over processors of
// max(sent, received).
struct CommEntry {
  i64 step_index = 0;
  std::vector<i64> sent;
  std::vector<i64> received;
  std::vector<i64> self_kept;
  i64 h = 0;
};

struct CommReport {
  std::vector<CommEntry> entries;
};

struct RunResult {
  DistributedArray output;
  CommReport report;
};

// Run every superstep in order. In Parallel mode the per-processor work of
// each superstep runs under OpenMP; puts go to private per-processor lists
// and are merged at the barrier in canonical order (destination processor,
// then destination index), so both modes produce identical bits.
RunResult run(const LinearBspAlgorithm& alg, const DistributedArray& input,
              ExecMode mode = ExecMode::Sequential);

DistributedArray exec_computation(const ComputationStep& step,
                                  const DistributedArray& x,
                                  ExecMode mode = ExecMode::Sequential);

DistributedArray exec_communication(const CommunicationStep& step,
                                    const DistributedArray& x,
                                    ExecMode mode = ExecMode::Sequential,
                                    CommEntry* entry = nullptr);

// Traffic counters from rule enumeration alone; moves no data.
CommEntry comm_volume(const CommunicationStep& step,
                      const ProcessorGrid& grid);

}  // namespace bsptensor
