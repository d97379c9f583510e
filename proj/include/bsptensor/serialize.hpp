#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bsptensor/algorithm.hpp"

namespace bsptensor {

inline constexpr const char* kSchemaTag = "bsp-tensor/v1";

// Serialize with insertion-ordered keys and floats printed via %.17g, so
// equal documents produce identical bytes run to run.
std::string canonical_json(const nlohmann::ordered_json& j);

// Schedule dump: step kinds, kernel descriptors and the enumerated
// destination table of every communication step. Each communication
// step's index set must be within kEnumerationGuard cells.
nlohmann::ordered_json schedule_to_json(const LinearBspAlgorithm& alg,
                                        const std::string& transform,
                                        const std::string& source);

// The parsed form of a dump, sufficient to re-materialize per-step local
// matrices and compare destination tables.
struct ParsedStep {
  StepKind kind = StepKind::Computation;
  std::vector<Kernel> kernels;                    // computation steps
  std::vector<std::pair<i64, i64>> table;         // communication steps
  Shape local_in;
  Shape local_out;
};

struct ParsedSchedule {
  std::string transform;
  std::string source;
  std::vector<i64> dims;
  std::vector<i64> grid;
  std::vector<ParsedStep> steps;
};

ParsedSchedule parse_schedule(const nlohmann::json& j);

nlohmann::ordered_json kernel_to_json(const Kernel& kernel);
Kernel kernel_from_json(const nlohmann::json& j);

}  // namespace bsptensor
