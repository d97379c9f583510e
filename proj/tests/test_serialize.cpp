#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "bsptensor/serialize.hpp"
#include "bsptensor/transforms.hpp"
#include "test_util.hpp"

using namespace bsptensor;

TEST_CASE("canonical_json keeps insertion order and prints %.17g floats") {
  nlohmann::ordered_json j;
  j["zeta"] = 1;
  j["alpha"] = 0.1;
  j["list"] = nlohmann::ordered_json::array({1.5, -2, true, nullptr, "x"});
  CHECK(canonical_json(j) ==
        "{\"zeta\":1,\"alpha\":0.10000000000000001,"
        "\"list\":[1.5,-2,true,null,\"x\"]}");
}

TEST_CASE("canonical_json is byte-stable across repeated serialization") {
  auto alg = make_dct2_rank1(8, 2);
  auto a = canonical_json(schedule_to_json(alg, "dct", "combinator"));
  auto b = canonical_json(schedule_to_json(make_dct2_rank1(8, 2), "dct",
                                           "combinator"));
  CHECK(a == b);
}

TEST_CASE("schedule dumps parse back to the same structure") {
  auto alg = make_fft_rank1(16, 2);
  auto j = schedule_to_json(alg, "fft", "combinator");
  CHECK(j.at("schema") == kSchemaTag);

  auto parsed = parse_schedule(nlohmann::json::parse(canonical_json(j)));
  CHECK(parsed.transform == "fft");
  CHECK(parsed.source == "combinator");
  CHECK(parsed.dims == std::vector<i64>{16});
  CHECK(parsed.grid == std::vector<i64>{2});
  REQUIRE(parsed.steps.size() == 3);
  CHECK(parsed.steps[0].kind == StepKind::Computation);
  CHECK(parsed.steps[1].kind == StepKind::Communication);
  CHECK(parsed.steps[2].kind == StepKind::Computation);

  // The dumped table equals the enumerated rule.
  const auto& comm = std::get<CommunicationStep>(alg.steps[1]);
  CHECK(parsed.steps[1].table == enumerate_targets(comm, alg.grid()));
}

TEST_CASE("parsed kernels rebuild the same local matrices") {
  auto alg = make_dct2_rank1(4, 2);
  auto parsed =
      parse_schedule(schedule_to_json(alg, "dct", "combinator"));
  const auto grid = alg.grid();
  for (size_t i = 0; i < alg.steps.size(); ++i) {
    const auto* comp = std::get_if<ComputationStep>(&alg.steps[i]);
    if (!comp) continue;
    ComputationStep rebuilt{parsed.steps[i].kernels};
    for (i64 s = 0; s < grid.count(); ++s) {
      auto a = computation_local_matrix(*comp, grid, MultiIndex({s}));
      auto b = computation_local_matrix(rebuilt, grid, MultiIndex({s}));
      REQUIRE(a.rows == b.rows);
      REQUIRE(a.cols == b.cols);
      CHECK(testutil::max_abs_diff(a.data, b.data) == 0.0);
    }
  }
}

TEST_CASE("kernel json round-trips atoms and dense matrices") {
  auto k = Kernel::separable(
      {DftAtom{4, 2}, DiagonalAtom{DiagKind::DctHalfShift, 8, 2},
       DuplicateAtom{3, 2}, ProjectAtom{6, StridedView{0, 1, 3}},
       IdentityAtom{5}});
  auto back = kernel_from_json(
      nlohmann::json::parse(canonical_json(kernel_to_json(k))));
  CHECK_FALSE(back.is_dense());
  CHECK(back.axes() == k.axes());

  Matrix m = Matrix::zero(2, 3);
  m.at(0, 0) = {1.5, -2.25};
  m.at(1, 2) = {0, 1e-17};
  auto d = Kernel::dense(DenseKernel{Shape::of(3), Shape::of(2), {m}});
  auto dback = kernel_from_json(
      nlohmann::json::parse(canonical_json(kernel_to_json(d))));
  REQUIRE(dback.is_dense());
  CHECK(dback.dense_kernel().per_proc.size() == 1);
  CHECK(dback.dense_kernel().per_proc[0].data == m.data);
}

TEST_CASE("parse_schedule rejects foreign documents") {
  nlohmann::json j{{"schema", "other/v9"}, {"kind", "schedule"}};
  CHECK_THROWS_AS(parse_schedule(j), ArgumentError);
  nlohmann::json r{{"schema", kSchemaTag}, {"kind", "report"}};
  CHECK_THROWS_AS(parse_schedule(r), ArgumentError);
}

TEST_CASE("oversized communication steps cannot be dumped") {
  auto alg = make_fft_rank1(8192, 2);
  CHECK_THROWS_AS(schedule_to_json(alg, "fft", "combinator"), ArgumentError);
}
