#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "bsptensor/algorithm.hpp"
#include "bsptensor/oracles.hpp"
#include "bsptensor/transforms.hpp"
#include "test_util.hpp"

using namespace bsptensor;
using testutil::max_abs_diff;

namespace {

LinearBspAlgorithm with_comm(const CommRule& rule) {
  auto dist = Distribution::cyclic(Shape::of(4), ProcessorGrid::of(2));
  LinearBspAlgorithm alg;
  alg.in_dist = dist;
  alg.out_dist = dist;
  alg.steps.push_back(CommunicationStep{rule, Shape::of(2)});
  return alg;
}

}  // namespace

TEST_CASE("make_computation rejects mismatched kernel chains") {
  auto a = Kernel::separable({DftAtom{4, 1}});
  auto b = Kernel::separable({DftAtom{2, 1}});
  CHECK_THROWS_AS(make_computation({a, b}), ArgumentError);
  CHECK_THROWS_AS(make_computation({}), ArgumentError);
  CHECK(make_computation({a, a}).out_shape() == Shape::of(4));
}

TEST_CASE("validate accepts the built-in transforms") {
  CHECK(validate(make_fft_rank1(16, 2)).empty());
  CHECK(validate(make_dct2_rank1(8, 2)).empty());
  CHECK(validate(make_fft_rankd(Shape({4, 4}), ProcessorGrid({2, 2}))).empty());
  CHECK(validate(make_dct2_rankd(Shape({4, 4}), ProcessorGrid({2, 2})))
            .empty());
}

TEST_CASE("validate reports duplicate and uncovered destinations") {
  TableRule broken{ProcessorGrid::of(2), Shape::of(2), {0, 0, 1, 1},
                   {0, 0, 0, 1}};
  auto violations = validate(with_comm(CommRule{broken}));
  REQUIRE_FALSE(violations.empty());
  bool dup = false, uncovered = false;
  for (const auto& v : violations) {
    if (v.find("duplicate destination") != std::string::npos) dup = true;
    if (v.find("never written") != std::string::npos) uncovered = true;
  }
  CHECK(dup);
  CHECK(uncovered);
}

TEST_CASE("validate reports out-of-range destinations") {
  TableRule broken{ProcessorGrid::of(2), Shape::of(2), {0, 0, 1, 7},
                   {0, 1, 0, 1}};
  auto violations = validate(with_comm(CommRule{broken}));
  REQUIRE_FALSE(violations.empty());
  CHECK(violations.front().find("out of range") != std::string::npos);
}

TEST_CASE("validate reports local shape breaks between supersteps") {
  auto dist = Distribution::cyclic(Shape::of(8), ProcessorGrid::of(2));
  LinearBspAlgorithm alg;
  alg.in_dist = dist;
  alg.out_dist = dist;
  // Local shape is 4 but the step expects 2.
  alg.steps.push_back(
      make_computation({Kernel::separable({DftAtom{2, 1}})}));
  auto violations = validate(alg);
  CHECK_FALSE(violations.empty());
}

TEST_CASE("as_matrix of the identity algorithm is exactly the identity") {
  auto alg = LinearBspAlgorithm::identity(
      Distribution::cyclic(Shape::of(6), ProcessorGrid::of(2)));
  auto m = as_matrix(alg);
  auto want = Matrix::identity(6);
  CHECK(m.data == want.data);
}

TEST_CASE("as_matrix of the 2-point single-processor fft is [[1,1],[1,-1]]") {
  auto m = as_matrix(make_fft_rank1(2, 1));
  CHECK(m.rows == 2);
  CHECK(std::abs(m.at(0, 0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(m.at(0, 1) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(m.at(1, 0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(m.at(1, 1) - Complex(-1, 0)) < 1e-15);
}

TEST_CASE("as_matrix of the distributed fft is the dft matrix") {
  auto m = as_matrix(make_fft_rank1(4, 2));
  for (i64 j = 0; j < 4; ++j) {
    std::vector<Complex> e(4, Complex(0, 0));
    e[static_cast<size_t>(j)] = Complex(1, 0);
    auto col = oracle::dft(e);
    for (i64 k = 0; k < 4; ++k) {
      CHECK(std::abs(m.at(k, j) - col[static_cast<size_t>(k)]) < 1e-12);
    }
  }
}

TEST_CASE("as_matrix refuses global sizes beyond the enumeration guard") {
  CHECK_THROWS_AS(as_matrix(make_fft_rank1(kEnumerationGuard * 4, 2)),
                  ArgumentError);
}

TEST_CASE("algorithms are linear in their input") {
  auto alg = make_fft_rank1(16, 2);
  auto x = testutil::random_complex(16, 4);
  auto y = testutil::random_complex(16, 5);
  const Complex a(0.7, -0.3), b(-1.2, 0.25);

  std::vector<Complex> axby(16);
  for (int i = 0; i < 16; ++i) axby[i] = a * x[i] + b * y[i];

  auto fx = apply_global(alg, x);
  auto fy = apply_global(alg, y);
  auto fz = apply_global(alg, axby);
  std::vector<Complex> want(16);
  for (int i = 0; i < 16; ++i) want[i] = a * fx[i] + b * fy[i];
  CHECK(max_abs_diff(fz, want) < 1e-12);
}

TEST_CASE("enumerate_targets lists the full permutation") {
  CommunicationStep step{FftTransposeRule{4, 2}, Shape::of(2)};
  auto t = enumerate_targets(step, ProcessorGrid::of(2));
  // (s=0,k=0)->(0,0), (s=0,k=1)->(1,0), (s=1,k=0)->(0,1), (s=1,k=1)->(1,1).
  REQUIRE(t.size() == 4);
  CHECK(t[0] == std::pair<i64, i64>{0, 0});
  CHECK(t[1] == std::pair<i64, i64>{1, 0});
  CHECK(t[2] == std::pair<i64, i64>{0, 1});
  CHECK(t[3] == std::pair<i64, i64>{1, 1});
}

TEST_CASE("computation_local_matrix composes kernels in order") {
  // Twiddle after DFT on processor 1 of the n=4, p=2 four-step fft.
  auto step =
      make_computation({Kernel::separable({DftAtom{2, 1}}),
                        Kernel::separable({DiagonalAtom{DiagKind::FftTwiddle,
                                                        4, 2}})});
  auto m = computation_local_matrix(step, ProcessorGrid::of(2),
                                    MultiIndex({1}));
  // DFT_2 = [[1,1],[1,-1]], then diag(1, w_4^1) = diag(1, -i).
  CHECK(std::abs(m.at(0, 0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(m.at(0, 1) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(m.at(1, 0) - Complex(0, -1)) < 1e-15);
  CHECK(std::abs(m.at(1, 1) - Complex(0, 1)) < 1e-15);
}

TEST_CASE("signature lists step kinds in order") {
  auto fft = make_fft_rank1(16, 2);
  StructureSignature want{StepKind::Computation, StepKind::Communication,
                          StepKind::Computation};
  CHECK(fft.signature() == want);
}
