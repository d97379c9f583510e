#include "bsptensor/algorithm.hpp"

#include <sstream>

#include "bsptensor/engine.hpp"

namespace bsptensor {

ComputationStep make_computation(std::vector<Kernel> kernels) {
  if (kernels.empty()) {
    throw ArgumentError("computation step needs at least one kernel");
  }
  for (size_t i = 1; i < kernels.size(); ++i) {
    if (!(kernels[i].in_shape() == kernels[i - 1].out_shape())) {
      throw ArgumentError(
          "kernel composition shapes do not chain: " +
          kernels[i - 1].out_shape().str() + " then " +
          kernels[i].in_shape().str());
    }
  }
  return ComputationStep{std::move(kernels)};
}

StepKind step_kind(const Step& step) {
  return std::holds_alternative<ComputationStep>(step)
             ? StepKind::Computation
             : StepKind::Communication;
}

StructureSignature LinearBspAlgorithm::signature() const {
  StructureSignature sig;
  sig.reserve(steps.size());
  for (const auto& st : steps) sig.push_back(step_kind(st));
  return sig;
}

LinearBspAlgorithm LinearBspAlgorithm::identity(const Distribution& dist) {
  return LinearBspAlgorithm{dist, dist, {}};
}

Matrix computation_local_matrix(const ComputationStep& step,
                                const ProcessorGrid& grid,
                                const MultiIndex& s) {
  Matrix m = kernel_matrix(step.kernels.front(), grid, s);
  for (size_t i = 1; i < step.kernels.size(); ++i) {
    m = matmul(kernel_matrix(step.kernels[i], grid, s), m);
  }
  return m;
}

std::vector<std::pair<i64, i64>> enumerate_targets(
    const CommunicationStep& step, const ProcessorGrid& grid) {
  const i64 p = grid.count();
  const i64 L = step.local_shape.total();
  std::vector<std::pair<i64, i64>> out(static_cast<size_t>(p * L));
  MultiIndex dproc, didx;
  for (i64 sl = 0; sl < p; ++sl) {
    const MultiIndex s(delinearize(sl, grid.dims()));
    for (i64 kl = 0; kl < L; ++kl) {
      const MultiIndex k(delinearize(kl, step.local_shape.dims()));
      rule_target(step.rule, grid, step.local_shape, s, k, dproc, didx);
      out[static_cast<size_t>(sl * L + kl)] = {
          linear_index(dproc.coords(), grid.dims()),
          linear_index(didx.coords(), step.local_shape.dims())};
    }
  }
  return out;
}

std::vector<std::string> validate(const LinearBspAlgorithm& alg) {
  std::vector<std::string> violations;
  auto note = [&](const std::string& msg) { violations.push_back(msg); };

  if (!(alg.in_dist.grid() == alg.out_dist.grid())) {
    note("input and output distributions use different processor grids");
  }

  Shape cur = alg.in_dist.local_shape();
  for (size_t i = 0; i < alg.steps.size(); ++i) {
    const std::string tag = "step " + std::to_string(i) + ": ";
    if (const auto* comp = std::get_if<ComputationStep>(&alg.steps[i])) {
      if (!(comp->in_shape() == cur)) {
        note(tag + "computation input shape " + comp->in_shape().str() +
             " does not match incoming local shape " + cur.str());
      }
      cur = comp->out_shape();
      if (!comp->kernels.front().is_dense() &&
          static_cast<i64>(comp->kernels.front().axes().size()) !=
              alg.grid().rank()) {
        note(tag + "kernel rank does not match grid rank");
      }
    } else {
      const auto& comm = std::get<CommunicationStep>(alg.steps[i]);
      if (!(comm.local_shape == cur)) {
        note(tag + "communication local shape " + comm.local_shape.str() +
             " does not match incoming local shape " + cur.str());
      }
      // Full-enumeration bijectivity: in-range destinations, no duplicate
      // destination, full coverage.
      const i64 p = alg.grid().count();
      const i64 L = comm.local_shape.total();
      std::vector<uint8_t> written(static_cast<size_t>(p * L), 0);
      bool enumerable = true;
      std::vector<std::pair<i64, i64>> targets;
      try {
        targets = enumerate_targets(comm, alg.grid());
      } catch (const std::exception& e) {
        note(tag + "destination map enumeration failed: " + e.what());
        enumerable = false;
      }
      if (enumerable) {
        for (i64 cell = 0; cell < p * L; ++cell) {
          const auto [dp, di] = targets[static_cast<size_t>(cell)];
          if (dp < 0 || dp >= p || di < 0 || di >= L) {
            note(tag + "destination out of range for source cell " +
                 std::to_string(cell));
            continue;
          }
          uint8_t& w = written[static_cast<size_t>(dp * L + di)];
          if (w) {
            note(tag + "duplicate destination: processor " +
                 std::to_string(dp) + ", local index " + std::to_string(di));
          }
          w = 1;
        }
        for (i64 cell = 0; cell < p * L; ++cell) {
          if (!written[static_cast<size_t>(cell)]) {
            note(tag + "destination never written: cell " +
                 std::to_string(cell));
          }
        }
      }
    }
  }
  if (!(cur == alg.out_dist.local_shape())) {
    note("final local shape " + cur.str() +
         " does not match output distribution local shape " +
         alg.out_dist.local_shape().str());
  }
  return violations;
}

std::vector<Complex> apply_global(const LinearBspAlgorithm& alg,
                                  std::span<const Complex> x, ExecMode mode) {
  if (static_cast<i64>(x.size()) != alg.in_dist.global_shape().total()) {
    throw ArgumentError("apply_global: input size does not match shape " +
                        alg.in_dist.global_shape().str());
  }
  const auto input = DistributedArray::scatter(alg.in_dist, x);
  return run(alg, input, mode).output.gather();
}

Matrix as_matrix(const LinearBspAlgorithm& alg) {
  const i64 n_in = alg.in_dist.global_shape().total();
  const i64 n_out = alg.out_dist.global_shape().total();
  if (n_in > kEnumerationGuard || n_out > kEnumerationGuard) {
    throw ArgumentError("as_matrix: global size exceeds guard of " +
                        std::to_string(kEnumerationGuard));
  }
  Matrix m = Matrix::zero(n_out, n_in);
  std::vector<Complex> e(static_cast<size_t>(n_in), Complex(0.0, 0.0));
  for (i64 j = 0; j < n_in; ++j) {
    e[static_cast<size_t>(j)] = Complex(1.0, 0.0);
    const auto col = apply_global(alg, e, ExecMode::Sequential);
    for (i64 r = 0; r < n_out; ++r) m.at(r, j) = col[static_cast<size_t>(r)];
    e[static_cast<size_t>(j)] = Complex(0.0, 0.0);
  }
  return m;
}

}  // namespace bsptensor
