#include "bsptensor/serialize.hpp"

#include <cstdio>

namespace bsptensor {

namespace {

void emit(const nlohmann::ordered_json& j, std::string& out) {
  using value_t = nlohmann::ordered_json::value_t;
  switch (j.type()) {
    case value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(it.key()).dump();
        out += ':';
        emit(it.value(), out);
      }
      out += '}';
      break;
    }
    case value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        emit(v, out);
      }
      out += ']';
      break;
    }
    case value_t::string:
      out += nlohmann::json(j.get<std::string>()).dump();
      break;
    case value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case value_t::number_integer:
      out += std::to_string(j.get<i64>());
      break;
    case value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      break;
    case value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
      out += buf;
      break;
    }
    default:
      out += "null";
      break;
  }
}

nlohmann::ordered_json dist_to_json(const Distribution& d) {
  nlohmann::ordered_json j;
  j["kind"] = d.kind() == DistKind::CyclicRank1 ? "cyclic_rank1"
                                                : "product_of_cyclic";
  j["global"] = d.global_shape().dims();
  j["grid"] = d.grid().dims();
  j["local"] = d.local_shape().dims();
  return j;
}

nlohmann::ordered_json matrix_to_json(const Matrix& m) {
  nlohmann::ordered_json j;
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const Complex& z : m.data) {
    entries.push_back({z.real(), z.imag()});
  }
  j["entries"] = std::move(entries);
  return j;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  Matrix m;
  m.rows = j.at("rows").get<i64>();
  m.cols = j.at("cols").get<i64>();
  const auto& entries = j.at("entries");
  if (static_cast<i64>(entries.size()) != m.rows * m.cols) {
    throw ArgumentError("matrix entry count does not match rows*cols");
  }
  m.data.reserve(entries.size());
  for (const auto& e : entries) {
    m.data.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  }
  return m;
}

nlohmann::ordered_json atom_to_json(const KernelAtom& atom) {
  nlohmann::ordered_json j;
  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, IdentityAtom>) {
          j["atom"] = "identity";
          j["extent"] = a.extent;
        } else if constexpr (std::is_same_v<T, DftAtom>) {
          j["atom"] = "dft";
          j["length"] = a.dft_len;
          j["views"] = a.num_views;
        } else if constexpr (std::is_same_v<T, DiagonalAtom>) {
          j["atom"] =
              a.kind == DiagKind::FftTwiddle ? "twiddle" : "half_shift";
          j["n"] = a.n;
          j["p"] = a.p;
        } else if constexpr (std::is_same_v<T, DuplicateAtom>) {
          j["atom"] = "duplicate";
          j["block"] = a.block;
          j["copies"] = a.copies;
        } else if constexpr (std::is_same_v<T, ProjectAtom>) {
          j["atom"] = "project";
          j["in_extent"] = a.in_extent;
          j["start"] = a.view.start;
          j["stride"] = a.view.stride;
          j["count"] = a.view.count;
        }
      },
      atom);
  return j;
}

KernelAtom atom_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("atom").get<std::string>();
  if (kind == "identity") {
    return IdentityAtom{j.at("extent").get<i64>()};
  }
  if (kind == "dft") {
    return DftAtom{j.at("length").get<i64>(), j.at("views").get<i64>()};
  }
  if (kind == "twiddle") {
    return DiagonalAtom{DiagKind::FftTwiddle, j.at("n").get<i64>(),
                        j.at("p").get<i64>()};
  }
  if (kind == "half_shift") {
    return DiagonalAtom{DiagKind::DctHalfShift, j.at("n").get<i64>(),
                        j.at("p").get<i64>()};
  }
  if (kind == "duplicate") {
    return DuplicateAtom{j.at("block").get<i64>(), j.at("copies").get<i64>()};
  }
  if (kind == "project") {
    return ProjectAtom{
        j.at("in_extent").get<i64>(),
        StridedView{j.at("start").get<i64>(), j.at("stride").get<i64>(),
                    j.at("count").get<i64>()}};
  }
  throw ArgumentError("unknown kernel atom kind: " + kind);
}

nlohmann::ordered_json rule_to_json(const CommRule& rule) {
  nlohmann::ordered_json j;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, IdentityRule>) {
          j["rule"] = "identity";
        } else if constexpr (std::is_same_v<T, FftTransposeRule>) {
          j["rule"] = "fft_transpose";
          j["n"] = r.n;
          j["p"] = r.p;
        } else if constexpr (std::is_same_v<T, DctReversalRule>) {
          j["rule"] = "dct_reversal";
          j["n"] = r.n;
          j["p"] = r.p;
        } else if constexpr (std::is_same_v<T, TableRule>) {
          j["rule"] = "table";
        } else if constexpr (std::is_same_v<T, ProductRule>) {
          j["rule"] = "product";
          nlohmann::ordered_json factors = nlohmann::ordered_json::array();
          for (const auto& f : r.factors) {
            factors.push_back(std::visit(
                [](const auto& ar) {
                  return rule_to_json(CommRule(ar));
                },
                f));
          }
          j["factors"] = std::move(factors);
        }
      },
      rule);
  return j;
}

}  // namespace

nlohmann::ordered_json kernel_to_json(const Kernel& kernel) {
  nlohmann::ordered_json j;
  if (kernel.is_dense()) {
    const DenseKernel& d = kernel.dense_kernel();
    j["type"] = "dense";
    j["in_shape"] = d.in_shape.dims();
    j["out_shape"] = d.out_shape.dims();
    j["shared"] = d.shared();
    nlohmann::ordered_json mats = nlohmann::ordered_json::array();
    for (const Matrix& m : d.per_proc) mats.push_back(matrix_to_json(m));
    j["matrices"] = std::move(mats);
  } else {
    j["type"] = "axis";
    nlohmann::ordered_json atoms = nlohmann::ordered_json::array();
    for (const auto& atom : kernel.axes()) atoms.push_back(atom_to_json(atom));
    j["atoms"] = std::move(atoms);
  }
  return j;
}

Kernel kernel_from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "axis") {
    std::vector<KernelAtom> atoms;
    for (const auto& a : j.at("atoms")) atoms.push_back(atom_from_json(a));
    return Kernel::separable(std::move(atoms));
  }
  if (type == "dense") {
    DenseKernel d;
    d.in_shape = Shape(j.at("in_shape").get<std::vector<i64>>());
    d.out_shape = Shape(j.at("out_shape").get<std::vector<i64>>());
    for (const auto& m : j.at("matrices")) {
      d.per_proc.push_back(matrix_from_json(m));
    }
    return Kernel::dense(std::move(d));
  }
  throw ArgumentError("unknown kernel type: " + type);
}

std::string canonical_json(const nlohmann::ordered_json& j) {
  std::string out;
  emit(j, out);
  return out;
}

nlohmann::ordered_json schedule_to_json(const LinearBspAlgorithm& alg,
                                        const std::string& transform,
                                        const std::string& source) {
  nlohmann::ordered_json j;
  j["schema"] = kSchemaTag;
  j["kind"] = "schedule";
  j["transform"] = transform;
  j["source"] = source;
  j["dims"] = alg.in_dist.global_shape().dims();
  j["grid"] = alg.grid().dims();
  j["in_dist"] = dist_to_json(alg.in_dist);
  j["out_dist"] = dist_to_json(alg.out_dist);

  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const auto& st : alg.steps) {
    nlohmann::ordered_json sj;
    if (const auto* comp = std::get_if<ComputationStep>(&st)) {
      sj["kind"] = "computation";
      sj["in_shape"] = comp->in_shape().dims();
      sj["out_shape"] = comp->out_shape().dims();
      nlohmann::ordered_json kernels = nlohmann::ordered_json::array();
      for (const Kernel& k : comp->kernels) {
        kernels.push_back(kernel_to_json(k));
      }
      sj["kernels"] = std::move(kernels);
    } else {
      const auto& comm = std::get<CommunicationStep>(st);
      const i64 cells = alg.grid().count() * comm.local_shape.total();
      if (cells > kEnumerationGuard) {
        throw ArgumentError(
            "schedule dump: communication step has " + std::to_string(cells) +
            " cells, exceeding the enumeration guard of " +
            std::to_string(kEnumerationGuard));
      }
      sj["kind"] = "communication";
      sj["local_shape"] = comm.local_shape.dims();
      sj["rule"] = rule_to_json(comm.rule);
      nlohmann::ordered_json table = nlohmann::ordered_json::array();
      for (const auto& [dp, di] : enumerate_targets(comm, alg.grid())) {
        table.push_back({dp, di});
      }
      sj["table"] = std::move(table);
    }
    steps.push_back(std::move(sj));
  }
  j["steps"] = std::move(steps);
  return j;
}

ParsedSchedule parse_schedule(const nlohmann::json& j) {
  if (!j.contains("schema") ||
      j.at("schema").get<std::string>() != kSchemaTag) {
    throw ArgumentError("not a schedule dump (missing or wrong schema tag)");
  }
  if (j.at("kind").get<std::string>() != "schedule") {
    throw ArgumentError("document kind is not \"schedule\"");
  }
  ParsedSchedule out;
  out.transform = j.at("transform").get<std::string>();
  out.source = j.value("source", std::string());
  out.dims = j.at("dims").get<std::vector<i64>>();
  out.grid = j.at("grid").get<std::vector<i64>>();
  for (const auto& sj : j.at("steps")) {
    ParsedStep step;
    const std::string kind = sj.at("kind").get<std::string>();
    if (kind == "computation") {
      step.kind = StepKind::Computation;
      for (const auto& k : sj.at("kernels")) {
        step.kernels.push_back(kernel_from_json(k));
      }
      step.local_in = Shape(sj.at("in_shape").get<std::vector<i64>>());
      step.local_out = Shape(sj.at("out_shape").get<std::vector<i64>>());
    } else if (kind == "communication") {
      step.kind = StepKind::Communication;
      step.local_in = Shape(sj.at("local_shape").get<std::vector<i64>>());
      step.local_out = step.local_in;
      for (const auto& t : sj.at("table")) {
        step.table.emplace_back(t.at(0).get<i64>(), t.at(1).get<i64>());
      }
    } else {
      throw ArgumentError("unknown step kind: " + kind);
    }
    out.steps.push_back(std::move(step));
  }
  return out;
}

}  // namespace bsptensor
