#include "bsptensor/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <span>

#include <CLI11.hpp>
#include <json.hpp>

#include "bsptensor/engine.hpp"
#include "bsptensor/oracles.hpp"
#include "bsptensor/rng.hpp"
#include "bsptensor/serialize.hpp"
#include "bsptensor/transforms.hpp"

namespace bsptensor {

namespace {

constexpr double kVerifyTol = 1e-9;
constexpr double kCompareTol = 1e-12;

LinearBspAlgorithm build_algorithm(const std::string& transform,
                                   const std::vector<i64>& dims,
                                   const std::vector<i64>& grid,
                                   const std::string& source) {
  if (dims.empty() || dims.size() != grid.size()) {
    throw ArgumentError("--dims and --grid must have the same nonzero rank");
  }
  if (source == "reference" && transform != "fft") {
    throw ArgumentError("--source reference is only available for fft");
  }
  const Shape shape(dims);
  const ProcessorGrid pgrid(grid);
  if (transform == "fft") {
    if (source == "reference") return make_fft_rankd_reference(shape, pgrid);
    if (dims.size() == 1) return make_fft_rank1(dims[0], grid[0]);
    return make_fft_rankd(shape, pgrid);
  }
  if (transform == "dct") {
    if (dims.size() == 1) return make_dct2_rank1(dims[0], grid[0]);
    return make_dct2_rankd(shape, pgrid);
  }
  if (transform == "identity") {
    return make_identity(shape, pgrid);
  }
  throw ArgumentError("unknown transform: " + transform);
}

void parse_nested_input(const nlohmann::json& j, std::span<const i64> dims,
                        std::vector<Complex>& out) {
  if (dims.empty()) {
    if (!j.is_array() || j.size() != 2 || !j.at(0).is_number() ||
        !j.at(1).is_number()) {
      throw ArgumentError("input file: leaf values must be [re, im] pairs");
    }
    out.emplace_back(j.at(0).get<double>(), j.at(1).get<double>());
    return;
  }
  if (!j.is_array() || static_cast<i64>(j.size()) != dims.front()) {
    throw ArgumentError("input file: nesting does not match --dims");
  }
  for (const auto& sub : j) {
    parse_nested_input(sub, dims.subspan(1), out);
  }
}

std::vector<Complex> build_input(const std::string& spec, const Shape& shape,
                                 const std::string& transform) {
  const i64 total = shape.total();
  if (spec == "impulse") {
    std::vector<Complex> x(static_cast<size_t>(total), Complex(0.0, 0.0));
    x[0] = Complex(1.0, 0.0);
    return x;
  }
  if (spec == "ones") {
    return std::vector<Complex>(static_cast<size_t>(total),
                                Complex(1.0, 0.0));
  }
  if (spec.rfind("random:", 0) == 0) {
    std::uint64_t seed = 0;
    try {
      seed = std::stoull(spec.substr(7));
    } catch (const std::exception&) {
      throw ArgumentError("bad seed in --input " + spec);
    }
    Xorshift64 rng(seed);
    std::vector<Complex> x(static_cast<size_t>(total));
    for (auto& z : x) {
      // DCT inputs stay real so the real-output property is observable.
      z = transform == "dct" ? Complex(rng.symmetric(), 0.0)
                             : rng.next_complex();
    }
    return x;
  }
  if (spec.rfind("file:", 0) == 0) {
    const std::string path = spec.substr(5);
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open input file: " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw ArgumentError("input file is not valid JSON: " +
                          std::string(e.what()));
    }
    std::vector<Complex> x;
    x.reserve(static_cast<size_t>(total));
    parse_nested_input(j, shape.dims(), x);
    return x;
  }
  throw ArgumentError("unknown --input form: " + spec);
}

std::vector<Complex> oracle_transform(const std::string& transform,
                                      std::span<const Complex> x,
                                      const Shape& shape) {
  if (transform == "fft") {
    return shape.rank() == 1 ? oracle::dft(x) : oracle::dft_rankd(x, shape);
  }
  if (transform == "dct") {
    return shape.rank() == 1 ? oracle::dct2(x) : oracle::dct2_rankd(x, shape);
  }
  return std::vector<Complex>(x.begin(), x.end());
}

double rel_error_inf(std::span<const Complex> got,
                     std::span<const Complex> want) {
  double diff = 0.0, ref = 0.0;
  for (size_t i = 0; i < got.size(); ++i) {
    diff = std::max(diff, std::abs(got[i] - want[i]));
    ref = std::max(ref, std::abs(want[i]));
  }
  return diff / std::max(ref, 1.0);
}

std::string fnv64_hex(std::span<const Complex> v) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](double d) {
    unsigned char b[sizeof(double)];
    std::memcpy(b, &d, sizeof(double));
    for (unsigned char byte : b) {
      h ^= byte;
      h *= 1099511628211ull;
    }
  };
  for (const Complex& z : v) {
    mix(z.real());
    mix(z.imag());
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

bool write_file(const std::string& path, const std::string& content,
                std::ostream& err) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  out << content;
  return true;
}

int cmd_run(const std::string& transform, const std::vector<i64>& dims,
            const std::vector<i64>& grid, const std::string& input_spec,
            bool verify, const std::string& report_path,
            const std::string& mode_name, std::ostream& out,
            std::ostream& err) {
  const auto alg = build_algorithm(transform, dims, grid, "combinator");
  const Shape shape(dims);
  const auto x = build_input(input_spec, shape, transform);
  const ExecMode mode = mode_name == "sequential" ? ExecMode::Sequential
                                                  : ExecMode::Parallel;

  const auto scattered = DistributedArray::scatter(alg.in_dist, x);
  const RunResult result = run(alg, scattered, mode);
  const auto y = result.output.gather();

  double max_rel = 0.0;
  if (verify) {
    const auto want = oracle_transform(transform, x, shape);
    max_rel = rel_error_inf(y, want);
  }

  nlohmann::ordered_json j;
  j["schema"] = kSchemaTag;
  j["kind"] = "report";
  j["transform"] = transform;
  j["dims"] = dims;
  j["grid"] = grid;
  j["input"] = input_spec;
  j["verify"] = verify;
  if (verify) j["max_rel_error"] = max_rel;
  j["output_fnv64"] = fnv64_hex(y);
  j["superstep_count"] = static_cast<i64>(alg.steps.size());
  nlohmann::ordered_json comm = nlohmann::ordered_json::array();
  for (const CommEntry& e : result.report.entries) {
    nlohmann::ordered_json ej;
    ej["step"] = e.step_index;
    ej["sent"] = e.sent;
    ej["received"] = e.received;
    ej["self_kept"] = e.self_kept;
    ej["h"] = e.h;
    comm.push_back(std::move(ej));
  }
  j["comm"] = std::move(comm);

  const std::string text = canonical_json(j) + "\n";
  out << text;
  if (!report_path.empty() && !write_file(report_path, text, err)) return 2;
  return verify && max_rel > kVerifyTol ? 1 : 0;
}

int cmd_schedule(const std::string& transform, const std::vector<i64>& dims,
                 const std::vector<i64>& grid, const std::string& source,
                 const std::string& out_path, std::ostream& out,
                 std::ostream& err) {
  const auto alg = build_algorithm(transform, dims, grid, source);
  const std::string text =
      canonical_json(schedule_to_json(alg, transform, source)) + "\n";
  out << text;
  if (!out_path.empty() && !write_file(out_path, text, err)) return 2;
  return 0;
}

Matrix parsed_step_matrix(const ParsedStep& step, const ProcessorGrid& grid,
                          const MultiIndex& s) {
  Matrix m = kernel_matrix(step.kernels.front(), grid, s);
  for (size_t i = 1; i < step.kernels.size(); ++i) {
    m = matmul(kernel_matrix(step.kernels[i], grid, s), m);
  }
  return m;
}

int cmd_compare(const std::string& path_a, const std::string& path_b,
                std::ostream& out, std::ostream& err) {
  ParsedSchedule sched[2];
  const std::string* paths[2] = {&path_a, &path_b};
  for (int i = 0; i < 2; ++i) {
    std::ifstream in(*paths[i]);
    if (!in) {
      err << "error: cannot open " << *paths[i] << "\n";
      return 2;
    }
    nlohmann::json j;
    try {
      in >> j;
      sched[i] = parse_schedule(j);
    } catch (const std::exception& e) {
      err << "error: " << *paths[i] << ": " << e.what() << "\n";
      return 2;
    }
  }
  if (sched[0].dims != sched[1].dims || sched[0].grid != sched[1].grid) {
    err << "error: schedules have different dims/grid\n";
    return 2;
  }
  const ProcessorGrid grid(sched[0].grid);

  auto mismatch = [&](size_t i) {
    out << "schedules differ at step " << i << "\n";
    return 1;
  };
  const size_t common =
      std::min(sched[0].steps.size(), sched[1].steps.size());
  for (size_t i = 0; i < common; ++i) {
    const ParsedStep& a = sched[0].steps[i];
    const ParsedStep& b = sched[1].steps[i];
    if (a.kind != b.kind) return mismatch(i);
    if (a.kind == StepKind::Communication) {
      if (a.table != b.table) return mismatch(i);
      continue;
    }
    if (!(a.local_in == b.local_in) || !(a.local_out == b.local_out)) {
      return mismatch(i);
    }
    if (a.local_in.total() > kEnumerationGuard ||
        a.local_out.total() > kEnumerationGuard) {
      err << "error: step " << i << " local size exceeds guard of "
          << kEnumerationGuard << "\n";
      return 2;
    }
    for (i64 sl = 0; sl < grid.count(); ++sl) {
      const MultiIndex s(delinearize(sl, grid.dims()));
      const Matrix ma = parsed_step_matrix(a, grid, s);
      const Matrix mb = parsed_step_matrix(b, grid, s);
      if (ma.rows != mb.rows || ma.cols != mb.cols) return mismatch(i);
      for (size_t e = 0; e < ma.data.size(); ++e) {
        if (std::abs(ma.data[e] - mb.data[e]) > kCompareTol) {
          return mismatch(i);
        }
      }
    }
  }
  if (sched[0].steps.size() != sched[1].steps.size()) {
    return mismatch(common);
  }
  out << "schedules match (" << sched[0].steps.size() << " steps)\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Deterministic BSP simulator for distributed FFT/DCT plans"};
  app.name("bsptensor");
  app.require_subcommand(1);

  std::string transform, input_spec = "impulse", report_path, mode_name =
      "parallel";
  std::string source = "combinator", out_path, path_a, path_b;
  std::vector<i64> dims, grid;
  bool verify = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--transform", transform)
        ->required()
        ->check(CLI::IsMember({"fft", "dct", "identity"}));
    cmd->add_option("--dims", dims)->required()->delimiter(',');
    cmd->add_option("--grid", grid)->required()->delimiter(',');
  };

  CLI::App* run_cmd = app.add_subcommand("run", "execute a transform");
  add_common(run_cmd);
  run_cmd->add_option("--input", input_spec,
                      "impulse | ones | random:SEED | file:PATH");
  run_cmd->add_flag("--verify", verify, "check against the brute-force sum");
  run_cmd->add_option("--report", report_path, "also write the report here");
  run_cmd->add_option("--mode", mode_name)
      ->check(CLI::IsMember({"sequential", "parallel"}));

  CLI::App* sched_cmd =
      app.add_subcommand("schedule", "dump the superstep schedule as JSON");
  add_common(sched_cmd);
  sched_cmd->add_option("--source", source)
      ->check(CLI::IsMember({"combinator", "reference"}));
  sched_cmd->add_option("--out", out_path, "also write the dump here");

  CLI::App* cmp_cmd =
      app.add_subcommand("compare", "compare two schedule dumps");
  cmp_cmd->add_option("a", path_a)->required();
  cmp_cmd->add_option("b", path_b)->required();

  std::vector<const char*> argv;
  argv.push_back("bsptensor");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (run_cmd->parsed()) {
      return cmd_run(transform, dims, grid, input_spec, verify, report_path,
                     mode_name, out, err);
    }
    if (sched_cmd->parsed()) {
      return cmd_schedule(transform, dims, grid, source, out_path, out, err);
    }
    return cmd_compare(path_a, path_b, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace bsptensor
