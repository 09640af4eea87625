// SPDX-License-Identifier: Apache-2.0
//
// hbs: command-line front end over the C API in hbs/hbs.h.
// Exit codes: 0 success, 1 failure (including failed validation),
// 2 usage or level-spec errors.

#include <charconv>
#include <cstdint>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hbs/hbs.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Deleter {
  void operator()(hbs_dense* p) const { hbs_dense_free(p); }
  void operator()(hbs_matrix* p) const { hbs_matrix_free(p); }
  void operator()(hbs_config* p) const { hbs_config_free(p); }
  void operator()(hbs_irf_table* p) const { hbs_irf_free(p); }
  void operator()(char* p) const { hbs_string_free(p); }
};
template <class T>
using Handle = std::unique_ptr<T, Deleter>;

// Carries the exit code out of a failed library call.
struct CommandFailed {
  int exit_code;
};

std::string g_usage;

void check(hbs_status status, const std::string& context) {
  if (status == HBS_OK) return;
  std::cerr << "hbs: " << context << ": " << hbs_last_error() << "\n";
  throw CommandFailed{kExitFailure};
}

[[noreturn]] void usage_error(const std::string& msg) {
  std::cerr << "hbs: " << msg << "\n\n" << g_usage;
  throw CommandFailed{kExitUsage};
}

void print_and_free(char* text) {
  Handle<char> owned(text);
  std::cout << owned.get();
}

Handle<hbs_config> parse_levels(const std::string& spec) {
  hbs_config* raw = nullptr;
  const hbs_status st = hbs_config_parse(spec.c_str(), &raw);
  if (st == HBS_ERR_PARSE || st == HBS_ERR_CONFIG) usage_error(std::string("--levels: ") + hbs_last_error());
  check(st, "--levels");
  return Handle<hbs_config>(raw);
}

Handle<hbs_dense> load_dense(const std::string& path) {
  hbs_dense* raw = nullptr;
  check(hbs_dense_read(path.c_str(), &raw), path);
  return Handle<hbs_dense>(raw);
}

Handle<hbs_matrix> load_hbs(const std::string& path) {
  hbs_matrix* raw = nullptr;
  check(hbs_matrix_read(path.c_str(), &raw), path);
  return Handle<hbs_matrix>(raw);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = text.find(sep, start);
    out.push_back(text.substr(start, at == std::string::npos ? at : at - start));
    if (at == std::string::npos) return out;
    start = at + 1;
  }
}

template <class T>
bool parse_number(const std::string& s, T& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && res.ec == std::errc() && res.ptr == s.data() + s.size();
}

struct Dims {
  std::uint64_t m = 0, k = 0, n = 0;
};

Dims parse_dims(const std::string& text) {
  const auto parts = split(text, 'x');
  Dims d;
  if (parts.size() != 3 || !parse_number(parts[0], d.m) || !parse_number(parts[1], d.k) ||
      !parse_number(parts[2], d.n) || d.m == 0 || d.k == 0 || d.n == 0) {
    usage_error("--dims '" + text + "': expected MxKxN with positive integers");
  }
  return d;
}

std::vector<hbs_shape> parse_shapes(const std::string& text) {
  std::size_t count = 0;
  hbs_shapes_parse(text.c_str(), nullptr, 0, &count);
  std::vector<hbs_shape> shapes(count);
  if (hbs_shapes_parse(text.c_str(), shapes.data(), shapes.size(), &count) != HBS_OK) {
    usage_error(std::string("--shapes: ") + hbs_last_error());
  }
  return shapes;
}

std::vector<double> parse_fractions(const std::string& text) {
  std::size_t count = 0;
  hbs_fractions_parse(text.c_str(), nullptr, 0, &count);
  std::vector<double> values(count);
  if (hbs_fractions_parse(text.c_str(), values.data(), values.size(), &count) != HBS_OK) {
    usage_error(std::string("--sparsities: ") + hbs_last_error());
  }
  return values;
}

std::vector<double> parse_percentiles(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    double pct = 0.0;
    if (!parse_number(part, pct) || !(pct > 0.0 && pct <= 100.0)) {
      usage_error("--percentiles '" + part + "': expected percentages in (0,100]");
    }
    out.push_back(pct / 100.0);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical block sparse matrices: prune, validate, multiply, analyze", "hbs"};
  app.require_subcommand(1);

  std::string in, out, levels;
  auto* prune = app.add_subcommand("prune", "Hierarchically prune a DMAT into an HBSF");
  prune->add_option("--in", in, "input DMAT")->required();
  prune->add_option("--out", out, "output HBSF")->required();
  prune->add_option("--levels", levels, "levels, e.g. 32x1:0.75,16x1:0.875,1x1:0.96875")->required();

  std::string validate_in;
  auto* validate = app.add_subcommand("validate", "Check HBSF structural invariants");
  validate->add_option("--in", validate_in, "HBSF file")->required();

  std::string recon_in, recon_out;
  auto* reconstruct = app.add_subcommand("reconstruct", "Expand an HBSF to a dense DMAT");
  reconstruct->add_option("--in", recon_in, "HBSF file")->required();
  reconstruct->add_option("--out", recon_out, "output DMAT")->required();

  std::string mm_a, mm_b, mm_out;
  bool oracle = false;
  auto* matmul = app.add_subcommand("matmul", "Multiply an HBSF by a dense DMAT");
  matmul->add_option("--a", mm_a, "left operand (HBSF)")->required();
  matmul->add_option("--b", mm_b, "right operand (DMAT)")->required();
  matmul->add_option("--out", mm_out, "product (DMAT)")->required();
  matmul->add_flag("--oracle", oracle, "also run the dense product and report max relative error");

  std::string tk_orig, tk_pruned, tk_pct = "10,20,30,40,50";
  bool tk_pairs = false;
  auto* topk = app.add_subcommand("topk", "Top-k magnitude retention of a pruned matrix");
  topk->add_option("--original", tk_orig, "original DMAT")->required();
  topk->add_option("--pruned", tk_pruned, "pruned HBSF")->required();
  topk->add_option("--percentiles", tk_pct, "percentages, e.g. 10,20,30,40,50");
  topk->add_flag("--pairs", tk_pairs, "print \"p retained\" lines instead of a table");

  std::string sp_dims, sp_levels, sp_irf;
  auto* speedup = app.add_subcommand("speedup", "Estimate dense vs HBS cost and speedup");
  speedup->add_option("--dims", sp_dims, "MxKxN")->required();
  speedup->add_option("--levels", sp_levels, "level spec")->required();
  speedup->add_option("--irf", sp_irf, "HBS-IRF table")->required();

  auto* bench = app.add_subcommand("bench", "Irregularity-factor tables");
  bench->require_subcommand(1);
  std::string cal_shapes, cal_sparsities, cal_dims, cal_out;
  std::uint32_t cal_reps = 5, cal_warmup = 1;
  std::uint64_t cal_seed = 0;
  auto* calibrate = bench->add_subcommand("calibrate", "Measure irf by microbenchmark");
  calibrate->add_option("--shapes", cal_shapes, "e.g. 32x1,16x1,8x1,4x1,1x1")->required();
  calibrate->add_option("--sparsities", cal_sparsities, "e.g. 0.5,0.75,0.875")->required();
  calibrate->add_option("--dims", cal_dims, "MxKxN problem size")->required();
  calibrate->add_option("--reps", cal_reps, "timed repetitions (>= 5)");
  calibrate->add_option("--warmup", cal_warmup, "discarded warmup runs");
  calibrate->add_option("--seed", cal_seed, "workload seed");
  calibrate->add_option("--out", cal_out, "output HBS-IRF table")->required();

  std::string an_shapes, an_sparsities, an_out;
  double alpha = 1.0, beta = 1.0;
  auto* analytic = bench->add_subcommand("analytic", "Write an analytic (unmeasured) irf table");
  analytic->add_option("--shapes", an_shapes, "block shapes")->required();
  analytic->add_option("--sparsities", an_sparsities, "sparsities")->required();
  analytic->add_option("--alpha", alpha, "block-area overhead (> 0)");
  analytic->add_option("--beta", beta, "sparsity overhead (> 0)");
  analytic->add_option("--out", an_out, "output HBS-IRF table")->required();

  std::uint32_t gen_rows = 0, gen_cols = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_dist = "gaussian", gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a seeded random DMAT");
  gen->add_option("--rows", gen_rows, "rows")->required();
  gen->add_option("--cols", gen_cols, "columns")->required();
  gen->add_option("--seed", gen_seed, "RNG seed")->required();
  gen->add_option("--dist", gen_dist, "gaussian or uniform")
      ->check(CLI::IsMember({"gaussian", "uniform"}));
  gen->add_option("--out", gen_out, "output DMAT")->required();

  g_usage = app.help();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "hbs: " << e.what() << "\n\n" << g_usage;
    return kExitUsage;
  }

  try {
    if (*prune) {
      auto config = parse_levels(levels);
      auto dense = load_dense(in);
      std::vector<hbs_level_trace> trace(hbs_config_level_count(config.get()));
      hbs_matrix* raw = nullptr;
      check(hbs_prune(dense.get(), config.get(), &raw, trace.data()), "prune");
      Handle<hbs_matrix> pruned(raw);
      check(hbs_matrix_write(pruned.get(), out.c_str()), out);
      char* text = nullptr;
      check(hbs_trace_render(trace.data(), trace.size(), &text), "trace");
      print_and_free(text);
      std::cout << "\n";
      check(hbs_summary_render(pruned.get(), &text), "summary");
      print_and_free(text);
    } else if (*validate) {
      hbs_matrix* raw = nullptr;
      const hbs_status st = hbs_matrix_read(validate_in.c_str(), &raw);
      if (st != HBS_OK) {
        std::cout << hbs_last_error() << "\n";
        return kExitFailure;
      }
      Handle<hbs_matrix> m(raw);
      int passed = 0;
      char* report = nullptr;
      check(hbs_matrix_validate(m.get(), &passed, &report), "validate");
      print_and_free(report);
      return passed ? 0 : kExitFailure;
    } else if (*reconstruct) {
      auto m = load_hbs(recon_in);
      hbs_dense* raw = nullptr;
      check(hbs_matrix_reconstruct(m.get(), &raw), "reconstruct");
      Handle<hbs_dense> d(raw);
      check(hbs_dense_write(d.get(), recon_out.c_str()), recon_out);
    } else if (*matmul) {
      auto a = load_hbs(mm_a);
      auto b = load_dense(mm_b);
      hbs_dense* raw = nullptr;
      check(hbs_matmul(a.get(), b.get(), &raw), "matmul");
      Handle<hbs_dense> c(raw);
      check(hbs_dense_write(c.get(), mm_out.c_str()), mm_out);
      std::cout << "product: " << hbs_dense_rows(c.get()) << "x" << hbs_dense_cols(c.get()) << "\n";
      if (oracle) {
        hbs_dense* a_dense = nullptr;
        check(hbs_matrix_reconstruct(a.get(), &a_dense), "reconstruct");
        Handle<hbs_dense> ad(a_dense);
        hbs_dense* ref = nullptr;
        check(hbs_dense_matmul(ad.get(), b.get(), &ref), "dense matmul");
        Handle<hbs_dense> r(ref);
        double err = 0.0;
        check(hbs_max_relative_error(c.get(), r.get(), &err), "compare");
        std::cout << "max relative error vs dense: " << err << "\n";
      }
    } else if (*topk) {
      const auto pct = parse_percentiles(tk_pct);
      auto orig = load_dense(tk_orig);
      auto pruned = load_hbs(tk_pruned);
      char* text = nullptr;
      check(hbs_topk_report(orig.get(), pruned.get(), pct.data(), pct.size(),
                            tk_pairs ? HBS_REPORT_PAIRS : HBS_REPORT_TABLE, &text),
            "topk");
      print_and_free(text);
    } else if (*speedup) {
      const Dims d = parse_dims(sp_dims);
      auto config = parse_levels(sp_levels);
      hbs_irf_table* raw = nullptr;
      check(hbs_irf_read(sp_irf.c_str(), &raw), sp_irf);
      Handle<hbs_irf_table> irf(raw);
      char* text = nullptr;
      check(hbs_estimate_cost(d.m, d.k, d.n, config.get(), irf.get(), nullptr, &text), "speedup");
      print_and_free(text);
    } else if (*calibrate) {
      const auto shapes = parse_shapes(cal_shapes);
      const auto sparsities = parse_fractions(cal_sparsities);
      const Dims d = parse_dims(cal_dims);
      const hbs_bench_plan plan{d.m, d.k, d.n, cal_reps, cal_warmup, cal_seed};
      hbs_irf_table* raw = nullptr;
      check(hbs_irf_calibrate(shapes.data(), shapes.size(), sparsities.data(), sparsities.size(),
                              &plan, &raw),
            "calibrate");
      Handle<hbs_irf_table> irf(raw);
      check(hbs_irf_write(irf.get(), cal_out.c_str()), cal_out);
      std::cout << "wrote " << hbs_irf_entry_count(irf.get()) << " calibrated entries to "
                << cal_out << "\n";
    } else if (*analytic) {
      const auto shapes = parse_shapes(an_shapes);
      const auto sparsities = parse_fractions(an_sparsities);
      hbs_irf_table* raw = nullptr;
      check(hbs_irf_analytic(shapes.data(), shapes.size(), sparsities.data(), sparsities.size(),
                             alpha, beta, &raw),
            "analytic");
      Handle<hbs_irf_table> irf(raw);
      check(hbs_irf_write(irf.get(), an_out.c_str()), an_out);
      std::cout << "wrote " << hbs_irf_entry_count(irf.get()) << " analytic entries to " << an_out
                << "\n";
    } else if (*gen) {
      hbs_dense* raw = nullptr;
      check(hbs_dense_generate(gen_rows, gen_cols, gen_seed,
                               gen_dist == "uniform" ? HBS_DIST_UNIFORM : HBS_DIST_GAUSSIAN, &raw),
            "gen");
      Handle<hbs_dense> m(raw);
      check(hbs_dense_write(m.get(), gen_out.c_str()), gen_out);
    }
  } catch (const CommandFailed& f) {
    return f.exit_code;
  }
  return 0;
}
