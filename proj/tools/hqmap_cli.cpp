// command-line front door: map programs, flatten them, generate benchmark
// families, verify emitted code against the replay oracle, and compare
// hierarchical against flat mappings.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hqmap/arch/config.hpp"
#include "hqmap/bench/generate.hpp"
#include "hqmap/code/hcode_io.hpp"
#include "hqmap/code/syscode_io.hpp"
#include "hqmap/map/flat_mapper.hpp"
#include "hqmap/map/hier_mapper.hpp"
#include "hqmap/qasm/flatten.hpp"
#include "hqmap/qasm/parser.hpp"
#include "hqmap/qasm/printer.hpp"
#include "hqmap/qasm/validate.hpp"
#include "hqmap/report/oracle.hpp"
#include "hqmap/report/report.hpp"

namespace fs = std::filesystem;
using namespace hqmap;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("short write to '" + path.string() + "'");
}

void emit(const std::string& out_file, std::string_view text) {
  if (out_file.empty()) std::cout << text;
  else spill(out_file, text);
}

arch_config load_arch(const std::string& flag) {
  std::string path = flag;
  if (path.empty())
    if (const char* env = std::getenv("HQMAP_ARCH")) path = env;
  if (path.empty()) return {};
  return parse_arch_config(slurp(path));
}

program load_program(const std::string& path) {
  program p = parse_program(slurp(path));
  std::vector<diagnostic> issues = validate(p);
  if (!issues.empty()) {
    std::string msg = path + " failed validation:";
    for (const diagnostic& d : issues) msg += "\n  " + to_string(d);
    throw std::runtime_error(msg);
  }
  return p;
}

std::string default_bench(const std::string& qasm_path) {
  return fs::path(qasm_path).stem().string();
}

double ms_between(std::chrono::steady_clock::time_point a,
                  std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

struct map_opts {
  std::string qasm;
  std::string arch;
  std::string out = ".";
  std::string code = "compact";
  std::string bench;
  bool csv = false;
};

void write_outputs(const fs::path& dir, const resource_report& rep,
                   bool csv) {
  fs::create_directories(dir);
  spill(dir / "report.hqr", write_report(rep));
  spill(dir / "report.txt", render_report_text(rep));
  if (csv) spill(dir / "report.csv", write_csv({rep}));
}

int run_map(const map_opts& o) {
  program p = load_program(o.qasm);
  arch_config cfg = load_arch(o.arch);

  auto t0 = std::chrono::steady_clock::now();
  mapping_result mr = map_program(p, cfg);
  auto t1 = std::chrono::steady_clock::now();

  syscode code = expand_mapping(mr);
  resource_report rep =
      build_report(mr, code, o.bench.empty() ? default_bench(o.qasm) : o.bench,
                   ms_between(t0, t1));

  fs::path dir(o.out);
  fs::create_directories(dir);
  if (o.code == "compact") spill(dir / "code.hqc", write_hcode(mr));
  else if (o.code == "expanded") spill(dir / "code.hqs", write_syscode(code));
  write_outputs(dir, rep, o.csv);
  std::cout << render_report_text(rep);
  return 0;
}

struct flat_opts {
  std::string qasm;
  std::string arch;
  std::string out = ".";
  std::string bench;
  uint64_t limit = kDefaultFlattenLimit;
  bool csv = false;
};

int run_map_flat(const flat_opts& o) {
  program p = load_program(o.qasm);
  arch_config cfg = load_arch(o.arch);
  flat_program fp = flatten(p, o.limit);

  auto t0 = std::chrono::steady_clock::now();
  flat_map_result fr = map_flat(fp, cfg, p);
  auto t1 = std::chrono::steady_clock::now();

  resource_report rep =
      build_report(fr, o.bench.empty() ? default_bench(o.qasm) : o.bench,
                   ms_between(t0, t1));

  fs::path dir(o.out);
  fs::create_directories(dir);
  spill(dir / "code.hqs", write_syscode(fr.code));
  write_outputs(dir, rep, o.csv);
  std::cout << render_report_text(rep);
  return 0;
}

// rebuilds the flattened instruction list as a single-module program on
// one register, in qubit creation order
program to_flat_ast(const flat_program& fp) {
  using bench::detail::array_decl;
  using bench::detail::array_ref;
  module_def m;
  m.name = "main";
  uint32_t n = static_cast<uint32_t>(fp.qubits.size());
  if (n) m.locals.push_back(array_decl("q", n));
  for (const flat_instr& g : fp.instrs) {
    instr in;
    in.kind = is_two_qubit(g.gate) ? instr_kind::gate2 : instr_kind::gate1;
    in.gate = g.gate;
    in.angle = g.angle;
    in.qubits.push_back(array_ref("q", g.q0, static_cast<int32_t>(g.q0)));
    if (in.kind == instr_kind::gate2)
      in.qubits.push_back(array_ref("q", g.q1, static_cast<int32_t>(g.q1)));
    m.body.push_back(std::move(in));
  }
  program out;
  out.modules.push_back(std::move(m));
  out.main_index = 0;
  return out;
}

int run_flatten(const std::string& qasm, uint64_t limit,
                const std::string& out_file) {
  program p = load_program(qasm);
  flat_program fp = flatten(p, limit);
  emit(out_file, to_qasm(to_flat_ast(fp)));
  return 0;
}

int run_gen(const std::string& family, uint64_t k, uint64_t n, uint64_t width,
            uint64_t depth, uint64_t fanout, uint64_t seed,
            const std::string& out_file) {
  program p;
  if (family == "repeat") {
    p = bench::gen_repeat(static_cast<uint32_t>(k), static_cast<uint32_t>(n),
                          static_cast<uint32_t>(width));
  } else if (family == "nest") {
    p = bench::gen_nest(static_cast<uint32_t>(depth),
                        static_cast<uint32_t>(fanout),
                        static_cast<uint32_t>(k));
  } else if (family == "adder") {
    p = bench::gen_adder(static_cast<uint32_t>(width));
  } else if (family == "mesh") {
    p = bench::gen_mesh(static_cast<uint32_t>(width),
                        static_cast<uint32_t>(depth));
  } else if (family == "random") {
    module_def m = bench::gen_random_module(seed);
    uint32_t params = m.param_count();
    module_def main;
    main.name = "main";
    main.locals.push_back(bench::detail::array_decl("q", params));
    instr call;
    call.kind = instr_kind::call;
    call.callee = m.name;
    call.callee_index = 0;
    for (uint32_t i = 0; i < params; ++i)
      call.qubits.push_back(
          bench::detail::array_ref("q", i, static_cast<int32_t>(i)));
    main.body.push_back(std::move(call));
    p.modules.push_back(std::move(m));
    p.modules.push_back(std::move(main));
    p.main_index = 1;
  } else {
    throw std::runtime_error("unknown family '" + family +
                             "' (repeat, nest, adder, mesh, random)");
  }
  emit(out_file, to_qasm(p));
  return 0;
}

int run_compare(const std::string& hier_path, const std::string& flat_path) {
  resource_report h = read_report(slurp(hier_path));
  resource_report f = read_report(slurp(flat_path));
  if (h.mode != "hier")
    throw std::runtime_error(hier_path + " is not a hierarchical report");
  if (f.mode != "flat")
    throw std::runtime_error(flat_path + " is not a flat report");
  comparison_report c = compare_reports(h, f);
  std::cout << render_comparison_text(c, h, f);
  return 0;
}

int run_verify(const std::string& code_path) {
  syscode code = read_syscode(slurp(code_path));
  replay_stats st = replay_syscode(code);

  uint64_t oob = 0;
  uint64_t cols = 0, rows = 0;
  std::istringstream iss(std::string(code.meta_get("footprint")));
  if (iss >> cols >> rows) {
    for (const record& r : code.records)
      for (cell c : {r.a, r.b})
        if (c.x < 0 || c.y < 0 || static_cast<uint64_t>(c.x) >= cols ||
            static_cast<uint64_t>(c.y) >= rows)
          ++oob;
  }

  if (!st.clean() || oob) {
    std::cerr << code_path << ": " << st.violation_count
              << " replay violations, " << oob
              << " records outside the footprint\n";
    for (const std::string& v : st.violations) std::cerr << "  " << v << "\n";
    return 1;
  }
  std::cout << "ok: records " << code.records.size() << " exec_time "
            << st.exec_time << " depth " << st.depth << " max_inflight "
            << st.max_inflight << "\n";
  return 0;
}

int run_stats(const std::string& qasm) {
  program p = load_program(qasm);
  instruction_counts c = count_instructions(p);
  std::cout << "modular " << c.modular << "\n";
  if (c.saturated) std::cout << "flattened saturated\n";
  else std::cout << "flattened " << c.flattened << "\n";
  return 0;
}

int run_expand(const std::string& hcode_path, const std::string& out_file) {
  mapping_result mr = read_hcode(slurp(hcode_path));
  emit(out_file, write_syscode(expand_mapping(mr)));
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchical quantum program mapper"};
  app.require_subcommand(1);

  map_opts mo;
  CLI::App* map = app.add_subcommand("map", "map a program hierarchically");
  map->add_option("qasm", mo.qasm, "input program")->required();
  map->add_option("--arch", mo.arch, "architecture config file");
  map->add_option("--out", mo.out, "output directory");
  map->add_option("--code", mo.code, "system code flavor to write")
      ->check(CLI::IsMember({"compact", "expanded", "none"}));
  map->add_option("--bench", mo.bench, "benchmark label for the report");
  map->add_flag("--csv", mo.csv, "also write report.csv");

  flat_opts fo;
  CLI::App* mflat =
      app.add_subcommand("map-flat", "flatten, then map onto one region");
  mflat->add_option("qasm", fo.qasm, "input program")->required();
  mflat->add_option("--arch", fo.arch, "architecture config file");
  mflat->add_option("--out", fo.out, "output directory");
  mflat->add_option("--limit", fo.limit, "flattened instruction limit");
  mflat->add_option("--bench", fo.bench, "benchmark label for the report");
  mflat->add_flag("--csv", fo.csv, "also write report.csv");

  std::string fl_qasm, fl_out;
  uint64_t fl_limit = kDefaultFlattenLimit;
  CLI::App* flat = app.add_subcommand("flatten", "expand every call");
  flat->add_option("qasm", fl_qasm, "input program")->required();
  flat->add_option("--limit", fl_limit, "flattened instruction limit");
  flat->add_option("--out", fl_out, "output file (default stdout)");

  std::string g_family, g_out;
  uint64_t g_k = 10, g_n = 10, g_width = 4, g_depth = 2, g_fanout = 2,
           g_seed = 1;
  CLI::App* gen = app.add_subcommand("gen", "emit a benchmark program");
  gen->add_option("family", g_family, "repeat, nest, adder, mesh, random")
      ->required();
  gen->add_option("--k", g_k, "gates per module (repeat, nest)");
  gen->add_option("--n", g_n, "call count (repeat)");
  gen->add_option("--width", g_width, "register width (repeat, adder, mesh)");
  gen->add_option("--depth", g_depth, "nesting depth (nest) or rounds (mesh)");
  gen->add_option("--fanout", g_fanout, "calls per level (nest)");
  gen->add_option("--seed", g_seed, "rng seed (random)");
  gen->add_option("--out", g_out, "output file (default stdout)");

  std::string c_hier, c_flat;
  CLI::App* cmp = app.add_subcommand("compare", "hier vs flat reports");
  cmp->add_option("hier_report", c_hier, "hierarchical report file")
      ->required();
  cmp->add_option("flat_report", c_flat, "flat report file")->required();

  std::string v_code;
  CLI::App* verify =
      app.add_subcommand("verify", "replay system code through the oracle");
  verify->add_option("syscode", v_code, "expanded system code file")
      ->required();

  std::string s_qasm;
  CLI::App* stats =
      app.add_subcommand("stats", "modular vs flattened instruction counts");
  stats->add_option("qasm", s_qasm, "input program")->required();

  std::string e_hcode, e_out;
  CLI::App* expand =
      app.add_subcommand("expand", "expand compact system code");
  expand->add_option("hcode", e_hcode, "compact system code file")->required();
  expand->add_option("--out", e_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (map->parsed()) return run_map(mo);
    if (mflat->parsed()) return run_map_flat(fo);
    if (flat->parsed()) return run_flatten(fl_qasm, fl_limit, fl_out);
    if (gen->parsed())
      return run_gen(g_family, g_k, g_n, g_width, g_depth, g_fanout, g_seed,
                     g_out);
    if (cmp->parsed()) return run_compare(c_hier, c_flat);
    if (verify->parsed()) return run_verify(v_code);
    if (stats->parsed()) return run_stats(s_qasm);
    if (expand->parsed()) return run_expand(e_hcode, e_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
