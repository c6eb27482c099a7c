#include "pud/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "pud/error.hpp"
#include "pud/transpose.hpp"

namespace pud {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed: " + path);
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// One unsigned decimal per line; blank lines are skipped.
std::vector<std::uint64_t> read_values(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<std::uint64_t> values;
  std::size_t line_no = 0;
  for (std::string_view line : lines_of(text)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || end != line.data() + line.size())
      throw ParseError(line_no, path + ": '" + std::string(line) + "' is not an unsigned decimal");
    values.push_back(v);
  }
  return values;
}

std::string values_text(const std::vector<std::uint64_t>& values) {
  std::string s;
  for (std::uint64_t v : values) s += std::to_string(v) + "\n";
  return s;
}

// Options shared by every verb that reads configuration.
struct ConfigOptions {
  std::string path;
  std::vector<std::string> sets;

  void attach(CLI::App* app) {
    app->add_option("--config", path, "key = value configuration file")->check(CLI::ExistingFile);
    app->add_option("--set", sets, "override one configuration key, as key=value");
  }

  // Configuration problems are usage errors.
  RunConfig load() const {
    try {
      RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
      for (const std::string& s : sets) {
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) throw ParseError(0, "--set expects key=value, got '" + s + "'");
        cfg.set(trim(std::string_view(s).substr(0, eq)), std::string_view(s).substr(eq + 1));
      }
      cfg.validate();
      return cfg;
    } catch (const Error& e) {
      throw CLI::ValidationError("config", e.what());
    }
  }
};

void print_cost(std::ostream& out, const CostReport& c) {
  out << "aap " << c.aap << "\ntra " << c.tra << "\nactivations " << c.activations << "\n"
      << "latency_ns " << c.latency_ns << "\nenergy_pj " << c.energy_pj << "\n"
      << "throughput_ops_per_s " << c.throughput_ops_per_s << "\n"
      << "(analytical estimate from placeholder cost parameters, not hardware-calibrated)\n";
}

std::vector<std::string> op_names() {
  std::vector<std::string> names;
  for (OpKind k : kAllOps) names.emplace_back(to_string(k));
  return names;
}

int cmd_compile(const std::string& op_name, unsigned width, unsigned n_inputs, unsigned effort,
                const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
  const OpKind kind = *parse_op(op_name);
  const CompiledOp op = compile_op(kind, width, cfg.subarray, effort, n_inputs);
  write_file(out_path, to_text(op.program()));
  const SynthesisReport& r = op.report;
  out << "op " << op_name << "\nwidth " << width << "\n";
  if (is_n_input(kind)) out << "inputs " << n_inputs << "\n";
  out << "effort " << effort << "\n"
      << "nodes " << r.node_count_before << " -> " << r.node_count_after << "\n"
      << "depth " << r.depth_before << " -> " << r.depth_after << "\n"
      << "estimated_activations " << r.estimated_activations_before << " -> " << r.estimated_activations_after
      << "\n"
      << "data_rows " << op.program().header.data_rows << "\n";
  if (op.kept_unoptimized) out << "note: optimized graph scheduled worse; kept the unoptimized program\n";
  print_cost(out, estimate(op.program(), cfg.cost));
  out << "verified " << op.verified_lanes << " lanes" << (op.verified_exhaustively ? " (exhaustive)" : "")
      << "\nwrote " << out_path << "\n";
  return kExitOk;
}

int cmd_run(const std::string& program_path, const std::vector<std::string>& input_paths,
            const std::string& out_path, bool serial, const RunConfig& cfg, std::ostream& out) {
  const MicroProgram program = parse_program(read_file(program_path));
  const auto kind = parse_op(program.header.op_name);
  if (!kind) throw ValidationError("program names unknown op '" + program.header.op_name + "'");
  const unsigned n = is_n_input(*kind) ? static_cast<unsigned>(input_paths.size()) : kDefaultNInputs;
  const OpSignature sig = signature(*kind, program.header.width, n);

  std::vector<std::vector<std::uint64_t>> inputs;
  for (const std::string& p : input_paths) inputs.push_back(read_values(p));
  const auto outputs =
      execute_program(program, sig, inputs, cfg.subarray, serial ? ExecPolicy::Serial : ExecPolicy::Parallel);

  write_file(out_path, values_text(outputs[0]));
  out << "lanes " << (inputs.empty() ? 0 : inputs[0].size()) << "\n";
  print_cost(out, estimate(program, cfg.cost));
  out << "wrote " << out_path << "\n";
  for (std::size_t k = 1; k < outputs.size(); ++k) {
    const std::string extra = out_path + "." + std::to_string(k);
    write_file(extra, values_text(outputs[k]));
    out << "wrote " << extra << "\n";
  }
  return kExitOk;
}

int cmd_bench(const RunConfig& cfg, const std::vector<unsigned>& widths, unsigned effort,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
  std::vector<std::string> failures;
  const std::vector<BenchRow> rows = bench_table(cfg, widths, effort, failures);
  std::ostringstream csv;
  write_bench_csv(csv, rows);
  if (out_path.empty()) out << csv.str();
  else write_file(out_path, csv.str());
  for (const std::string& f : failures) err << "compile failed: " << f << "\n";
  return failures.empty() ? kExitOk : kExitFailure;
}

int cmd_classify(const std::string& csv_path, const std::string& out_path, const RunConfig& cfg, std::ostream& out) {
  const std::vector<MetricsRecord> records = ingest_csv(csv_path);
  std::ostringstream csv;
  write_classified_csv(csv, records, cfg.classify);
  if (out_path.empty()) out << csv.str();
  else write_file(out_path, csv.str());
  return kExitOk;
}

// Forward: values -> one '0'/'1' line per bit row, LSB row first.
// Inverse: such rows -> values.
int cmd_transpose(const std::string& in_path, unsigned width, bool inverse, const std::string& out_path,
                  std::ostream& out) {
  if (width < 1 || width > kMaxValueWidth) throw ValidationError("width must lie in 1..64");
  std::string result;
  const auto config_for = [&](std::size_t columns) {
    SubarrayConfig cfg;
    cfg.columns = static_cast<std::uint32_t>(std::max<std::size_t>(columns, 1));
    cfg.data_rows = width;
    cfg.reserved_base = width;
    cfg.total_rows = width + SubarrayConfig::kReservedRows;
    return cfg;
  };
  if (!inverse) {
    const std::vector<std::uint64_t> values = read_values(in_path);
    if (values.empty()) {
      result = "";
    } else {
      Subarray s(config_for(values.size()));
      to_vertical({values, width}, s, 0);
      result = s.dump(0, width);
    }
  } else {
    std::vector<std::string_view> rows;
    const std::string text = read_file(in_path);
    for (std::string_view l : lines_of(text))
      if (!trim(l).empty()) rows.push_back(trim(l));
    if (!rows.empty()) {
      if (rows.size() != width)
        throw ValidationError("expected " + std::to_string(width) + " bit rows, got " + std::to_string(rows.size()));
      Subarray s(config_for(rows[0].size()));
      for (std::uint32_t i = 0; i < width; ++i) {
        if (rows[i].size() != rows[0].size()) throw ParseError(i + 1, "bit rows differ in length");
        std::vector<bool> bits;
        for (char c : rows[i]) {
          if (c != '0' && c != '1') throw ParseError(i + 1, "bit rows may contain only 0 and 1");
          bits.push_back(c == '1');
        }
        s.write_row(Row::data(i), bits);
      }
      result = values_text(to_horizontal(s, 0, width, static_cast<std::uint32_t>(rows[0].size())).values);
    }
  }
  if (out_path.empty()) out << result;
  else write_file(out_path, result);
  return kExitOk;
}

}  // namespace

std::vector<BenchRow> bench_table(const RunConfig& cfg, const std::vector<unsigned>& widths, unsigned effort,
                                  std::vector<std::string>& failures) {
  std::vector<BenchRow> rows;
  for (OpKind kind : kAllOps)
    for (unsigned w : widths) {
      try {
        const CompiledOp base = compile_op(kind, w, cfg.subarray, 0);
        const CompiledOp opt = compile_op(kind, w, cfg.subarray, effort);
        rows.push_back({kind, w, estimate(base.program(), cfg.cost), estimate(opt.program(), cfg.cost),
                        opt.kept_unoptimized});
      } catch (const Error& e) {
        failures.push_back(std::string(to_string(kind)) + " " + std::to_string(w) + ": " + e.what());
      }
    }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "op,width,activations_e0,activations_opt,activation_ratio,latency_ns_e0,latency_ns_opt,"
         "energy_pj_e0,energy_pj_opt,throughput_ratio,energy_efficiency_ratio,kept_unoptimized\n";
  const auto ratio = [](std::optional<double> r) {
    std::ostringstream s;
    if (r) s << std::fixed << std::setprecision(4) << *r;
    else s << "undefined";
    return s.str();
  };
  for (const BenchRow& r : rows) {
    const CostRatio speed = compare(r.optimized, r.base);  // throughput opt / base
    const CostRatio energy = compare(r.base, r.optimized);  // energy base / opt
    const std::optional<double> act =
        r.optimized.activations == 0
            ? std::nullopt
            : std::optional<double>(static_cast<double>(r.base.activations) / static_cast<double>(r.optimized.activations));
    out << to_string(r.kind) << ',' << r.width << ',' << r.base.activations << ',' << r.optimized.activations << ','
        << ratio(act) << ',' << r.base.latency_ns << ',' << r.optimized.latency_ns << ',' << r.base.energy_pj << ','
        << r.optimized.energy_pj << ',' << ratio(speed.throughput) << ',' << ratio(energy.energy) << ','
        << (r.kept_unoptimized ? 1 : 0) << '\n';
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bulk bitwise in-DRAM computing toolchain"};
  app.name("pudc");
  app.require_subcommand(1);

  const std::vector<std::string> ops = op_names();

  std::string op_name, out_path, program_path, csv_path, in_path;
  unsigned width = 0, n_inputs = kDefaultNInputs, effort = 2;
  std::vector<std::string> input_paths;
  std::vector<unsigned> widths = {4, 8, 16, 32};
  bool serial = false, inverse = false;
  ConfigOptions config;

  CLI::App* compile = app.add_subcommand("compile", "compile one operation to a .up program");
  compile->add_option("--op", op_name, "operation name")->required()->check(CLI::IsMember(ops));
  compile->add_option("--width", width, "operand width in bits")->required()->check(CLI::Range(1u, kMaxOpWidth));
  compile->add_option("--inputs", n_inputs, "operand count for and_n/or_n/xor_n")->check(CLI::Range(2u, 64u));
  compile->add_option("--effort", effort, "optimization effort (0 = none)")->check(CLI::Range(0u, 2u));
  compile->add_option("-o,--output", out_path, "program file to write")->required();
  config.attach(compile);

  CLI::App* run = app.add_subcommand("run", "execute a .up program on operand files");
  run->add_option("program", program_path, "program file")->required()->check(CLI::ExistingFile);
  run->add_option("inputs", input_paths, "operand files, one unsigned decimal per line")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("-o,--output", out_path, "result file; further outputs go to <file>.1, <file>.2, ...")
      ->required();
  run->add_flag("--serial", serial, "use the serial reference kernels");
  config.attach(run);

  CLI::App* bench = app.add_subcommand("bench", "compile all operations at effort 0 and optimized; CSV report");
  bench->add_option("--widths", widths, "operand widths")->delimiter(',')->check(CLI::Range(1u, kMaxOpWidth));
  bench->add_option("--effort", effort, "optimized effort level")->check(CLI::Range(0u, 2u));
  bench->add_option("-o,--output", out_path, "CSV file (default: standard output)");
  config.attach(bench);

  CLI::App* cls = app.add_subcommand("classify", "label functions in a metrics CSV with bottleneck classes");
  cls->add_option("csv", csv_path, "metrics CSV")->required()->check(CLI::ExistingFile);
  cls->add_option("-o,--output", out_path, "CSV file (default: standard output)");
  config.attach(cls);

  CLI::App* tr = app.add_subcommand("transpose", "convert values to bit rows, or back with --inverse");
  tr->add_option("input", in_path, "value file or bit-row file")->required()->check(CLI::ExistingFile);
  tr->add_option("--width", width, "value width in bits")->required()->check(CLI::Range(1u, kMaxOpWidth));
  tr->add_flag("--inverse", inverse, "read bit rows, write values");
  tr->add_option("-o,--output", out_path, "output file (default: standard output)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto used = app.get_subcommands();
    out << (used.empty() ? app.help() : used.front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "pudc: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (compile->parsed()) return cmd_compile(op_name, width, n_inputs, effort, config.load(), out_path, out);
    if (run->parsed()) return cmd_run(program_path, input_paths, out_path, serial, config.load(), out);
    if (bench->parsed()) return cmd_bench(config.load(), widths, effort, out_path, out, err);
    if (cls->parsed()) return cmd_classify(csv_path, out_path, config.load(), out);
    if (tr->parsed()) return cmd_transpose(in_path, width, inverse, out_path, out);
  } catch (const CLI::ParseError& e) {
    err << "pudc: " << e.what() << "\n";
    return kExitUsage;
  } catch (const HeaderError& e) {
    err << "pudc: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CapacityError& e) {
    err << "pudc: capacity: " << e.what() << "\n";
    return kExitData;
  } catch (const ParseError& e) {
    err << "pudc: " << e.what() << "\n";
    return kExitData;
  } catch (const ValidationError& e) {
    err << "pudc: " << e.what() << "\n";
    return kExitData;
  } catch (const ArityError& e) {
    err << "pudc: " << e.what() << "\n";
    return kExitData;
  } catch (const ExecutionError& e) {
    err << "pudc: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "pudc: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace pud
