#include "cli.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <CLI11.hpp>

#include "bench.hpp"
#include "noisewarp/evaluation.hpp"
#include "noisewarp/flows.hpp"
#include "noisewarp/hiwyn.hpp"
#include "noisewarp/io.hpp"
#include "noisewarp/partition.hpp"
#include "noisewarp/warp.hpp"

namespace fs = std::filesystem;

namespace noisewarp::cli {

namespace {

std::uint64_t parse_u64(const std::string& text, const char* what) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw std::invalid_argument(std::string("bad ") + what + ": '" + text + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, sep);) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> values;
  for (const auto& part : split(text, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw std::invalid_argument("bad number: '" + part + "'");
    values.push_back(v);
  }
  return values;
}

void require_matching(const NoiseTensor& noise, const FlowField& flow) {
  if (!(noise.shape() == flow.shape())) {
    throw std::invalid_argument("flow resolution " + flow.shape().to_string() +
                                " does not match noise resolution " + noise.shape().to_string());
  }
}

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string shape, out;
  std::size_t channels = 1;
  std::uint64_t seed = 0;
};

void run_gen(const GenArgs& a) {
  if (a.channels == 0) throw std::invalid_argument("--channels must be positive");
  write_tensor(make_prior_noise(parse_shape(a.shape), a.channels, a.seed), a.out);
}

// ---------------------------------------------------------------- warp

struct WarpArgs {
  std::string in, flow, out, method = "grid", pgm;
  std::size_t upsample = 8;
  std::uint64_t seed = 0;
  bool negate = false;
};

NoiseTensor warp_one(const NoiseTensor& noise, const FlowField& flow, const std::string& method,
                     std::size_t upsample, std::uint64_t seed) {
  require_matching(noise, flow);
  if (method == "grid") return warp_noise(noise, build_grid_partition(flow), seed).warped;
  if (method == "particle") {
    return warp_noise(noise, build_partition(flow, PartitionMethod::particle), seed).warped;
  }
  if (method == "hiwyn") return hiwyn_warp(noise, flow, upsample, seed).warped;
  if (method == "bilinear") return warp_interpolated(noise, flow, InterpMode::bilinear);
  if (method == "bicubic") return warp_interpolated(noise, flow, InterpMode::bicubic);
  if (method == "nearest") return warp_interpolated(noise, flow, InterpMode::nearest);
  throw std::invalid_argument("unknown method '" + method + "'");
}

void run_warp(const WarpArgs& a) {
  const NoiseTensor noise = read_tensor(a.in);
  FlowField flow = read_flow(a.flow);
  if (a.negate) flow = flow.negated();
  const NoiseTensor out = warp_one(noise, flow, a.method, a.upsample, a.seed);
  write_tensor(out, a.out);
  if (!a.pgm.empty()) export_pgm(out, a.pgm);
}

// ---------------------------------------------------------------- warp-seq

struct WarpSeqArgs {
  std::string in, flow_dir, out_dir, method = "grid";
  std::uint64_t seed = 0;
  bool negate = false;
};

void run_warp_seq(const WarpSeqArgs& a) {
  if (a.method != "grid" && a.method != "particle") {
    throw std::invalid_argument("warp-seq method must be grid or particle");
  }
  if (!fs::is_directory(a.flow_dir)) throw std::invalid_argument("not a directory: " + a.flow_dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.flow_dir)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".flo" || ext == ".nwt")) files.push_back(entry.path());
  }
  if (files.empty()) throw std::invalid_argument("no .flo or .nwt files in " + a.flow_dir);
  std::sort(files.begin(), files.end());

  const NoiseTensor prior = read_tensor(a.in);
  std::vector<FlowField> flows;
  for (const auto& f : files) {
    flows.push_back(a.negate ? read_flow(f).negated() : read_flow(f));
    require_matching(prior, flows.back());
  }
  const auto method = a.method == "grid" ? PartitionMethod::grid : PartitionMethod::particle;
  const auto frames = warp_sequence(prior, flows, method, a.seed);
  fs::create_directories(a.out_dir);
  for (std::size_t k = 0; k < frames.size(); ++k) {
    std::ostringstream name;
    name << "frame_" << std::setw(5) << std::setfill('0') << k << ".nwt";
    write_tensor(frames[k], fs::path(a.out_dir) / name.str());
  }
  std::cout << "wrote " << frames.size() << " frames to " << a.out_dir << "\n";
}

// ---------------------------------------------------------------- warp3d

struct Warp3dArgs {
  std::string in, flow, out;
  std::uint64_t seed = 0;
  bool negate = false;
};

void run_warp3d(const Warp3dArgs& a) {
  const NoiseTensor noise = read_tensor(a.in);
  if (noise.shape().rank() != 3) throw std::invalid_argument("warp3d needs a 3D noise tensor");
  FlowField flow = read_flow(a.flow);
  if (a.negate) flow = flow.negated();
  require_matching(noise, flow);
  write_tensor(warp_noise(noise, build_particle_partition_3d(flow), a.seed).warped, a.out);
}

// ---------------------------------------------------------------- stats

struct StatsArgs {
  std::string in, format = "text";
};

void run_stats(const StatsArgs& a) {
  const NoiseTensor t = read_tensor(a.in);
  std::vector<std::pair<std::size_t, StatReport>> reports;
  for (std::size_t c = 0; c < t.channels(); ++c) {
    reports.emplace_back(c, ks_test_standard_normal(t.channel(c)));
    if (t.shape().rank() == 2) {
      reports.emplace_back(c, morans_i(t.channel(c), t.shape()[0], t.shape()[1]));
    }
  }
  if (a.format == "csv") {
    std::cout << "channel,test,statistic,p_value,n\n";
    for (const auto& [c, r] : reports) {
      std::cout << c << ',' << r.test << ',' << fmt(r.statistic) << ',' << fmt(r.p_value) << ','
                << r.sample_size << '\n';
    }
  } else {
    for (const auto& [c, r] : reports) {
      std::cout << "channel " << c << "  " << std::left << std::setw(8) << r.test
                << " statistic " << std::setw(12) << fmt(r.statistic) << " p " << std::setw(12)
                << fmt(r.p_value) << " n " << r.sample_size << '\n';
    }
  }
}

// ---------------------------------------------------------------- converge

struct ConvergeArgs {
  std::string levels = "2,4,8,16,64", flow, format = "text";
  std::size_t runs = 20000;
  std::uint64_t seed = 0;
  std::size_t size = 8;
};

void run_converge(const ConvergeArgs& a) {
  std::vector<std::size_t> levels;
  for (const auto& part : split(a.levels, ',')) {
    const auto n = parse_u64(part, "level");
    if (n == 0) throw std::invalid_argument("levels must be >= 1");
    levels.push_back(n);
  }
  const auto n = static_cast<std::int64_t>(a.size);
  const FlowField flow = a.flow.empty() ? default_convergence_flow(Shape{n, n}) : read_flow(a.flow);
  const NoiseTensor prior = make_prior_noise(flow.shape(), 1, derive_seed(a.seed, 0));
  const auto result = convergence_experiment(prior, flow, levels, a.runs, derive_seed(a.seed, 1));
  if (a.format == "csv") {
    std::cout << "N,mean_w,max_w\n";
    for (const auto& row : result.rows) {
      std::cout << row.level << ',' << fmt(row.mean_w) << ',' << fmt(row.max_w) << '\n';
    }
    std::cout << "self," << fmt(result.self_mean_w) << ',' << fmt(result.self_max_w) << '\n';
  } else {
    std::cout << "runs " << a.runs << ", grid " << flow.shape().to_string() << "\n";
    std::cout << std::left << std::setw(8) << "N" << std::setw(14) << "mean W" << "max W\n";
    for (const auto& row : result.rows) {
      std::cout << std::setw(8) << row.level << std::setw(14) << fmt(row.mean_w) << fmt(row.max_w)
                << '\n';
    }
    std::cout << std::setw(8) << "self" << std::setw(14) << fmt(result.self_mean_w)
              << fmt(result.self_max_w) << '\n';
  }
}

// ---------------------------------------------------------------- bench

void run_bench_cmd(const BenchConfig& config) {
  const BenchStats s = run_bench(config);
  const double mib = 1024.0 * 1024.0;
  std::cout << "method " << config.method;
  if (config.method == "hiwyn") std::cout << " (N=" << config.upsample << ")";
  std::cout << ", " << config.size << "x" << config.size << ", " << s.reps << " reps, "
            << omp_get_max_threads() << " threads\n"
            << "median " << fmt(s.median_ms) << " ms, mean " << fmt(s.mean_ms) << " ms, min "
            << fmt(s.min_ms) << " ms, MAD " << fmt(s.mad_ms) << " ms\n"
            << "kernel peak heap " << fmt(static_cast<double>(s.kernel_peak_bytes) / mib)
            << " MiB, peak resident " << fmt(static_cast<double>(s.max_rss_bytes) / mib)
            << " MiB\n";
}

// ---------------------------------------------------------------- make-flow

struct MakeFlowArgs {
  std::string kind = "zero", shape, out, disp, point;
  double angle = 1.0, sigma = 0.0, kappa = 0.1, amplitude = 1.0;
  std::uint64_t seed = 0;
};

void run_make_flow(const MakeFlowArgs& a) {
  const Shape shape = parse_shape(a.shape);
  auto vec_or = [&](const std::string& text, double fallback_scale) {
    if (!text.empty()) return parse_doubles(text);
    std::vector<double> v;
    for (std::size_t k = 0; k < shape.rank(); ++k) v.push_back(fallback_scale * shape[k]);
    return v;
  };
  auto check_len = [&](const std::vector<double>& v) {
    if (v.size() != shape.rank()) throw std::invalid_argument("vector length must equal rank");
  };
  FlowField flow(shape);
  if (a.kind == "zero") {
  } else if (a.kind == "uniform") {
    const auto d = vec_or(a.disp, 0.0);
    check_len(d);
    flow = uniform_flow(shape, d);
  } else if (a.kind == "vortex") {
    const double sigma = a.sigma > 0 ? a.sigma : static_cast<double>(shape[0]) / 4.0;
    flow = vortex_flow(shape, a.angle, sigma);
  } else if (a.kind == "shear") {
    flow = shear_flow(shape, a.kappa);
  } else if (a.kind == "collapse") {
    const auto p = vec_or(a.point, 0.5);
    check_len(p);
    flow = collapse_flow(shape, p);
  } else if (a.kind == "random") {
    flow = random_smooth_flow(shape, a.amplitude, a.seed);
  } else {
    throw std::invalid_argument("unknown flow kind '" + a.kind + "'");
  }
  write_flow(flow, a.out);
}

// ---------------------------------------------------------------- pgm

struct PgmArgs {
  std::string in, out;
  std::size_t channel = 0;
  double clip_sigma = 3.0;
};

void run_pgm(const PgmArgs& a) {
  const NoiseTensor t = read_tensor(a.in);
  if (a.channel >= t.channels()) throw std::invalid_argument("channel out of range");
  const auto plane = t.channel(a.channel);
  export_pgm(NoiseTensor(t.shape(), 1, std::vector<double>(plane.begin(), plane.end())), a.out,
             a.clip_sigma);
}

}  // namespace

Shape parse_shape(const std::string& text) {
  std::vector<std::int64_t> extents;
  for (const auto& part : split(text, 'x')) {
    const auto e = parse_u64(part, "shape");
    if (e == 0 || e > (std::uint64_t{1} << 31)) throw std::invalid_argument("bad shape '" + text + "'");
    extents.push_back(static_cast<std::int64_t>(e));
  }
  return Shape(extents);
}

FlowField default_convergence_flow(const Shape& shape) {
  return vortex_flow(shape, 1.0, static_cast<double>(shape[0]) / 4.0);
}

void apply_thread_env() {
  const char* env = std::getenv("NOISEWARP_THREADS");
  if (env == nullptr) return;
  const auto n = parse_u64(env, "NOISEWARP_THREADS");
  omp_set_num_threads(n == 0 ? omp_get_num_procs() : static_cast<int>(std::min<std::uint64_t>(n, 4096)));
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Gaussian noise warping toolkit", "noisewarp"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate i.i.d. N(0,1) prior noise");
  gen_cmd->add_option("--shape", gen.shape, "Extents, e.g. 128x128 or 16x16x16")->required();
  gen_cmd->add_option("--channels", gen.channels, "Channel count");
  gen_cmd->add_option("--seed", gen.seed, "Seed");
  gen_cmd->add_option("--out", gen.out, "Output tensor file")->required();

  WarpArgs warp;
  auto* warp_cmd = app.add_subcommand("warp", "Warp noise along one flow");
  warp_cmd->add_option("--in", warp.in, "Input noise tensor")->required();
  warp_cmd->add_option("--flow", warp.flow, "Flow (.flo or tensor file)")->required();
  warp_cmd->add_option("--method", warp.method)
      ->check(CLI::IsMember({"grid", "particle", "hiwyn", "bilinear", "bicubic", "nearest"}));
  warp_cmd->add_option("--upsample", warp.upsample, "Upsampling level for hiwyn");
  warp_cmd->add_option("--seed", warp.seed);
  warp_cmd->add_flag("--negate-flow", warp.negate, "Use the negated flow");
  warp_cmd->add_option("--out", warp.out, "Output tensor file")->required();
  warp_cmd->add_option("--pgm", warp.pgm, "Also write a PGM preview");

  WarpSeqArgs seq;
  auto* seq_cmd = app.add_subcommand("warp-seq", "Warp noise iteratively along a flow directory");
  seq_cmd->add_option("--in", seq.in, "Initial noise tensor")->required();
  seq_cmd->add_option("--flow-dir", seq.flow_dir, "Directory of flows, applied in name order")
      ->required();
  seq_cmd->add_option("--method", seq.method)->check(CLI::IsMember({"grid", "particle"}));
  seq_cmd->add_option("--seed", seq.seed);
  seq_cmd->add_flag("--negate-flow", seq.negate);
  seq_cmd->add_option("--out-dir", seq.out_dir, "Frame output directory")->required();

  Warp3dArgs w3;
  auto* w3_cmd = app.add_subcommand("warp3d", "Warp 3D noise with the particle variant");
  w3_cmd->add_option("--in", w3.in)->required();
  w3_cmd->add_option("--flow", w3.flow, "3D flow tensor file (one channel per axis)")->required();
  w3_cmd->add_option("--seed", w3.seed);
  w3_cmd->add_flag("--negate-flow", w3.negate);
  w3_cmd->add_option("--out", w3.out)->required();

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "K-S and Moran's I report");
  stats_cmd->add_option("--in", stats.in)->required();
  stats_cmd->add_option("--format", stats.format)->check(CLI::IsMember({"text", "csv"}));

  ConvergeArgs conv;
  auto* conv_cmd = app.add_subcommand("converge", "W2 distance of upsampling warp vs bridge warp");
  conv_cmd->add_option("--runs", conv.runs);
  conv_cmd->add_option("--levels", conv.levels, "Comma-separated upsampling levels");
  conv_cmd->add_option("--size", conv.size, "Grid side when no --flow is given");
  conv_cmd->add_option("--flow", conv.flow, "Flow file; defaults to a smooth vortex");
  conv_cmd->add_option("--seed", conv.seed);
  conv_cmd->add_option("--format", conv.format)->check(CLI::IsMember({"text", "csv"}));

  BenchConfig bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time one warp kernel");
  bench_cmd->add_option("--size", bench.size, "Grid side");
  bench_cmd->add_option("--reps", bench.reps, "Timed repetitions");
  bench_cmd->add_option("--method", bench.method)
      ->check(CLI::IsMember({"grid", "particle", "hiwyn"}));
  bench_cmd->add_option("--upsample", bench.upsample);
  bench_cmd->add_option("--seed", bench.seed);

  MakeFlowArgs mf;
  auto* mf_cmd = app.add_subcommand("make-flow", "Write a synthetic flow field");
  mf_cmd->add_option("--kind", mf.kind)
      ->check(CLI::IsMember({"zero", "uniform", "vortex", "shear", "collapse", "random"}));
  mf_cmd->add_option("--shape", mf.shape)->required();
  mf_cmd->add_option("--disp", mf.disp, "uniform: comma-separated displacement per axis");
  mf_cmd->add_option("--point", mf.point, "collapse: target point per axis");
  mf_cmd->add_option("--angle", mf.angle, "vortex: peak rotation in radians");
  mf_cmd->add_option("--sigma", mf.sigma, "vortex: radius in pixels");
  mf_cmd->add_option("--kappa", mf.kappa, "shear: rate");
  mf_cmd->add_option("--amplitude", mf.amplitude, "random: peak displacement");
  mf_cmd->add_option("--seed", mf.seed);
  mf_cmd->add_option("--out", mf.out, ".flo or tensor file")->required();

  PgmArgs pgm;
  auto* pgm_cmd = app.add_subcommand("pgm", "Export one channel of a 2D tensor as PGM");
  pgm_cmd->add_option("--in", pgm.in)->required();
  pgm_cmd->add_option("--out", pgm.out)->required();
  pgm_cmd->add_option("--channel", pgm.channel);
  pgm_cmd->add_option("--clip-sigma", pgm.clip_sigma);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    apply_thread_env();
    if (*gen_cmd) run_gen(gen);
    else if (*warp_cmd) run_warp(warp);
    else if (*seq_cmd) run_warp_seq(seq);
    else if (*w3_cmd) run_warp3d(w3);
    else if (*stats_cmd) run_stats(stats);
    else if (*conv_cmd) run_converge(conv);
    else if (*bench_cmd) run_bench_cmd(bench);
    else if (*mf_cmd) run_make_flow(mf);
    else if (*pgm_cmd) run_pgm(pgm);
  } catch (const InvariantError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace noisewarp::cli
