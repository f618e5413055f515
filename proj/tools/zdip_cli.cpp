// zdip command-line harness: null-table generation, single-sample testing,
// threshold calibration, and the synthetic validation experiments, all
// emitted as CSV/JSON with an embedded reproducibility manifest.

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zdip/zdip.hpp"

using nlohmann::json;

namespace {

// wrong/unreadable user input -> exit 2
struct UsageError {
  std::string message;
};

// unreadable/unwritable table file -> exit 3 (parse errors carry their own
// zdip error classes)
struct TableFileError {
  std::string message;
};

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::uint64_t random_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string iso8601_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string checksum_hex(std::uint64_t checksum) {
  char hex[17];
  for (int i = 0; i < 16; ++i) {
    hex[15 - i] = "0123456789abcdef"[(checksum >> (4 * i)) & 0xF];
  }
  hex[16] = '\0';
  return std::string("fnv1a64:") + hex;
}

struct LoadedTable {
  zdip::NullTable table;
  std::string path;
  std::string checksum;
};

LoadedTable load_table_checked(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TableFileError{"cannot open table file: " + path};
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  LoadedTable loaded;
  loaded.table = zdip::parse_table(bytes);
  loaded.path = path;
  loaded.checksum = checksum_hex(zdip::fnv1a64(bytes));
  return loaded;
}

// The manifest accompanies every run on stderr (with timestamp) and is
// embedded in result files as a comment (without timestamp, so reruns are
// byte-identical).
json manifest_base(const std::string& command) {
  json m;
  m["command"] = command;
  m["tool_version"] = zdip::library_version;
  m["rng"] = zdip::RandomStream::generator_name();
  m["parameters"] = json::object();
  return m;
}

void attach_table(json& manifest, const LoadedTable& loaded) {
  manifest["table"] = {{"path", loaded.path}, {"checksum", loaded.checksum}};
}

void print_manifest(const json& manifest) {
  json full = manifest;
  full["timestamp"] = iso8601_now();
  std::cerr << "manifest: " << full.dump() << "\n";
}

std::string embedded_manifest_line(const json& manifest) {
  return "# manifest: " + manifest.dump() + "\n";
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw zdip::Error("cannot open " + out_path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw zdip::Error("failed writing " + out_path);
}

// ---- data file reader ------------------------------------------------------

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view s, double& v) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

// Newline-separated floats; blank lines and '#' comments ignored. With
// column > 0, reads that 1-based field of delimiter-separated rows instead
// (a non-numeric first row is treated as a header and skipped).
std::vector<double> read_values(const std::string& path, int column,
                                char delimiter) {
  std::ifstream in(path);
  if (!in) throw UsageError{"cannot open input file: " + path};
  std::vector<double> values;
  std::string line;
  int line_number = 0;
  bool first_data_line = true;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;

    std::string_view field = body;
    if (column > 0) {
      int seen = 0;
      std::size_t pos = 0;
      std::string_view remaining = body;
      field = {};
      while (true) {
        std::size_t cut = remaining.find(delimiter, pos);
        const std::string_view candidate =
            remaining.substr(pos, cut == std::string_view::npos ? cut : cut - pos);
        ++seen;
        if (seen == column) {
          field = trim(candidate);
          break;
        }
        if (cut == std::string_view::npos) break;
        pos = cut + 1;
      }
      if (seen < column) {
        throw UsageError{"line " + std::to_string(line_number) + ": column " +
                         std::to_string(column) + " not present (only " +
                         std::to_string(seen) + " fields)"};
      }
    }

    double v = 0.0;
    if (!parse_double(field, v)) {
      if (column > 0 && first_data_line) {
        first_data_line = false;  // header row
        continue;
      }
      throw UsageError{"line " + std::to_string(line_number) +
                       ": cannot parse \"" + std::string(field) +
                       "\" as a number"};
    }
    first_data_line = false;
    values.push_back(v);
  }
  if (values.empty()) {
    throw UsageError{"no data values found in " + path};
  }
  return values;
}

// ---- tiny fit helpers (scaling command) -----------------------------------

double mean_of(const std::vector<double>& v) {
  long double acc = 0.0L;
  for (double x : v) acc += x;
  return static_cast<double>(acc / static_cast<long double>(v.size()));
}

struct FitResult {
  double alpha = 0.0;
  double r_squared = 0.0;
};

FitResult fit_log_log(const std::vector<double>& ns,
                      const std::vector<double>& zs) {
  std::vector<double> lx(ns.size()), ly(zs.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    lx[i] = std::log(ns[i]);
    ly[i] = std::log(zs[i]);
  }
  const double mx = mean_of(lx), my = mean_of(ly);
  long double sxy = 0.0L, sxx = 0.0L, syy = 0.0L;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const long double dx = lx[i] - mx, dy = ly[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  FitResult fit;
  fit.alpha = static_cast<double>(sxy / sxx);
  fit.r_squared = static_cast<double>((sxy * sxy) / (sxx * syy));
  return fit;
}

// ---- subcommands -----------------------------------------------------------

int cmd_tablegen(const std::string& profile, std::int64_t replicates,
                 std::uint64_t seed, const std::string& out_path,
                 unsigned threads) {
  const std::vector<std::int64_t> grid =
      profile == "paper" ? zdip::default_grid() : zdip::fast_grid();
  if (replicates <= 0) {
    replicates = profile == "paper" ? zdip::default_replicates
                                    : zdip::fast_replicates;
  }

  json manifest = manifest_base("tablegen");
  manifest["parameters"] = {{"profile", profile},
                            {"replicates", replicates},
                            {"seed", seed},
                            {"grid_points", grid.size()},
                            {"out", out_path}};
  print_manifest(manifest);

  const zdip::NullTable table = zdip::generate_table(
      grid, replicates, seed, threads,
      [](std::size_t done, std::size_t total, std::int64_t n) {
        if (done == total || done % 10 == 0) {
          std::cerr << "tablegen: " << done << "/" << total << " (n = " << n
                    << ")\n";
        }
      });
  const std::string bytes = zdip::serialize_table(table);
  write_output(out_path, bytes);
  std::cerr << "tablegen: wrote " << out_path << " ("
            << checksum_hex(zdip::fnv1a64(bytes)) << ")\n";
  return 0;
}

int cmd_test(const std::string& input_path, const std::string& table_path,
             std::int64_t pvalue_replicates,
             const std::vector<std::int64_t>& downsample, double threshold,
             std::uint64_t seed, bool seed_was_random, int column,
             char delimiter, unsigned threads) {
  const LoadedTable loaded = load_table_checked(table_path);
  const zdip::Sample sample =
      zdip::canonicalize(read_values(input_path, column, delimiter));

  json manifest = manifest_base("test");
  manifest["parameters"] = {{"input", input_path},
                            {"threshold", threshold},
                            {"seed", seed},
                            {"seed_was_random", seed_was_random},
                            {"column", column},
                            {"delimiter", std::string(1, delimiter)},
                            {"pvalue_replicates", pvalue_replicates}};
  if (!downsample.empty()) {
    manifest["parameters"]["downsample"] = {{"subsample_size", downsample[0]},
                                            {"iterations", downsample[1]}};
  }
  attach_table(manifest, loaded);
  print_manifest(manifest);

  zdip::ZDipReport report;
  if (!downsample.empty()) {
    zdip::DownsampleConfig cfg;
    cfg.subsample_size = downsample[0];
    cfg.iterations = downsample[1];
    cfg.seed = seed;
    report = zdip::downsampled_zdip(sample, loaded.table, cfg, threshold);
  } else {
    report = zdip::zdip(sample, loaded.table, threshold);
  }
  if (pvalue_replicates > 0) {
    report.p_value =
        zdip::dip_p_value(sample, pvalue_replicates,
                          zdip::derive_seed(seed, "pvalue"), threads);
  }

  json j;
  j["n"] = report.n;
  j["dip"] = report.dip;
  j["mu"] = report.mu;
  j["sigma"] = report.sigma;
  j["z"] = report.z;
  if (report.p_value) {
    j["p_value"] = *report.p_value;
  } else {
    j["p_value"] = nullptr;
  }
  j["threshold"] = report.threshold;
  j["is_multimodal"] = report.is_multimodal;
  j["extrapolated"] = report.extrapolated;
  j["iterations"] = report.iterations;
  j["per_iteration_z"] = report.per_iteration_z;
  std::cout << j.dump(2) << "\n";

  std::cerr << "decision: " << (report.is_multimodal ? "multimodal" : "unimodal")
            << " (z = " << format_double(report.z)
            << (report.is_multimodal ? " > " : " <= ")
            << format_double(report.threshold);
  if (report.iterations > 1) {
    std::cerr << "; mean over " << report.iterations << " subsamples";
  }
  std::cerr << ")\n";
  return 0;
}

int cmd_validate_synthetic(const std::string& table_path,
                           std::int64_t replications,
                           std::int64_t null_replicates, std::uint64_t seed,
                           const std::string& out_path, unsigned threads) {
  const LoadedTable loaded = load_table_checked(table_path);
  if (replications < 1) throw zdip::InvalidReplicates(replications, 1);
  if (null_replicates < 1) throw zdip::InvalidReplicates(null_replicates, 1);

  json manifest = manifest_base("validate-synthetic");
  manifest["parameters"] = {{"replications", replications},
                            {"null_replicates", null_replicates},
                            {"seed", seed},
                            {"out", out_path}};
  attach_table(manifest, loaded);
  print_manifest(manifest);

  // row layout of the published synthetic-validation table: the unimodal
  // block skips N = 300
  struct Block {
    const char* name;
    std::vector<std::int64_t> sizes;
  };
  const std::vector<Block> blocks = {
      {"unimodal", {50, 100, 200, 400, 500}},
      {"weak_bimodal", {50, 100, 200, 300, 400, 500}},
      {"strong_bimodal", {50, 100, 200, 300, 400, 500}},
      {"trimodal", {50, 100, 200, 300, 400, 500}},
  };

  // one shared null dip ensemble per sample size serves every p-value
  std::vector<std::int64_t> all_sizes;
  for (const Block& b : blocks) {
    for (std::int64_t n : b.sizes) all_sizes.push_back(n);
  }
  std::sort(all_sizes.begin(), all_sizes.end());
  all_sizes.erase(std::unique(all_sizes.begin(), all_sizes.end()),
                  all_sizes.end());
  struct NullRef {
    std::int64_t n;
    std::vector<double> sorted_dips;
  };
  std::vector<NullRef> null_refs;
  for (std::int64_t n : all_sizes) {
    NullRef ref;
    ref.n = n;
    ref.sorted_dips = zdip::detail::null_dips(
        n, null_replicates, zdip::derive_seed(seed, "null-ref"), threads);
    std::sort(ref.sorted_dips.begin(), ref.sorted_dips.end());
    null_refs.push_back(std::move(ref));
  }
  auto null_ref_for = [&](std::int64_t n) -> const std::vector<double>& {
    for (const NullRef& ref : null_refs) {
      if (ref.n == n) return ref.sorted_dips;
    }
    throw zdip::Error("internal: missing null reference");
  };

  std::string csv = embedded_manifest_line(manifest);
  csv += "distribution,n,mean_z,frac_p_lt_05,frac_z_gt_threshold,agreement\n";

  zdip::DipWorkspace ws;
  std::size_t cell_index = 0;
  for (const Block& block : blocks) {
    const zdip::MixtureSpec spec = zdip::preset(block.name);
    for (std::int64_t n : block.sizes) {
      const zdip::NullLookup look = zdip::get_summary(loaded.table, n);
      const std::vector<double>& nulls = null_ref_for(n);
      long double z_acc = 0.0L;
      std::int64_t p_hits = 0, z_hits = 0, agree = 0;
      for (std::int64_t rep = 0; rep < replications; ++rep) {
        const zdip::Sample s = zdip::sample_mixture(
            spec, n,
            zdip::derive_seed(seed, "validate",
                              static_cast<std::uint64_t>(cell_index),
                              static_cast<std::uint64_t>(rep)));
        const double d =
            zdip::detail::dip_core(s.values().data(), static_cast<int>(n), ws)
                .dip;
        const double z = (d - look.mu) / look.sigma;
        const double p = zdip::reference_p_value(d, nulls);
        const bool by_p = p < 0.05;
        const bool by_z = z > zdip::default_threshold;
        z_acc += z;
        p_hits += by_p;
        z_hits += by_z;
        agree += by_p == by_z;
      }
      const auto frac = [&](std::int64_t hits) {
        return static_cast<double>(hits) / static_cast<double>(replications);
      };
      csv += block.name;
      csv += ',';
      csv += std::to_string(n);
      csv += ',';
      csv += format_double(static_cast<double>(z_acc / replications));
      csv += ',';
      csv += format_double(frac(p_hits));
      csv += ',';
      csv += format_double(frac(z_hits));
      csv += ',';
      csv += format_double(frac(agree));
      csv += '\n';
      ++cell_index;
      std::cerr << "validate-synthetic: " << block.name << " n = " << n
                << " done\n";
    }
  }
  write_output(out_path, csv);
  return 0;
}

int cmd_stability(const std::string& table_path, int points, std::int64_t min_n,
                  std::int64_t max_n, std::int64_t subsample_size,
                  std::int64_t iterations, std::uint64_t seed,
                  const std::string& out_path) {
  const LoadedTable loaded = load_table_checked(table_path);
  if (points < 2) throw UsageError{"--points must be at least 2"};
  if (min_n < 4 || max_n <= min_n) {
    throw UsageError{"need 4 <= min-n < max-n"};
  }

  json manifest = manifest_base("stability");
  manifest["parameters"] = {{"points", points},
                            {"min_n", min_n},
                            {"max_n", max_n},
                            {"subsample_size", subsample_size},
                            {"iterations", iterations},
                            {"seed", seed},
                            {"out", out_path}};
  attach_table(manifest, loaded);
  print_manifest(manifest);

  const std::vector<std::int64_t> grid = zdip::log_spaced(min_n, max_n, points);
  const std::vector<std::string> curves = {"strong_bimodal", "negligible_mode",
                                           "uniform"};

  std::string csv = embedded_manifest_line(manifest);
  csv += "distribution,n,mean_z\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const std::string& curve = curves[c];
    for (std::int64_t n : grid) {
      zdip::Sample sample = [&] {
        const std::uint64_t draw_seed =
            zdip::derive_seed(seed, "stability-sample",
                              static_cast<std::uint64_t>(c),
                              static_cast<std::uint64_t>(n));
        if (curve == "uniform") {
          zdip::RandomStream stream(draw_seed);
          std::vector<double> v(static_cast<std::size_t>(n));
          for (double& x : v) x = stream.uniform01();
          return zdip::canonicalize(std::move(v));
        }
        return zdip::sample_mixture(zdip::preset(curve), n, draw_seed);
      }();

      zdip::DownsampleConfig cfg;
      cfg.subsample_size = subsample_size;
      cfg.iterations = iterations;
      cfg.seed = zdip::derive_seed(seed, "stability-subsample",
                                   static_cast<std::uint64_t>(c),
                                   static_cast<std::uint64_t>(n));
      const zdip::ZDipReport r =
          zdip::downsampled_zdip(sample, loaded.table, cfg);
      csv += curve;
      csv += ',';
      csv += std::to_string(n);
      csv += ',';
      csv += format_double(r.z);
      csv += '\n';
    }
    std::cerr << "stability: " << curve << " done\n";
  }
  write_output(out_path, csv);
  return 0;
}

int cmd_scaling(const std::string& table_path, const std::string& preset_name,
                std::vector<std::int64_t> sizes, std::int64_t replications,
                std::uint64_t seed, const std::string& out_path) {
  const LoadedTable loaded = load_table_checked(table_path);
  if (replications < 2) throw zdip::InvalidReplicates(replications, 2);
  if (sizes.empty()) {
    sizes = {100, 200, 500, 1000, 2000, 5000, 10000};
  }
  const zdip::MixtureSpec spec = zdip::preset(preset_name);

  json manifest = manifest_base("scaling");
  manifest["parameters"] = {{"preset", preset_name},
                            {"sizes", sizes},
                            {"replications", replications},
                            {"seed", seed},
                            {"out", out_path}};
  attach_table(manifest, loaded);
  print_manifest(manifest);

  std::vector<double> mean_zs;
  std::string csv = embedded_manifest_line(manifest);
  csv += "n,mean_z\n";
  zdip::DipWorkspace ws;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const std::int64_t n = sizes[i];
    const zdip::NullLookup look = zdip::get_summary(loaded.table, n);
    long double acc = 0.0L;
    for (std::int64_t rep = 0; rep < replications; ++rep) {
      const zdip::Sample s = zdip::sample_mixture(
          spec, n,
          zdip::derive_seed(seed, "scaling", static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(rep)));
      const double d =
          zdip::detail::dip_core(s.values().data(), static_cast<int>(n), ws).dip;
      acc += (d - look.mu) / look.sigma;
    }
    const double mean_z = static_cast<double>(acc / replications);
    mean_zs.push_back(mean_z);
    csv += std::to_string(n);
    csv += ',';
    csv += format_double(mean_z);
    csv += '\n';
    std::cerr << "scaling: n = " << n << " mean z = " << format_double(mean_z)
              << "\n";
  }

  const bool fit_ok =
      mean_zs.size() >= 2 &&
      std::all_of(mean_zs.begin(), mean_zs.end(), [](double z) { return z > 0; });
  if (fit_ok) {
    std::vector<double> ns_d(sizes.begin(), sizes.end());
    const FitResult fit = fit_log_log(ns_d, mean_zs);
    csv += "# fit: ok\n";
    csv += "# alpha: " + format_double(fit.alpha) + "\n";
    csv += "# r_squared: " + format_double(fit.r_squared) + "\n";
    std::cerr << "scaling: alpha = " << format_double(fit.alpha)
              << ", r_squared = " << format_double(fit.r_squared) << "\n";
  } else {
    csv += "# fit: refused (non-positive mean z; log undefined)\n";
    std::cerr << "scaling: fit refused (non-positive mean z)\n";
  }
  write_output(out_path, csv);
  return 0;
}

int cmd_calibrate(const std::string& table_path, std::vector<std::int64_t> sizes,
                  std::int64_t ensemble, std::int64_t rounds,
                  std::uint64_t seed, const std::string& out_path,
                  unsigned threads) {
  const LoadedTable loaded = load_table_checked(table_path);
  if (sizes.empty()) sizes = {50, 200, 1000, 10000};

  json manifest = manifest_base("calibrate");
  manifest["parameters"] = {{"sizes", sizes},
                            {"ensemble", ensemble},
                            {"bootstrap_rounds", rounds},
                            {"seed", seed},
                            {"out", out_path}};
  attach_table(manifest, loaded);
  print_manifest(manifest);

  std::string csv = embedded_manifest_line(manifest);
  csv += "n,z_at_p05,ci_low,ci_high,ensemble_size,bootstrap_rounds,seed\n";
  std::vector<zdip::ThresholdEstimate> estimates;
  for (std::int64_t n : sizes) {
    const zdip::ThresholdEstimate est = zdip::calibrate_threshold(
        loaded.table, n, ensemble, rounds, seed, threads);
    estimates.push_back(est);
    csv += std::to_string(est.n);
    csv += ',';
    csv += format_double(est.z_at_p05);
    csv += ',';
    csv += format_double(est.ci_low);
    csv += ',';
    csv += format_double(est.ci_high);
    csv += ',';
    csv += std::to_string(est.ensemble_size);
    csv += ',';
    csv += std::to_string(est.bootstrap_rounds);
    csv += ',';
    csv += std::to_string(est.seed);
    csv += '\n';
    std::cerr << "calibrate: n = " << n
              << " z_at_p05 = " << format_double(est.z_at_p05) << " ci = ["
              << format_double(est.ci_low) << ", "
              << format_double(est.ci_high) << "]\n";
  }
  const double cutoff = zdip::universal_cutoff(estimates);
  csv += "# universal_cutoff: " + format_double(cutoff) + "\n";
  std::cerr << "calibrate: universal cutoff = " << format_double(cutoff)
            << "\n";
  write_output(out_path, csv);
  return 0;
}

int cmd_sample(const std::string& preset_name, bool uniform, std::int64_t n,
               std::uint64_t seed, bool seed_was_random,
               const std::string& out_path) {
  if (n < 1) throw UsageError{"-n must be at least 1"};

  json manifest = manifest_base("sample");
  manifest["parameters"] = {{"preset", uniform ? "uniform" : preset_name},
                            {"n", n},
                            {"seed", seed},
                            {"seed_was_random", seed_was_random},
                            {"out", out_path}};
  print_manifest(manifest);

  std::vector<double> values;
  if (uniform) {
    zdip::RandomStream stream(
        zdip::derive_seed(seed, "uniform-sample", static_cast<std::uint64_t>(n)));
    values.resize(static_cast<std::size_t>(n));
    for (double& v : values) v = stream.uniform01();
  } else {
    values = zdip::sample_mixture(zdip::preset(preset_name), n, seed).values();
  }

  std::string out = embedded_manifest_line(manifest);
  for (double v : values) {
    out += format_double(v);
    out += '\n';
  }
  write_output(out_path, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Standardized dip test for multimodality (z-dip)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(zdip::library_version));

  unsigned threads = zdip::default_thread_count();
  app.add_option("--threads", threads, "worker threads for simulations")
      ->capture_default_str();

  // tablegen
  auto* tablegen = app.add_subcommand("tablegen", "generate a null table");
  std::string tg_profile = "fast";
  std::int64_t tg_replicates = 0;
  std::uint64_t tg_seed = 0;
  std::string tg_out;
  tablegen->add_option("--profile", tg_profile, "grid/replicate preset")
      ->check(CLI::IsMember({"fast", "paper"}))
      ->capture_default_str();
  tablegen->add_option("--replicates", tg_replicates,
                       "override the profile replicate count");
  tablegen->add_option("--seed", tg_seed, "master seed")->required();
  tablegen->add_option("--out", tg_out, "output table path")->required();

  // test
  auto* test = app.add_subcommand("test", "z-dip test of one data file");
  std::string t_input, t_table;
  std::int64_t t_pvalue = 0;
  std::vector<std::int64_t> t_downsample;
  double t_threshold = zdip::default_threshold;
  std::uint64_t t_seed = 0;
  int t_column = 0;
  std::string t_delimiter = ",";
  test->add_option("input", t_input, "data file (one float per line)")
      ->required();
  test->add_option("--table", t_table, "null table file")->required();
  test->add_option("--pvalue", t_pvalue,
                   "Monte Carlo p-value with this many replicates");
  test->add_option("--downsample", t_downsample,
                   "subsample size and iteration count")
      ->expected(2);
  test->add_option("--threshold", t_threshold, "decision threshold on z")
      ->capture_default_str();
  auto* t_seed_opt = test->add_option("--seed", t_seed, "master seed");
  test->add_option("--column", t_column,
                   "1-based CSV column to read (0 = plain float lines)")
      ->capture_default_str();
  test->add_option("--delimiter", t_delimiter, "CSV field delimiter")
      ->capture_default_str();

  // validate-synthetic
  auto* validate = app.add_subcommand(
      "validate-synthetic", "mixture-recovery table across presets and sizes");
  std::string v_table, v_out;
  std::int64_t v_replications = 1000;
  std::int64_t v_null_replicates = 999;
  std::uint64_t v_seed = 0;
  validate->add_option("--table", v_table, "null table file")->required();
  validate->add_option("--replications", v_replications,
                       "samples per (preset, n) cell")
      ->capture_default_str();
  validate->add_option("--null-replicates", v_null_replicates,
                       "null ensemble size for p-values")
      ->capture_default_str();
  validate->add_option("--seed", v_seed, "master seed")->required();
  validate->add_option("--out", v_out, "output CSV path (default stdout)");

  // stability
  auto* stability = app.add_subcommand(
      "stability", "downsampled z across log-spaced sizes, three curves");
  std::string s_table, s_out;
  int s_points = 132;
  std::int64_t s_min = 150, s_max = 72000, s_subsample = 100, s_iterations = 30;
  std::uint64_t s_seed = 0;
  stability->add_option("--table", s_table, "null table file")->required();
  stability->add_option("--points", s_points, "grid points")
      ->capture_default_str();
  stability->add_option("--min-n", s_min, "smallest sample size")
      ->capture_default_str();
  stability->add_option("--max-n", s_max, "largest sample size")
      ->capture_default_str();
  stability->add_option("--subsample", s_subsample, "subsample size")
      ->capture_default_str();
  stability->add_option("--iterations", s_iterations, "subsets per size")
      ->capture_default_str();
  stability->add_option("--seed", s_seed, "master seed")->required();
  stability->add_option("--out", s_out, "output CSV path (default stdout)");

  // scaling
  auto* scaling = app.add_subcommand(
      "scaling", "mean z vs n with a log-log power-law fit");
  std::string sc_table, sc_preset = "strong_bimodal", sc_out;
  std::vector<std::int64_t> sc_sizes;
  std::int64_t sc_replications = 100;
  std::uint64_t sc_seed = 0;
  scaling->add_option("--table", sc_table, "null table file")->required();
  scaling->add_option("--preset", sc_preset, "mixture preset")
      ->capture_default_str();
  scaling->add_option("--ns", sc_sizes, "sample sizes")->delimiter(',');
  scaling->add_option("--replications", sc_replications, "samples per size")
      ->capture_default_str();
  scaling->add_option("--seed", sc_seed, "master seed")->required();
  scaling->add_option("--out", sc_out, "output CSV path (default stdout)");

  // calibrate
  auto* calibrate = app.add_subcommand(
      "calibrate", "empirical p=0.05 threshold with bootstrap intervals");
  std::string c_table, c_out;
  std::vector<std::int64_t> c_sizes;
  std::int64_t c_ensemble = 9999, c_rounds = 1000;
  std::uint64_t c_seed = 0;
  calibrate->add_option("--table", c_table, "null table file")->required();
  calibrate->add_option("--ns", c_sizes, "sizes to calibrate")->delimiter(',');
  calibrate->add_option("--ensemble", c_ensemble, "null ensemble size")
      ->capture_default_str();
  calibrate->add_option("--rounds", c_rounds, "bootstrap rounds")
      ->capture_default_str();
  calibrate->add_option("--seed", c_seed, "master seed")->required();
  calibrate->add_option("--out", c_out, "output CSV path (default stdout)");

  // sample
  auto* sample = app.add_subcommand(
      "sample", "draw a synthetic sample to feed back into `test`");
  std::string sa_preset = "strong_bimodal", sa_out;
  bool sa_uniform = false;
  std::int64_t sa_n = 0;
  std::uint64_t sa_seed = 0;
  sample->add_option("--preset", sa_preset, "mixture preset")
      ->capture_default_str();
  sample->add_flag("--uniform", sa_uniform, "draw Uniform[0,1] instead");
  sample->add_option("-n,--n", sa_n, "sample size")->required();
  auto* sa_seed_opt = sample->add_option("--seed", sa_seed, "master seed");
  sample->add_option("--out", sa_out, "output path (default stdout)");

  // let --threads appear after the subcommand name too
  for (CLI::App* sub : {tablegen, test, validate, stability, scaling,
                        calibrate, sample}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the diagnostic and usage hint
    return 2;     // invalid input
  }

  try {
    if (tablegen->parsed()) {
      return cmd_tablegen(tg_profile, tg_replicates, tg_seed, tg_out, threads);
    }
    if (test->parsed()) {
      const bool random = t_seed_opt->count() == 0;
      if (random) t_seed = random_seed();
      const char delim = t_delimiter.empty() ? ',' : t_delimiter[0];
      return cmd_test(t_input, t_table, t_pvalue, t_downsample, t_threshold,
                      t_seed, random, t_column, delim, threads);
    }
    if (validate->parsed()) {
      return cmd_validate_synthetic(v_table, v_replications, v_null_replicates,
                                    v_seed, v_out, threads);
    }
    if (stability->parsed()) {
      return cmd_stability(s_table, s_points, s_min, s_max, s_subsample,
                           s_iterations, s_seed, s_out);
    }
    if (scaling->parsed()) {
      return cmd_scaling(sc_table, sc_preset, sc_sizes, sc_replications,
                         sc_seed, sc_out);
    }
    if (calibrate->parsed()) {
      return cmd_calibrate(c_table, c_sizes, c_ensemble, c_rounds, c_seed,
                           c_out, threads);
    }
    if (sample->parsed()) {
      const bool random = sa_seed_opt->count() == 0;
      if (random) sa_seed = random_seed();
      return cmd_sample(sa_preset, sa_uniform, sa_n, sa_seed, random, sa_out);
    }
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.message << "\n";
    return 2;
  } catch (const TableFileError& e) {
    std::cerr << "error: " << e.message << "\n";
    return 3;
  } catch (const zdip::FormatVersionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const zdip::CorruptTable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const zdip::MissingColumn& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const zdip::BelowTableMinimum& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const zdip::EmptyInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const zdip::NonFiniteValue& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const zdip::SampleTooSmall& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const zdip::InvalidGridPoint& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const zdip::InvalidReplicates& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const zdip::InsufficientEnsemble& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const zdip::UnknownPreset& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const zdip::InvalidMixture& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const zdip::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
