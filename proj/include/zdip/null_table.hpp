#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "zdip/dip.hpp"
#include "zdip/errors.hpp"
#include "zdip/parallel.hpp"
#include "zdip/random.hpp"
#include "zdip/version.hpp"

namespace zdip {

// Monte Carlo summary of the dip statistic under the uniform null at one
// sample size.
struct NullSummary {
  std::int64_t n = 0;
  double mu = 0.0;
  double sigma = 0.0;
  std::int64_t replicates = 0;
  std::uint64_t seed = 0;
};

struct NullTable {
  std::vector<NullSummary> entries;  // strictly increasing n
  int format_version = table_format_version;
  std::string generator_metadata;
};

// get_summary() result: interpolated (mu, sigma) plus the clamping flag for
// lookups above the table maximum.
struct NullLookup {
  double mu = 0.0;
  double sigma = 0.0;
  bool extrapolated = false;
};

namespace detail {

// Null dip ensemble, replicates >= 1. Each replicate draws its own stream
// seeded by (seed, n, replicate), so the result is a pure function of those
// values no matter how the replicates are scheduled.
inline std::vector<double> null_dips(std::int64_t n, std::int64_t replicates,
                                     std::uint64_t seed, unsigned n_threads) {
  std::vector<double> out(static_cast<std::size_t>(replicates));
  struct Scratch {
    DipWorkspace ws;
    std::vector<double> buf;
  };
  const unsigned n_slots = static_cast<unsigned>(std::max<std::int64_t>(
      1, std::min<std::int64_t>(n_threads, replicates)));
  std::vector<Scratch> scratch(n_slots);
  parallel_for(replicates, n_threads, [&](std::int64_t r, unsigned slot) {
    Scratch& sc = scratch[slot];
    sc.buf.resize(static_cast<std::size_t>(n));
    RandomStream stream(derive_seed(seed, "null-dip",
                                    static_cast<std::uint64_t>(n),
                                    static_cast<std::uint64_t>(r)));
    for (double& v : sc.buf) v = stream.uniform01();
    std::sort(sc.buf.begin(), sc.buf.end());
    out[static_cast<std::size_t>(r)] =
        dip_core(sc.buf.data(), static_cast<int>(n), sc.ws).dip;
  });
  return out;
}

// Shared structural validation; returns a reason string instead of throwing
// so the generator and the loader can raise their own error classes.
inline std::optional<std::string> table_problem(const NullTable& table) {
  if (table.entries.empty()) return "table has no entries";
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    const NullSummary& e = table.entries[i];
    if (e.n < 4) return "entry n = " + std::to_string(e.n) + " is below 4";
    if (i > 0 && table.entries[i - 1].n >= e.n) {
      return "n values are not strictly increasing";
    }
    if (e.replicates < 2) {
      return "entry n = " + std::to_string(e.n) + " has replicates < 2";
    }
    if (!(e.sigma > 0.0) || !std::isfinite(e.sigma)) {
      return "entry n = " + std::to_string(e.n) + " has sigma <= 0";
    }
    if (!std::isfinite(e.mu) || !(e.mu > 1.0 / (2.0 * static_cast<double>(e.n))) ||
        !(e.mu < 0.25)) {
      return "entry n = " + std::to_string(e.n) +
             " has mu outside (1/(2n), 0.25)";
    }
  }
  // mu must not increase with n beyond Monte Carlo noise; 3 combined
  // standard errors keeps honest adjacent estimates from tripping it.
  for (std::size_t i = 0; i + 1 < table.entries.size(); ++i) {
    const NullSummary& a = table.entries[i];
    const NullSummary& b = table.entries[i + 1];
    const double se_a = a.sigma / std::sqrt(static_cast<double>(a.replicates));
    const double se_b = b.sigma / std::sqrt(static_cast<double>(b.replicates));
    const double slack = 3.0 * std::sqrt(se_a * se_a + se_b * se_b);
    if (b.mu > a.mu + slack) {
      return "mu increases from n = " + std::to_string(a.n) + " to n = " +
             std::to_string(b.n) + " beyond Monte Carlo tolerance";
    }
  }
  return std::nullopt;
}

inline void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

inline void append_int(std::string& out, std::uint64_t v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace detail

// `replicates` dip values on independent Uniform[0,1] samples of size n;
// bit-identical for a given (n, replicates, seed) at any thread count.
inline std::vector<double> simulate_null_dips(
    std::int64_t n, std::int64_t replicates, std::uint64_t seed,
    unsigned n_threads = default_thread_count()) {
  if (n < 4) throw InvalidGridPoint(n);
  if (replicates < 2) throw InvalidReplicates(replicates, 2);
  return detail::null_dips(n, replicates, seed, n_threads);
}

inline NullSummary summarize(const std::vector<double>& dips, std::int64_t n,
                             std::uint64_t seed) {
  const auto count = static_cast<std::int64_t>(dips.size());
  if (count < 2) throw InvalidReplicates(count, 2);
  long double acc = 0.0L;
  for (double d : dips) acc += d;
  const double mu = static_cast<double>(acc / count);
  long double ss = 0.0L;
  for (double d : dips) {
    const long double dev = static_cast<long double>(d) - mu;
    ss += dev * dev;
  }
  const double sigma =
      static_cast<double>(std::sqrt(ss / static_cast<long double>(count - 1)));
  if (!(sigma > 0.0)) {
    throw DegenerateEnsemble("null ensemble at n = " + std::to_string(n) +
                             " has zero variance");
  }
  if (!(mu > 1.0 / (2.0 * static_cast<double>(n))) || !(mu < 0.25)) {
    throw DegenerateEnsemble("null ensemble mean at n = " + std::to_string(n) +
                             " lies outside (1/(2n), 0.25)");
  }
  return NullSummary{n, mu, sigma, count, seed};
}

// Optional observer for long table builds: called after each grid point
// with (points done, points total, size just finished).
using TableProgress =
    std::function<void(std::size_t, std::size_t, std::int64_t)>;

inline NullTable generate_table(const std::vector<std::int64_t>& grid,
                                std::int64_t replicates, std::uint64_t seed,
                                unsigned n_threads = default_thread_count(),
                                const TableProgress& progress = {}) {
  if (grid.empty()) throw EmptyInput("grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 4) throw InvalidGridPoint(grid[i]);
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw InvalidGridPoint(grid[i], "grid must be strictly increasing");
    }
  }
  if (replicates < 2) throw InvalidReplicates(replicates, 2);

  NullTable table;
  table.format_version = table_format_version;
  table.entries.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      const std::vector<double> dips =
          detail::null_dips(grid[i], replicates, seed, n_threads);
      table.entries.push_back(summarize(dips, grid[i], seed));
    } catch (const Error& e) {
      throw BatchItemError(i, e.what());
    }
    if (progress) progress(i + 1, grid.size(), grid[i]);
  }

  std::string meta = "rng=";
  meta += RandomStream::generator_name();
  meta += ";points=";
  detail::append_int(meta, grid.size());
  meta += ";replicates=";
  detail::append_int(meta, static_cast<std::uint64_t>(replicates));
  meta += ";seed=";
  detail::append_int(meta, seed);
  meta += ";library=";
  meta += library_version;
  table.generator_metadata = std::move(meta);

  if (auto problem = detail::table_problem(table)) {
    throw DegenerateEnsemble(*problem);
  }
  return table;
}

inline NullLookup get_summary(const NullTable& table, std::int64_t n) {
  if (table.entries.empty()) throw CorruptTable("table has no entries");
  const auto& entries = table.entries;
  if (n < entries.front().n) throw BelowTableMinimum(n, entries.front().n);
  if (n >= entries.back().n) {
    // exact final entry or clamped extrapolation above the table
    return NullLookup{entries.back().mu, entries.back().sigma,
                      n > entries.back().n};
  }
  const auto it = std::lower_bound(
      entries.begin(), entries.end(), n,
      [](const NullSummary& e, std::int64_t key) { return e.n < key; });
  if (it->n == n) return NullLookup{it->mu, it->sigma, false};
  const NullSummary& hi = *it;
  const NullSummary& lo = *(it - 1);
  const double t = static_cast<double>(n - lo.n) / static_cast<double>(hi.n - lo.n);
  return NullLookup{lo.mu + t * (hi.mu - lo.mu), lo.sigma + t * (hi.sigma - lo.sigma),
                    false};
}

// ---- persistence ---------------------------------------------------------
//
// Versioned UTF-8 CSV:
//   # zdip-null-table v1
//   # meta: <single-line free text>
//   n,mu,sigma,replicates,seed
//   <rows, floats in shortest round-trip decimal form>
//   # checksum: fnv1a64:<16 hex digits over every preceding byte>

inline constexpr std::string_view table_header_line = "# zdip-null-table v1";
inline constexpr std::string_view table_columns_line = "n,mu,sigma,replicates,seed";

inline std::string serialize_table(const NullTable& table) {
  if (table.format_version != table_format_version) {
    throw FormatVersionMismatch("cannot write format version " +
                                std::to_string(table.format_version));
  }
  if (auto problem = detail::table_problem(table)) {
    throw CorruptTable(*problem);
  }
  std::string out;
  out.reserve(64 * table.entries.size() + 256);
  out += table_header_line;
  out += '\n';
  out += "# meta: ";
  for (char c : table.generator_metadata) {
    out += (c == '\n' || c == '\r') ? ' ' : c;
  }
  out += '\n';
  out += table_columns_line;
  out += '\n';
  for (const NullSummary& e : table.entries) {
    detail::append_int(out, static_cast<std::uint64_t>(e.n));
    out += ',';
    detail::append_double(out, e.mu);
    out += ',';
    detail::append_double(out, e.sigma);
    out += ',';
    detail::append_int(out, static_cast<std::uint64_t>(e.replicates));
    out += ',';
    detail::append_int(out, e.seed);
    out += '\n';
  }
  const std::uint64_t checksum = fnv1a64(out);
  char hex[17];
  for (int i = 0; i < 16; ++i) {
    hex[15 - i] = "0123456789abcdef"[(checksum >> (4 * i)) & 0xF];
  }
  hex[16] = '\0';
  out += "# checksum: fnv1a64:";
  out += hex;
  out += '\n';
  return out;
}

inline NullTable parse_table(std::string_view text) {
  if (text.empty()) throw CorruptTable("empty file");

  constexpr std::string_view checksum_prefix = "# checksum: fnv1a64:";
  const std::size_t checksum_pos = text.rfind(checksum_prefix);
  if (checksum_pos == std::string_view::npos) {
    // distinguish foreign files from truncated tables
    if (text.substr(0, table_header_line.size()) != table_header_line) {
      if (text.rfind("# zdip-null-table v", 0) == 0) {
        throw FormatVersionMismatch(
            std::string(text.substr(0, text.find('\n'))));
      }
      throw CorruptTable("not a null-table file");
    }
    throw CorruptTable("missing checksum line");
  }
  std::string_view checksum_line = text.substr(checksum_pos);
  std::string_view payload = text.substr(0, checksum_pos);
  if (!checksum_line.empty() && checksum_line.back() == '\n') {
    checksum_line.remove_suffix(1);
  }
  if (checksum_line.size() != checksum_prefix.size() + 16) {
    throw CorruptTable("malformed checksum line");
  }
  std::uint64_t stated = 0;
  {
    const std::string_view hex = checksum_line.substr(checksum_prefix.size());
    const auto res =
        std::from_chars(hex.data(), hex.data() + hex.size(), stated, 16);
    if (res.ec != std::errc() || res.ptr != hex.data() + hex.size()) {
      throw CorruptTable("malformed checksum line");
    }
  }
  if (fnv1a64(payload) != stated) throw CorruptTable("checksum mismatch");

  // line-wise parse of the payload
  NullTable table;
  std::size_t pos = 0;
  int line_number = 0;
  bool saw_header = false, saw_meta = false, saw_columns = false;
  while (pos < payload.size()) {
    std::size_t eol = payload.find('\n', pos);
    if (eol == std::string_view::npos) eol = payload.size();
    const std::string_view line = payload.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_number;

    if (!saw_header) {
      if (line != table_header_line) {
        if (line.rfind("# zdip-null-table v", 0) == 0) {
          throw FormatVersionMismatch(std::string(line));
        }
        throw CorruptTable("not a null-table file");
      }
      table.format_version = table_format_version;
      saw_header = true;
      continue;
    }
    if (!saw_meta) {
      constexpr std::string_view meta_prefix = "# meta: ";
      if (line.rfind(meta_prefix, 0) != 0) {
        throw CorruptTable("missing meta line");
      }
      table.generator_metadata = std::string(line.substr(meta_prefix.size()));
      saw_meta = true;
      continue;
    }
    if (!saw_columns) {
      if (line != table_columns_line) {
        // report the first required column that is absent, if any
        std::vector<std::string_view> found;
        std::size_t c = 0;
        const std::string_view l = line;
        while (c <= l.size()) {
          std::size_t comma = l.find(',', c);
          if (comma == std::string_view::npos) comma = l.size();
          found.push_back(l.substr(c, comma - c));
          c = comma + 1;
        }
        for (std::string_view required :
             {std::string_view("n"), std::string_view("mu"),
              std::string_view("sigma"), std::string_view("replicates"),
              std::string_view("seed")}) {
          if (std::find(found.begin(), found.end(), required) == found.end()) {
            throw MissingColumn(std::string(required));
          }
        }
        throw CorruptTable("unexpected column layout: " + std::string(line));
      }
      saw_columns = true;
      continue;
    }

    // data row: n,mu,sigma,replicates,seed
    std::array<std::string_view, 5> fields;
    std::size_t c = 0, f = 0;
    while (f < 5) {
      std::size_t comma = line.find(',', c);
      if (comma == std::string_view::npos) comma = line.size();
      fields[f++] = line.substr(c, comma - c);
      if (comma == line.size()) break;
      c = comma + 1;
    }
    if (f != 5 || line.find(',', c) != std::string_view::npos) {
      throw CorruptTable("malformed row at line " + std::to_string(line_number));
    }
    NullSummary e;
    auto parse_i64 = [&](std::string_view s, std::int64_t& v) {
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      return res.ec == std::errc() && res.ptr == s.data() + s.size();
    };
    auto parse_u64 = [&](std::string_view s, std::uint64_t& v) {
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      return res.ec == std::errc() && res.ptr == s.data() + s.size();
    };
    auto parse_f64 = [&](std::string_view s, double& v) {
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      return res.ec == std::errc() && res.ptr == s.data() + s.size();
    };
    if (!parse_i64(fields[0], e.n) || !parse_f64(fields[1], e.mu) ||
        !parse_f64(fields[2], e.sigma) || !parse_i64(fields[3], e.replicates) ||
        !parse_u64(fields[4], e.seed)) {
      throw CorruptTable("malformed row at line " + std::to_string(line_number));
    }
    table.entries.push_back(e);
  }
  if (!saw_columns) throw CorruptTable("truncated header");
  if (table.entries.empty()) throw CorruptTable("table has no data rows");
  if (auto problem = detail::table_problem(table)) {
    throw CorruptTable(*problem);
  }
  return table;
}

inline void save_table(const NullTable& table, const std::string& path) {
  const std::string bytes = serialize_table(table);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path);
}

inline NullTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_table(text);
}

// ---- grids ----------------------------------------------------------------

// `count` approximately log-spaced integers from lo to hi inclusive
// (duplicates collapse after rounding).
inline std::vector<std::int64_t> log_spaced(std::int64_t lo, std::int64_t hi,
                                            int count) {
  std::vector<std::int64_t> out;
  if (count <= 1 || lo >= hi) {
    out.push_back(lo);
    if (hi > lo) out.push_back(hi);
    return out;
  }
  const double ratio = static_cast<double>(hi) / static_cast<double>(lo);
  for (int k = 0; k < count; ++k) {
    const double v = static_cast<double>(lo) *
                     std::pow(ratio, static_cast<double>(k) / (count - 1));
    const auto n = static_cast<std::int64_t>(std::llround(v));
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  if (out.back() != hi) out.push_back(hi);
  return out;
}

namespace detail {
inline std::vector<std::int64_t> grid_with_log_tail(int log_points) {
  std::vector<std::int64_t> grid;
  for (std::int64_t n = 4; n <= 100; ++n) grid.push_back(n);
  for (std::int64_t n : log_spaced(100, 72000, log_points)) {
    if (n > grid.back()) grid.push_back(n);
  }
  return grid;
}
}  // namespace detail

// Every integer 4..100, then ~132 log-spaced sizes up to 72,000.
inline std::vector<std::int64_t> default_grid() {
  return detail::grid_with_log_tail(132);
}

// Reduced grid for quick table builds: same integer head, sparse log tail.
inline std::vector<std::int64_t> fast_grid() {
  return detail::grid_with_log_tail(33);
}

inline constexpr std::int64_t default_replicates = 9999;
inline constexpr std::int64_t fast_replicates = 999;

}  // namespace zdip
