#include "sgm_cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "sgm/asymptotic.hpp"
#include "sgm/errors.hpp"
#include "sgm/fields.hpp"
#include "sgm/medium.hpp"
#include "sgm/parallel.hpp"
#include "sgm/rootfind.hpp"
#include "sgm/scattering.hpp"

namespace sgm::cli {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

// ---------------------------------------------------------------------------
// Output blocks

struct Cell {
  std::string text;
  bool numeric = true;
};

Cell num(double v, const char* spec = "{:.6f}") { return {fmt::format(fmt::runtime(spec), v), true}; }
Cell integer(long long v) { return {std::to_string(v), true}; }
Cell str(std::string s) { return {std::move(s), false}; }

struct Block {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> meta;
};

enum class Format { csv, json };

void write_block(std::ostream& os, const Block& b, Format format) {
  if (format == Format::csv) {
    for (std::size_t i = 0; i < b.columns.size(); ++i) os << (i ? "," : "") << b.columns[i];
    os << '\n';
    for (const auto& row : b.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i].text;
      os << '\n';
    }
    for (const auto& [k, v] : b.meta) os << "# " << k << ": " << v << '\n';
    return;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : b.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < b.columns.size(); ++i) {
      const Cell& c = row[i];
      if (c.numeric) {
        char* end = nullptr;
        const double v = std::strtod(c.text.c_str(), &end);
        if (end && *end == '\0' && std::isfinite(v)) {
          if (c.text.find_first_of(".eE") == std::string::npos)
            obj[b.columns[i]] = std::stoll(c.text);
          else
            obj[b.columns[i]] = v;
          continue;
        }
      }
      obj[b.columns[i]] = c.text;
    }
    arr.push_back(std::move(obj));
  }
  os << arr.dump(1) << '\n';
}

// Main output goes to --output (default stdout). Secondary blocks go to their
// own path if given, else next to the main file with a suffix, else to stdout
// after a blank line.
class Outputs {
 public:
  Outputs(std::ostream& out, std::string main_path, Format format)
      : out_(out), main_(std::move(main_path)), format_(format) {}

  void write_main(const Block& b) { write(main_, b); }

  void write_secondary(const std::string& explicit_path, const std::string& suffix, const Block& b) {
    std::string path = explicit_path;
    if (path.empty()) path = is_stdout(main_) ? "-" : main_ + "." + suffix + (format_ == Format::csv ? ".csv" : ".json");
    if (is_stdout(path)) out_ << '\n';
    write(path, b);
  }

 private:
  static bool is_stdout(const std::string& p) { return p.empty() || p == "-"; }

  void write(const std::string& path, const Block& b) {
    if (is_stdout(path)) {
      write_block(out_, b, format_);
      out_.flush();
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file " + path);
    write_block(f, b, format_);
    if (!f) throw ConfigError("failed writing output file " + path);
  }

  std::ostream& out_;
  std::string main_;
  Format format_;
};

// ---------------------------------------------------------------------------
// Argument helpers

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

int parse_int(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", what, s));
  }
  if (pos != s.size()) throw ConfigError(fmt::format("{}: '{}' is not an integer", what, s));
  return v;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", what, s));
  }
  if (pos != s.size()) throw ConfigError(fmt::format("{}: '{}' is not a number", what, s));
  return v;
}

// "600", "485,540", "400:700:100" (start:stop:step, inclusive), repeatable.
std::vector<int> parse_ells(const std::vector<std::string>& items) {
  std::set<int> ells;
  for (const auto& item : items) {
    for (const auto& part : split(item, ',')) {
      if (part.empty()) continue;
      const auto r = split(part, ':');
      if (r.size() == 1) {
        ells.insert(parse_int(r[0], "--ell"));
      } else if (r.size() == 2 || r.size() == 3) {
        const int a = parse_int(r[0], "--ell"), b = parse_int(r[1], "--ell");
        const int step = r.size() == 3 ? parse_int(r[2], "--ell") : 1;
        if (step <= 0 || b < a) throw ConfigError("--ell: range '" + part + "' must be start:stop[:step] with stop >= start");
        for (int l = a; l <= b; l += step) ells.insert(l);
      } else {
        throw ConfigError("--ell: cannot parse '" + part + "'");
      }
    }
  }
  if (ells.empty()) throw ConfigError("--ell: no values given");
  for (int l : ells)
    if (l < 1) throw ConfigError(fmt::format("--ell: {} must be at least 1", l));
  return {ells.begin(), ells.end()};
}

// "lo:hi:n" -> n points from lo to hi inclusive.
std::vector<double> parse_grid(const std::string& spec, const std::string& what) {
  const auto p = split(spec, ':');
  if (p.size() != 3) throw ConfigError(what + ": expected lo:hi:samples, got '" + spec + "'");
  const double lo = parse_double(p[0], what), hi = parse_double(p[1], what);
  const int n = parse_int(p[2], what);
  if (!(lo < hi)) throw ConfigError(what + ": lo must be below hi");
  if (n < 2) throw ConfigError(what + ": need at least 2 samples");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
  return g;
}

DispersionModel parse_model(const std::string& s) {
  if (s == "linearized") return DispersionModel::linearized;
  if (s == "full") return DispersionModel::full;
  throw ConfigError("--model: expected linearized or full, got '" + s + "'");
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ConfigError("--format: expected csv or json, got '" + s + "'");
}

std::string log10_text(const LogReal& v) {
  return v.is_zero() ? "-inf" : fmt::format("{:.6f}", v.log10_abs());
}

struct Common {
  std::string format = "csv";
  std::string output = "-";
  int threads = 0;
  int resolved_threads() const { return threads > 0 ? threads : default_threads(); }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "csv or json")->capture_default_str();
  sub->add_option("-o,--output", c.output, "main output path, - for stdout")->capture_default_str();
  sub->add_option("--threads", c.threads, "worker threads (0: SGM_THREADS or all CPUs)")
      ->capture_default_str();
}

// Options that never change the numbers are left out of the hash.
const std::set<std::string> kUnhashed = {"--help",    "--format",        "--output",    "--threads",
                                         "--summary", "--groups",        "--scan-output",
                                         "--radial-output"};

std::string config_hash(const CLI::App* sub) {
  std::string canon = sub->get_name() + "\n";
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_name();
    if (kUnhashed.count(name) || opt->count() == 0) continue;
    canon += name + "=";
    for (const auto& r : opt->results()) canon += r + ";";
    canon += "\n";
  }
  return fmt::format("{:016x}", fnv1a(canon));
}

void add_header_meta(Block& b, const CLI::App* sub) {
  b.meta.emplace_back("version", kVersion);
  b.meta.emplace_back("command", sub->get_name());
  b.meta.emplace_back("config_hash", config_hash(sub));
}

// Index given either as --eta/--kappa or as --material/--g0.
struct IndexOpts {
  std::optional<double> eta;
  double kappa = 0.0;
  std::string material;
  std::optional<double> g0;
  std::string model = "linearized";
};

void add_index_options(CLI::App* sub, IndexOpts& o) {
  sub->add_option("--eta", o.eta, "real part of the index (fixed-index mode)");
  sub->add_option("--kappa", o.kappa, "imaginary part of the index, negative for gain");
  sub->add_option("--material", o.material, "ndyag or a material file");
  sub->add_option("--g0", o.g0, "peak gain in 1/cm (with --material)");
  sub->add_option("--model", o.model, "linearized or full dispersion")->capture_default_str();
}

IndexSource resolve_index(const IndexOpts& o) {
  const bool fixed = o.eta.has_value();
  const bool disp = !o.material.empty();
  if (fixed == disp) throw ConfigError("give exactly one of --eta or --material");
  if (fixed) return FixedIndex{ComplexIndex::make(*o.eta, o.kappa).value()};
  if (!o.g0) throw ConfigError("--material needs --g0");
  return DispersiveIndex{preset(o.material), *o.g0, parse_model(o.model), {}};
}

std::string flag_text(const ScanPoint& p) {
  if (p.failed) return "failed";
  return p.near_singular ? "near_singular" : "ok";
}

void add_peak_meta(Block& b, const std::vector<ScanPeak>& peaks, std::optional<int> ell) {
  for (const auto& p : peaks)
    b.meta.emplace_back("peak", fmt::format("{}lambda_nm={:.6f} log10_R2={:.4f} flag={}",
                                            ell ? fmt::format("ell={} ", *ell) : "", p.lambda_nm,
                                            p.log10_R2, p.near_singular ? "near_singular" : "peak"));
}

// ---------------------------------------------------------------------------
// sgm-table

struct TableOpts {
  std::string pol;
  std::vector<std::string> ells;
  double radius_um = 50.0;
  double eta = 0.0;
  bool refine = false;
  double tm_sign = -1.0;
  std::string summary;
};

int cmd_sgm_table(const CLI::App* sub, const TableOpts& o, const Common& c, std::ostream& out,
                  std::ostream& err) {
  const Polarization pol = parse_polarization(o.pol);
  const auto ells = parse_ells(o.ells);
  if (!(o.radius_um > 0.0)) throw ConfigError("--radius-um must be positive");
  if (!(o.eta > 1.0)) throw ConfigError("--eta must exceed 1");
  if (o.tm_sign != 1.0 && o.tm_sign != -1.0) throw ConfigError("--tm-offset-sign must be +1 or -1");
  if (ells.front() < 50) throw ConfigError("--ell: the asymptotic tables need ell >= 50");
  AsymptoticOptions aopt;
  aopt.tm_offset_sign = o.tm_sign;
  const RefineOptions ropt;

  struct PerEll {
    std::vector<SingularityRecord> records;
    std::string error;
    int refine_failures = 0;
  };
  std::vector<PerEll> results(ells.size());
  parallel_for(ells.size(), c.resolved_threads(), [&](std::size_t i) {
    try {
      results[i].records = enumerate_sgm(pol, ells[i], o.radius_um, o.eta, aopt);
      if (o.refine) {
        for (auto& r : results[i].records) {
          const RefineResult rr = refine_exact(r, o.radius_um, o.eta, ropt);
          if (rr.status == RefineStatus::not_converged || rr.status == RefineStatus::failed ||
              rr.status == RefineStatus::singular_jacobian)
            ++results[i].refine_failures;
          r = rr.record;
        }
      }
    } catch (const std::exception& e) {
      results[i].error = e.what();
    }
  });

  Block table;
  table.columns = {"pol", "ell", "q", "zeta", "lambda_nm", "kappa_sign", "log10_abs_kappa",
                   "log10_gain_per_cm", "method", "flags", "kappa", "gain_per_cm"};
  Block summary;
  summary.columns = {"pol", "ell", "q_max", "lambda_min_nm", "lambda_max_nm", "log10_g_min_per_cm",
                     "g_min_per_cm"};
  int failed = 0, refine_failures = 0;
  for (std::size_t i = 0; i < ells.size(); ++i) {
    const auto& res = results[i];
    if (!res.error.empty()) {
      ++failed;
      table.rows.push_back({str(to_string(pol)), integer(ells[i]), integer(0), str("nan"), str("nan"),
                            integer(0), str("nan"), str("nan"), str("failed"), str("solver_failure"),
                            str("nan"), str("nan")});
      table.meta.emplace_back("failure", fmt::format("ell={}: {}", ells[i], res.error));
      err << fmt::format("sgm-table: ell = {} failed: {}\n", ells[i], res.error);
      continue;
    }
    refine_failures += res.refine_failures;
    for (const auto& r : res.records) {
      std::string flags;
      for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
      table.rows.push_back({str(to_string(r.pol)), integer(r.ell), integer(r.q), num(r.zeta),
                            num(r.lambda_nm), integer(r.kappa.sign()), str(log10_text(r.kappa)),
                            str(log10_text(r.gain_per_cm)), str(to_string(r.method)), str(flags),
                            str(r.kappa.to_string(7)), str(r.gain_per_cm.to_string(7))});
    }
    const TableSummary s = summarize(res.records);
    summary.rows.push_back({str(to_string(pol)), integer(ells[i]), integer(s.q_max),
                            num(s.lambda_min_nm), num(s.lambda_max_nm), str(log10_text(s.g_min_per_cm)),
                            str(s.g_min_per_cm.to_string(7))});
  }
  for (Block* b : {&table, &summary}) {
    add_header_meta(*b, sub);
    b->meta.emplace_back("radius_um", fmt::format("{}", o.radius_um));
    b->meta.emplace_back("eta", fmt::format("{}", o.eta));
    b->meta.emplace_back("window_margin", fmt::format("{}", aopt.window_margin));
    b->meta.emplace_back("bisection_width", fmt::format("{}", aopt.bisection_width));
    b->meta.emplace_back("newton_step", fmt::format("{}", aopt.newton_step));
    b->meta.emplace_back("newton_steps", fmt::format("{}", aopt.newton_steps));
    b->meta.emplace_back("tm_offset_sign", fmt::format("{}", aopt.tm_offset_sign));
    if (o.refine) {
      b->meta.emplace_back("refine_tolerance", fmt::format("{}", ropt.tolerance));
      b->meta.emplace_back("refine_max_iterations", fmt::format("{}", ropt.max_iterations));
      b->meta.emplace_back("resolution_floor", fmt::format("{}", ropt.resolution_floor));
      b->meta.emplace_back("kappa_validation",
                           "records with |kappa| zeta below resolution_floor are validated by the "
                           "asymptotic equations only");
    }
  }
  Outputs outputs(out, c.output, parse_format(c.format));
  outputs.write_main(table);
  if (!o.summary.empty() || c.output != "-") outputs.write_secondary(o.summary, "summary", summary);
  if (failed == static_cast<int>(ells.size())) return numerical;
  return failed || refine_failures ? partial : ok;
}

// ---------------------------------------------------------------------------
// dispersive

struct DispOpts {
  std::string pol;
  std::vector<std::string> ells;
  double radius_um = 50.0;
  std::string material = "ndyag";
  std::string model = "linearized";
  double group_tol = 0.01;
  std::string groups;
  std::string scan;
  std::optional<double> g0;
  double peak_threshold = 1e4;
  std::string scan_output;
};

int cmd_dispersive(const CLI::App* sub, const DispOpts& o, const Common& c, std::ostream& out,
                   std::ostream& err) {
  const Polarization pol = parse_polarization(o.pol);
  const auto ells = parse_ells(o.ells);
  const GainMaterial mat = preset(o.material);
  if (!(o.radius_um > 0.0)) throw ConfigError("--radius-um must be positive");
  if (!(o.group_tol > 0.0)) throw ConfigError("--group-tol must be positive");
  std::vector<double> grid;
  if (!o.scan.empty()) {
    grid = parse_grid(o.scan, "--scan");
    if (!o.g0) throw ConfigError("--scan needs --g0");
  }
  DispersiveOptions dopt;
  dopt.model = parse_model(o.model);
  dopt.threads = c.resolved_threads();

  Block table;
  table.columns = {"pol", "ell", "lambda_nm", "g0_per_cm", "eta", "kappa", "residual_norm", "status"};
  std::vector<DispersiveSingularity> all;
  int failed = 0, seeds = 0, unresolvable = 0;
  std::vector<std::pair<std::string, std::string>> failure_meta;
  for (int ell : ells) {
    try {
      const DispersiveReport rep = solve_dispersive(pol, ell, o.radius_um, mat, dopt);
      seeds += rep.seeds_tried;
      unresolvable += rep.seeds_unresolvable;
      for (const auto& f : rep.failures)
        failure_meta.emplace_back("seed_failure", fmt::format("ell={} q={} lambda_nm={:.6f}: {}", ell,
                                                              f.seed_q, f.seed_lambda_nm, f.reason));
      for (const auto& s : rep.solutions) {
        table.rows.push_back({str(to_string(s.pol)), integer(s.ell), num(s.lambda_nm),
                              num(s.g0_per_cm, "{:.9e}"), num(s.eta, "{:.12f}"),
                              str(s.kappa.to_string(9)), num(s.residual_norm, "{:.3e}"), str(s.status)});
        all.push_back(s);
      }
    } catch (const std::exception& e) {
      ++failed;
      failure_meta.emplace_back("failure", fmt::format("ell={}: {}", ell, e.what()));
      err << fmt::format("dispersive: ell = {} failed: {}\n", ell, e.what());
    }
  }
  const int above = static_cast<int>(std::count_if(
      all.begin(), all.end(), [&](const auto& s) { return s.g0_per_cm > mat.g0_max_per_cm; }));

  Block groups;
  groups.columns = {"group", "size", "mean_g0_per_cm", "pol", "ell", "lambda_nm", "g0_per_cm",
                    "relative_deviation"};
  const auto grouped = equal_gain_groups(all, o.group_tol);
  for (std::size_t gi = 0; gi < grouped.size(); ++gi) {
    double mean = 0.0;
    for (const auto& s : grouped[gi]) mean += s.g0_per_cm;
    mean /= grouped[gi].size();
    for (const auto& s : grouped[gi])
      groups.rows.push_back({integer(static_cast<long long>(gi) + 1),
                             integer(static_cast<long long>(grouped[gi].size())), num(mean, "{:.9e}"),
                             str(to_string(s.pol)), integer(s.ell), num(s.lambda_nm),
                             num(s.g0_per_cm, "{:.9e}"), num(s.g0_per_cm / mean - 1.0, "{:.6f}")});
  }

  for (Block* b : {&table, &groups}) {
    add_header_meta(*b, sub);
    b->meta.emplace_back("material", format_material(mat));
    b->meta.emplace_back("radius_um", fmt::format("{}", o.radius_um));
    b->meta.emplace_back("model", o.model);
    b->meta.emplace_back("tolerance", fmt::format("{}", dopt.tolerance));
    b->meta.emplace_back("max_iterations", fmt::format("{}", dopt.max_iterations));
    b->meta.emplace_back("resolution_floor", fmt::format("{}", dopt.resolution_floor));
    b->meta.emplace_back("dedup_nm", fmt::format("{}", dopt.dedup_nm));
    b->meta.emplace_back("group_tolerance", fmt::format("{}", o.group_tol));
  }
  table.meta.emplace_back("seeds_tried", std::to_string(seeds));
  table.meta.emplace_back("seeds_unresolvable", std::to_string(unresolvable));
  for (const auto& m : failure_meta) table.meta.push_back(m);
  if (above > 0) {
    const std::string w = fmt::format("{} solutions need g0 above the material bound {} /cm", above,
                                      mat.g0_max_per_cm);
    table.meta.emplace_back("warning", w);
    err << "dispersive: warning: " << w << '\n';
  }

  Outputs outputs(out, c.output, parse_format(c.format));
  outputs.write_main(table);
  outputs.write_secondary(o.groups, "groups", groups);

  if (!grid.empty()) {
    Block scan;
    scan.columns = {"ell", "lambda_nm", "log10_R2", "flag"};
    add_header_meta(scan, sub);
    scan.meta.emplace_back("g0_per_cm", fmt::format("{}", *o.g0));
    scan.meta.emplace_back("peak_threshold_R2", fmt::format("{}", o.peak_threshold));
    ScanOptions sopt;
    sopt.peak_threshold_R2 = o.peak_threshold;
    sopt.threads = c.resolved_threads();
    const DispersiveIndex index{mat, *o.g0, dopt.model, {}};
    int peaks = 0;
    for (int ell : ells) {
      const ScanResult r = reflection_scan(pol, ell, o.radius_um, index, grid, sopt);
      for (const auto& p : r.points)
        scan.rows.push_back({integer(ell), num(p.lambda_nm), num(p.log10_R2, "{:.9e}"), str(flag_text(p))});
      add_peak_meta(scan, r.peaks, ell);
      peaks += static_cast<int>(r.peaks.size());
    }
    scan.meta.emplace_back("peak_count", std::to_string(peaks));
    outputs.write_secondary(o.scan_output, "scan", scan);
  }
  if (failed == static_cast<int>(ells.size())) return numerical;
  return failed ? partial : ok;
}

// ---------------------------------------------------------------------------
// scan

struct ScanOpts {
  std::string pol;
  int ell = 0;
  double radius_um = 50.0;
  std::string grid;
  double peak_threshold = 1e4;
  double near_singular = 1e8;
};

int cmd_scan(const CLI::App* sub, const ScanOpts& o, const IndexOpts& io, const Common& c,
             std::ostream& out) {
  const Polarization pol = parse_polarization(o.pol);
  if (o.ell < 1) throw ConfigError("--ell must be at least 1");
  if (!(o.radius_um > 0.0)) throw ConfigError("--radius-um must be positive");
  const auto grid = parse_grid(o.grid, "--grid");
  const IndexSource index = resolve_index(io);
  ScanOptions sopt;
  sopt.peak_threshold_R2 = o.peak_threshold;
  sopt.near_singular_threshold = o.near_singular;
  sopt.threads = c.resolved_threads();
  const ScanResult r = reflection_scan(pol, o.ell, o.radius_um, index, grid, sopt);
  Block b;
  b.columns = {"lambda_nm", "log10_R2", "flag"};
  int failed = 0;
  for (const auto& p : r.points) {
    b.rows.push_back({num(p.lambda_nm), num(p.log10_R2, "{:.9e}"), str(flag_text(p))});
    failed += p.failed;
  }
  add_header_meta(b, sub);
  b.meta.emplace_back("peak_threshold_R2", fmt::format("{}", o.peak_threshold));
  b.meta.emplace_back("near_singular_threshold", fmt::format("{}", o.near_singular));
  add_peak_meta(b, r.peaks, std::nullopt);
  b.meta.emplace_back("peak_count", std::to_string(r.peaks.size()));
  Outputs(out, c.output, parse_format(c.format)).write_main(b);
  if (failed == static_cast<int>(grid.size())) return numerical;
  return failed ? partial : ok;
}

// ---------------------------------------------------------------------------
// field-profile

struct ProfileOpts {
  std::string pol;
  int ell = 0;
  int m = 0;
  double lambda_nm = 0.0;
  double r_um = 0.0;
  std::optional<double> radius_um;
  int theta_samples = 2001;
  int radial_samples = 2001;
  std::string radial_output;
};

int cmd_field_profile(const CLI::App* sub, const ProfileOpts& o, const IndexOpts& io,
                      const Common& c, std::ostream& out, std::ostream& err) {
  FieldMode mode;
  mode.pol = parse_polarization(o.pol);
  mode.ell = o.ell;
  mode.m = o.m;
  if (o.ell < 1 || std::abs(o.m) > o.ell) throw ConfigError("need ell >= 1 and |m| <= ell");
  if (!(o.lambda_nm > 0.0)) throw ConfigError("--lambda-nm must be positive");
  if (!(o.r_um > 0.0)) throw ConfigError("--r-um must be positive");
  if (o.theta_samples < 3 || o.radial_samples < 3) throw ConfigError("need at least 3 samples");
  mode.radius_um = o.radius_um.value_or(o.r_um);
  if (!(mode.radius_um > 0.0)) throw ConfigError("--radius-um must be positive");
  mode.k_per_nm = 2.0 * std::numbers::pi / o.lambda_nm;
  mode.n = index_at(resolve_index(io), o.lambda_nm);
  const int threads = c.resolved_threads();

  const int nt = o.theta_samples;
  std::vector<double> theta(nt), u(nt);
  std::vector<FieldSample> samples(nt);
  for (int i = 0; i < nt; ++i) theta[i] = std::numbers::pi * (i + 0.5) / nt;
  parallel_for(nt, threads, [&](std::size_t i) {
    samples[i] = field_sample(mode, o.r_um, theta[i]);
    u[i] = samples[i].u_normalized;
  });
  const auto minima =
      find_minima([&](double t) { return field_sample(mode, o.r_um, t).u_normalized; }, theta, u);

  const int nr = o.radial_samples;
  std::vector<double> r(nr), ubar(nr);
  for (int i = 0; i < nr; ++i) r[i] = mode.radius_um * (i + 1) / nr;
  parallel_for(nr, threads,
               [&](std::size_t i) { ubar[i] = avg_energy_density_normalized(mode, r[i]); });
  const int peaks = count_radial_peaks(ubar);
  const double zeta = mode.k_per_nm * mode.radius_um * kNmPerUm * mode.n.real();
  const ModeClass cls = classify_mode(mode.ell, zeta);

  Block profile;
  profile.columns = {"r_um", "theta_rad", "u_normalized", "S_r", "S_theta", "S_phi", "Theta_rad"};
  for (const auto& s : samples)
    profile.rows.push_back({num(s.r_um, "{:.6f}"), num(s.theta, "{:.9f}"), num(s.u_normalized, "{:.9e}"),
                            num(s.S_r, "{:.9e}"), num(s.S_theta, "{:.9e}"), num(s.S_phi, "{:.9e}"),
                            num(s.Theta, "{:.9f}")});
  Block radial;
  radial.columns = {"r_um", "u_avg_normalized"};
  for (int i = 0; i < nr; ++i) radial.rows.push_back({num(r[i], "{:.9f}"), num(ubar[i], "{:.9e}")});

  for (Block* b : {&profile, &radial}) {
    add_header_meta(*b, sub);
    b->meta.emplace_back("n", fmt::format("{:.12g}{:+.6e}i", mode.n.real(), mode.n.imag()));
    b->meta.emplace_back("zeta", fmt::format("{:.6f}", zeta));
    b->meta.emplace_back("classification", to_string(cls));
    b->meta.emplace_back("minima", std::to_string(minima.size()));
    b->meta.emplace_back("radial_peaks", std::to_string(peaks));
  }
  for (const auto& m : minima)
    profile.meta.emplace_back("minimum", fmt::format("theta_rad={:.9f} u={:.6e} approximate_zero={}",
                                                     m.theta, m.value, m.approximate_zero ? 1 : 0));
  Outputs outputs(out, c.output, parse_format(c.format));
  outputs.write_main(profile);
  outputs.write_secondary(o.radial_output, "radial", radial);
  err << fmt::format("minima: {}\nclassification: {}\nradial_peaks: {}\n", minima.size(),
                     to_string(cls), peaks);
  return ok;
}

// ---------------------------------------------------------------------------
// classify

struct ClassifyOpts {
  int ell = 0;
  std::vector<std::string> zetas;
  double eta = 1.8217;
  double tolerance = 1e-6;
};

int cmd_classify(const CLI::App* sub, const ClassifyOpts& o, const Common& c, std::ostream& out) {
  if (o.ell < 1) throw ConfigError("--ell must be at least 1");
  std::vector<double> zetas;
  for (const auto& item : o.zetas)
    for (const auto& p : split(item, ','))
      if (!p.empty()) zetas.push_back(parse_double(p, "--zeta"));
  if (zetas.empty()) throw ConfigError("--zeta: no values given");
  for (double z : zetas)
    if (!(z > 0.0)) throw ConfigError("--zeta values must be positive");
  ClassifyOptions copt{o.tolerance, o.eta};
  std::vector<ModeClass> cls(zetas.size());
  parallel_for(zetas.size(), c.resolved_threads(),
               [&](std::size_t i) { cls[i] = classify_mode(o.ell, zetas[i], copt); });
  Block b;
  b.columns = {"ell", "zeta", "class"};
  for (std::size_t i = 0; i < zetas.size(); ++i)
    b.rows.push_back({integer(o.ell), num(zetas[i], "{:.9f}"), str(to_string(cls[i]))});
  add_header_meta(b, sub);
  b.meta.emplace_back("tolerance", fmt::format("{}", o.tolerance));
  b.meta.emplace_back("eta", fmt::format("{}", o.eta));
  Outputs(out, c.output, parse_format(c.format)).write_main(b);
  return ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral singularities of singular-gallery modes in a spherical gain medium", "sgm"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common common;

  TableOpts table;
  auto* t = app.add_subcommand("sgm-table", "asymptotic singularity tables for fixed eta");
  t->add_option("--pol", table.pol, "te or tm")->required();
  t->add_option("--ell", table.ells, "orders: 600, 485,540 or 400:700:100")->required();
  t->add_option("--radius-um", table.radius_um, "sphere radius in um")->capture_default_str();
  t->add_option("--eta", table.eta, "real part of the index")->required();
  t->add_flag("--refine", table.refine, "refine every record with the exact equations");
  t->add_option("--tm-offset-sign", table.tm_sign, "sign of the TM offset term")->capture_default_str();
  t->add_option("--summary", table.summary, "summary table path, - for stdout");
  add_common(t, common);

  DispOpts disp;
  auto* d = app.add_subcommand("dispersive", "exact singularities of the dispersive medium");
  d->add_option("--pol", disp.pol, "te or tm")->required();
  d->add_option("--ell", disp.ells, "orders")->required();
  d->add_option("--radius-um", disp.radius_um, "sphere radius in um")->capture_default_str();
  d->add_option("--material", disp.material, "ndyag or a material file")->capture_default_str();
  d->add_option("--model", disp.model, "linearized or full")->capture_default_str();
  d->add_option("--group-tol", disp.group_tol, "relative tolerance for equal-gain groups")
      ->capture_default_str();
  d->add_option("--groups", disp.groups, "group report path, - for stdout");
  d->add_option("--scan", disp.scan, "reflection scan grid lo:hi:samples in nm");
  d->add_option("--g0", disp.g0, "peak gain for the scan in 1/cm");
  d->add_option("--peak-threshold", disp.peak_threshold, "|R|^2 peak threshold")->capture_default_str();
  d->add_option("--scan-output", disp.scan_output, "scan path, - for stdout");
  add_common(d, common);

  ScanOpts scan;
  IndexOpts scan_index;
  auto* s = app.add_subcommand("scan", "|R|^2 over a wavelength grid");
  s->add_option("--pol", scan.pol, "te or tm")->required();
  s->add_option("--ell", scan.ell, "order")->required();
  s->add_option("--radius-um", scan.radius_um, "sphere radius in um")->capture_default_str();
  s->add_option("--grid", scan.grid, "lo:hi:samples in nm")->required();
  s->add_option("--peak-threshold", scan.peak_threshold, "|R|^2 peak threshold")->capture_default_str();
  s->add_option("--near-singular", scan.near_singular, "|R| near-singular threshold")
      ->capture_default_str();
  add_index_options(s, scan_index);
  add_common(s, common);

  ProfileOpts prof;
  IndexOpts prof_index;
  auto* f = app.add_subcommand("field-profile", "angular and radial energy-density profiles");
  f->add_option("--pol", prof.pol, "te or tm")->required();
  f->add_option("--ell", prof.ell, "order")->required();
  f->add_option("--m", prof.m, "azimuthal number")->required();
  f->add_option("--lambda-nm", prof.lambda_nm, "vacuum wavelength in nm")->required();
  f->add_option("--r-um", prof.r_um, "radius of the angular profile in um")->required();
  f->add_option("--radius-um", prof.radius_um, "sphere radius in um (default: --r-um)");
  f->add_option("--theta-samples", prof.theta_samples, "angular samples")->capture_default_str();
  f->add_option("--radial-samples", prof.radial_samples, "radial samples")->capture_default_str();
  f->add_option("--radial-output", prof.radial_output, "radial profile path, - for stdout");
  add_index_options(f, prof_index);
  add_common(f, common);

  ClassifyOpts cl;
  auto* k = app.add_subcommand("classify", "classify interior size parameters");
  k->add_option("--ell", cl.ell, "order")->required();
  k->add_option("--zeta", cl.zetas, "values, comma separated or repeated")->required();
  k->add_option("--eta", cl.eta, "index used for the SGM records")->capture_default_str();
  k->add_option("--tolerance", cl.tolerance, "relative tolerance")->capture_default_str();
  add_common(k, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (common.threads < 0) throw ConfigError("--threads must be non-negative");
    parse_format(common.format);
    if (*t) return cmd_sgm_table(t, table, common, out, err);
    if (*d) return cmd_dispersive(d, disp, common, out, err);
    if (*s) return cmd_scan(s, scan, scan_index, common, out);
    if (*f) return cmd_field_profile(f, prof, prof_index, common, out, err);
    if (*k) return cmd_classify(k, cl, common, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return numerical;
  }
  return usage;
}

}  // namespace sgm::cli
