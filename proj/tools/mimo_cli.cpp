// Command-line frontend: MMSE/bound/MI sweeps over SNR, fading averages,
// and self-verification. Output is CSV (default) or JSON on stdout;
// identical arguments and seed give byte-identical output.

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mimo/alphabet.hpp"
#include "mimo/bounds.hpp"
#include "mimo/channel.hpp"
#include "mimo/fading.hpp"
#include "mimo/mi.hpp"
#include "mimo/mmse.hpp"

using namespace mimo;

namespace {

constexpr const char* kVersion = "mimo-mmse 1.0.0";
constexpr std::uint64_t kCliChannelStream = 0xC11A77E1ull;

struct Options {
  std::string constellation = "bpsk";
  std::string alphabet_json;
  std::size_t nt = 1;
  std::string channel_json;
  std::string channel_scalar;
  std::string channel_kind;  // "rayleigh"
  std::size_t n_rx = 1;
  std::string snr_db = "0:2:20";
  std::uint64_t seed = 1;
  std::size_t samples = 1'000'000;
  std::size_t chunk = 10'000;
  int threads = 0;
  std::string format = "csv";
  std::string units = "nats";
  // fading
  std::size_t trials = 2000;
  std::size_t noise_draws = 2000;
  std::string window_db = "12:24";
};

void add_common(CLI::App* cmd, Options& opt, bool with_channel = true) {
  cmd->add_option("--constellation", opt.constellation,
                  "bpsk | qpsk | psk<m> | qam<m>");
  cmd->add_option("--alphabet-json", opt.alphabet_json,
                  "custom alphabet JSON file (overrides --constellation)");
  cmd->add_option("--nt", opt.nt, "transmit antennas (product alphabet order)");
  if (with_channel) {
    cmd->add_option("--channel-json", opt.channel_json, "channel matrix JSON file");
    cmd->add_option("--channel-scalar", opt.channel_scalar,
                    "scalar channel 're' or 're,im'");
    cmd->add_option("--channel", opt.channel_kind,
                    "'rayleigh' for a seeded random channel");
    cmd->add_option("--n", opt.n_rx, "receive antennas for rayleigh channels");
  }
  cmd->add_option("--snr-db", opt.snr_db, "snr in dB: single value or start:step:stop");
  cmd->add_option("--seed", opt.seed, "rng seed");
  cmd->add_option("--samples", opt.samples, "monte carlo samples per point");
  cmd->add_option("--chunk", opt.chunk, "samples per rng substream");
  cmd->add_option("--threads", opt.threads, "worker threads (0 = auto)");
  cmd->add_option("--format", opt.format)->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--units", opt.units)->check(CLI::IsMember({"bits", "nats"}));
}

std::vector<double> parse_snr_db(const std::string& spec) {
  std::vector<double> out;
  auto pos = spec.find(':');
  if (pos == std::string::npos) {
    out.push_back(std::stod(spec));
    return out;
  }
  double start, step, stop;
  char c1, c2;
  std::istringstream in(spec);
  if (!(in >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':') {
    throw std::invalid_argument("bad --snr-db spec (want start:step:stop): " + spec);
  }
  if (!(step > 0.0)) throw std::invalid_argument("--snr-db step must be > 0");
  if (stop < start) throw std::invalid_argument("--snr-db stop must be >= start");
  for (double db = start; db <= stop + 1e-9; db += step) out.push_back(db);
  return out;
}

std::pair<double, double> parse_window_db(const std::string& spec) {
  auto pos = spec.find(':');
  if (pos == std::string::npos) {
    throw std::invalid_argument("bad --window-db spec (want lo:hi): " + spec);
  }
  return {std::stod(spec.substr(0, pos)), std::stod(spec.substr(pos + 1))};
}

Alphabet build_alphabet(const Options& opt) {
  Alphabet scalar = opt.alphabet_json.empty()
                        ? make_scalar(opt.constellation)
                        : alphabet_from_json_file(opt.alphabet_json);
  if (!opt.alphabet_json.empty()) {
    if (opt.nt != 1 && scalar.n_t != opt.nt) {
      throw std::invalid_argument("--nt conflicts with alphabet json 'nt'");
    }
    return scalar;
  }
  return product_alphabet(scalar, opt.nt);
}

ChannelMatrix build_channel(const Options& opt) {
  if (!opt.channel_json.empty()) return ChannelMatrix::from_json_file(opt.channel_json);
  if (!opt.channel_scalar.empty()) {
    double re = 0.0, im = 0.0;
    auto pos = opt.channel_scalar.find(',');
    if (pos == std::string::npos) {
      re = std::stod(opt.channel_scalar);
    } else {
      re = std::stod(opt.channel_scalar.substr(0, pos));
      im = std::stod(opt.channel_scalar.substr(pos + 1));
    }
    return ChannelMatrix::scalar({re, im});
  }
  if (opt.channel_kind == "rayleigh") {
    RngStream stream(opt.seed, kCliChannelStream);
    return sample_rayleigh(stream, opt.n_rx, opt.nt);
  }
  if (!opt.channel_kind.empty()) {
    throw std::invalid_argument("unknown --channel kind: " + opt.channel_kind);
  }
  // default: identity-like scalar channel (requires nt = 1)
  if (opt.nt != 1) {
    throw std::invalid_argument("no channel given; use --channel rayleigh or --channel-json");
  }
  return ChannelMatrix::scalar({1.0, 0.0});
}

double unit_scale(const Options& opt) {
  return opt.units == "bits" ? 1.0 / std::log(2.0) : 1.0;
}

std::string channel_desc(const Options& opt) {
  if (!opt.channel_json.empty()) return "json:" + opt.channel_json;
  if (!opt.channel_scalar.empty()) return "scalar:" + opt.channel_scalar;
  if (opt.channel_kind == "rayleigh") {
    return "rayleigh(n=" + std::to_string(opt.n_rx) + ")";
  }
  return "scalar:1";
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Doubles the cap until the upper-bound integrand decays below 1e-10.
Snr auto_tail_cap(const ReceivedConstellation& rc, const Alphabet& a,
                  double snr_max) {
  double cap = std::max(16.0 * snr_max, 100.0);
  for (int k = 0; k < 60; ++k) {
    if (mmse_upper_bound(rc, a, Snr(cap)) < 1e-10) return Snr(cap);
    cap *= 2.0;
  }
  throw std::invalid_argument("increase tail cap");
}

struct Row {
  double snr_db;
  std::optional<double> mmse, mmse_se, lower, upper, mi, mi_se, mi_lb, mi_ub;
};

void emit(const Options& opt, const std::string& command,
          const std::vector<std::string>& columns, const std::vector<Row>& rows,
          const std::vector<std::pair<std::string, std::string>>& extra_meta = {}) {
  auto get = [](const Row& r, const std::string& col) -> std::optional<double> {
    if (col == "snr_db") return r.snr_db;
    if (col == "mmse") return r.mmse;
    if (col == "mmse_se") return r.mmse_se;
    if (col == "lower") return r.lower;
    if (col == "upper") return r.upper;
    if (col == "mi") return r.mi;
    if (col == "mi_se") return r.mi_se;
    if (col == "mi_lb") return r.mi_lb;
    if (col == "mi_ub") return r.mi_ub;
    return std::nullopt;
  };
  if (opt.format == "json") {
    nlohmann::json j;
    j["version"] = kVersion;
    j["command"] = command;
    j["config"] = {{"constellation", opt.constellation},
                   {"nt", opt.nt},
                   {"channel", channel_desc(opt)},
                   {"snr_db", opt.snr_db},
                   {"seed", opt.seed},
                   {"samples", opt.samples},
                   {"chunk", opt.chunk},
                   {"units", opt.units}};
    for (const auto& [k, v] : extra_meta) j["config"][k] = v;
    j["columns"] = columns;
    auto& out_rows = j["rows"];
    out_rows = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json jr;
      for (const auto& col : columns) {
        auto v = get(r, col);
        if (v) jr[col] = *v;
      }
      out_rows.push_back(jr);
    }
    std::printf("%s\n", j.dump(2).c_str());
    return;
  }
  std::printf("# %s %s\n", kVersion, command.c_str());
  std::printf("# constellation=%s nt=%zu channel=%s\n", opt.constellation.c_str(),
              opt.nt, channel_desc(opt).c_str());
  std::printf("# seed=%llu samples=%zu chunk=%zu snr_db=%s units=%s\n",
              static_cast<unsigned long long>(opt.seed), opt.samples, opt.chunk,
              opt.snr_db.c_str(), opt.units.c_str());
  for (const auto& [k, v] : extra_meta) std::printf("# %s=%s\n", k.c_str(), v.c_str());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    std::printf("%s%s", c ? "," : "", columns[c].c_str());
  }
  std::printf("\n");
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      auto v = get(r, columns[c]);
      std::printf("%s%s", c ? "," : "", v ? fmt(*v).c_str() : "");
    }
    std::printf("\n");
  }
}

int run_point_sweep(const Options& opt, const std::string& command) {
  Alphabet a = build_alphabet(opt);
  ChannelMatrix h = build_channel(opt);
  auto rc = received_constellation(h, a);
  auto rule = QuadratureRule::gauss_hermite();
  auto snr_points = parse_snr_db(opt.snr_db);
  const double scale = unit_scale(opt);

  const bool want_mmse = command == "mmse" || command == "sweep";
  const bool want_bounds = command == "bounds" || command == "sweep";
  const bool want_mi = command == "mi" || command == "sweep";

  std::optional<Snr> tail_cap;
  if (want_bounds && command == "sweep") {
    tail_cap = auto_tail_cap(rc, a, Snr::from_db(snr_points.back()).value);
  }

  std::vector<Row> rows;
  for (double db : snr_points) {
    Snr snr = Snr::from_db(db);
    Row r;
    r.snr_db = db;
    if (want_mmse) {
      if (h.n_tx == 1) {
        // SIMO/SISO closed form: exact quadrature, zero standard error
        r.mmse = mmse_simo(h, a, snr, rule);
        r.mmse_se = 0.0;
      } else {
        McConfig cfg{opt.seed, opt.samples, opt.chunk, opt.threads};
        auto est = mmse_mimo_mc(h, a, snr, cfg);
        r.mmse = est.mean;
        r.mmse_se = est.std_error;
      }
    }
    if (want_bounds) {
      r.lower = mmse_lower_bound(rc, a, snr, rule);
      r.upper = mmse_upper_bound(rc, a, snr);
    }
    if (want_mi) {
      McConfig cfg{opt.seed, opt.samples, opt.chunk, opt.threads};
      auto est = mi_mc(h, a, snr, cfg);
      r.mi = est.mean * scale;
      r.mi_se = est.std_error * scale;
      if (tail_cap) {
        auto bp = mi_bounds(rc, a, snr, *tail_cap, rule);
        r.mi_lb = bp.lower * scale;
        r.mi_ub = bp.upper * scale;
      }
    }
    rows.push_back(r);
  }

  std::vector<std::string> columns{"snr_db"};
  if (want_mmse) columns.insert(columns.end(), {"mmse", "mmse_se"});
  if (want_bounds) columns.insert(columns.end(), {"lower", "upper"});
  if (want_mi) columns.insert(columns.end(), {"mi", "mi_se"});
  if (want_mi && tail_cap) columns.insert(columns.end(), {"mi_lb", "mi_ub"});
  emit(opt, command, columns, rows);
  return 0;
}

int run_verify(const Options& opt) {
  Alphabet a = build_alphabet(opt);
  ChannelMatrix h = build_channel(opt);
  auto rc = received_constellation(h, a);
  auto rule = QuadratureRule::gauss_hermite();
  bool ok = true;

  // sandwich: lower - 3 SE <= mc <= upper + 3 SE across the grid
  for (double db : parse_snr_db(opt.snr_db)) {
    Snr snr = Snr::from_db(db);
    McConfig cfg{opt.seed, opt.samples, opt.chunk, opt.threads};
    auto mc = mmse_mimo_mc(h, a, snr, cfg);
    double lo = mmse_lower_bound(rc, a, snr, rule);
    double hi = mmse_upper_bound(rc, a, snr);
    // Skip the lower comparison once the upper bound is below what the
    // sample budget can resolve: the error distribution is heavy-tailed
    // there and the standard error stops being meaningful. The 1e-12
    // absolute slack absorbs quadrature round-off dust.
    double resolution = 1e-1 / std::sqrt(static_cast<double>(opt.samples));
    bool pass = (hi < resolution || lo - 3.0 * mc.std_error - 1e-12 <= mc.mean) &&
                mc.mean <= hi + 3.0 * mc.std_error + 1e-12;
    std::printf("%s sandwich snr_db=%s lower=%s mmse=%s upper=%s se=%s\n",
                pass ? "ok" : "FAIL", fmt(db).c_str(), fmt(lo).c_str(),
                fmt(mc.mean).c_str(), fmt(hi).c_str(), fmt(mc.std_error).c_str());
    ok = ok && pass;
  }

  // derivative identity: central difference of MI vs MMSE
  for (double snr_lin : {1.0, 4.0, 10.0}) {
    const double rel_step = 0.01;
    Snr lo(snr_lin * (1.0 - rel_step));
    Snr hi(snr_lin * (1.0 + rel_step));
    McConfig cfg{opt.seed, opt.samples, opt.chunk, opt.threads};
    auto i_lo = mi_mc(h, a, lo, cfg);   // common substreams: correlated
    auto i_hi = mi_mc(h, a, hi, cfg);   // draws cancel most MC noise
    double deriv = (i_hi.mean - i_lo.mean) / (hi.value - lo.value);
    double deriv_se = std::sqrt(i_hi.std_error * i_hi.std_error +
                                i_lo.std_error * i_lo.std_error) /
                      (hi.value - lo.value);
    auto mc = mmse_mimo_mc(h, a, Snr(snr_lin), cfg);
    double tol = 3.0 * std::sqrt(deriv_se * deriv_se +
                                 mc.std_error * mc.std_error) +
                 0.02 * mc.mean;
    bool pass = std::abs(deriv - mc.mean) <= tol;
    std::printf("%s derivative snr=%s dI/dsnr=%s mmse=%s tol=%s\n",
                pass ? "ok" : "FAIL", fmt(snr_lin).c_str(), fmt(deriv).c_str(),
                fmt(mc.mean).c_str(), fmt(tol).c_str());
    ok = ok && pass;
  }

  std::printf("verify: %s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}

int run_fading(const Options& opt) {
  Alphabet a = build_alphabet(opt);
  auto snr_points = parse_snr_db(opt.snr_db);
  SnrGrid grid;
  for (double db : snr_points) grid.points.push_back(Snr::from_db(db).value);
  McConfig cfg{opt.seed, opt.noise_draws, std::min<std::size_t>(opt.noise_draws, 1000),
               opt.threads};
  auto result = average_mi(opt.n_rx, a, grid, opt.trials, cfg);
  auto [win_lo, win_hi] = parse_window_db(opt.window_db);
  auto fit = diversity_slope(result, mi_asymptote(a), win_lo, win_hi);

  const double scale = unit_scale(opt);
  std::vector<Row> rows;
  for (std::size_t k = 0; k < result.snr_db.size(); ++k) {
    Row r;
    r.snr_db = result.snr_db[k];
    r.mi = result.avg_mi[k] * scale;
    r.mi_se = result.std_error[k] * scale;
    rows.push_back(r);
  }
  std::vector<std::pair<std::string, std::string>> meta = {
      {"trials", std::to_string(opt.trials)},
      {"noise_draws", std::to_string(opt.noise_draws)},
      {"n_rx", std::to_string(opt.n_rx)},
      {"slope", fmt(fit.slope)},
      {"intercept", fmt(fit.intercept)},
      {"r_squared", fmt(fit.r_squared)},
      {"window_db", opt.window_db}};
  emit(opt, "fading", {"snr_db", "mi", "mi_se"}, rows, meta);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-alphabet MIMO MMSE / mutual-information toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Options opt;
  auto* cmd_mmse = app.add_subcommand("mmse", "MMSE vs snr");
  auto* cmd_bounds = app.add_subcommand("bounds", "MMSE lower/upper bounds vs snr");
  auto* cmd_mi = app.add_subcommand("mi", "mutual information vs snr");
  auto* cmd_sweep = app.add_subcommand("sweep", "all quantities vs snr");
  auto* cmd_verify = app.add_subcommand("verify", "sandwich + derivative checks");
  auto* cmd_fading = app.add_subcommand("fading", "average MI over Rayleigh fading");
  for (auto* c : {cmd_mmse, cmd_bounds, cmd_mi, cmd_sweep, cmd_verify}) {
    add_common(c, opt);
  }
  add_common(cmd_fading, opt, /*with_channel=*/false);
  cmd_fading->add_option("--n", opt.n_rx, "receive antennas");
  cmd_fading->add_option("--trials", opt.trials, "channel draws");
  cmd_fading->add_option("--noise-draws", opt.noise_draws, "noise draws per channel");
  cmd_fading->add_option("--window-db", opt.window_db, "slope fit window lo:hi");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_verify->parsed()) return run_verify(opt);
    if (cmd_fading->parsed()) return run_fading(opt);
    if (cmd_mmse->parsed()) return run_point_sweep(opt, "mmse");
    if (cmd_bounds->parsed()) return run_point_sweep(opt, "bounds");
    if (cmd_mi->parsed()) return run_point_sweep(opt, "mi");
    return run_point_sweep(opt, "sweep");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
