#include "pulsetrain/cli.hpp"

#include "pulsetrain/criteria.hpp"
#include "pulsetrain/envelope_fit.hpp"
#include "pulsetrain/errors.hpp"
#include "pulsetrain/photon_budget.hpp"
#include "pulsetrain/poisson.hpp"
#include "pulsetrain/pulse_map.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unistd.h>

namespace pulsetrain::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Common {
  int digits = kDefaultDigits;
  int significant = 25;
  std::string output;
  std::string format = "csv";
};

std::string render(const Table& table, const std::string& format) {
  std::ostringstream out;
  if (format == "json") {
    nlohmann::ordered_json doc;
    doc["columns"] = table.columns;
    doc["rows"] = table.rows;
    out << doc.dump(1) << '\n';
    return out.str();
  }
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << (i ? "," : "") << cells[i];
    }
    out << '\n';
  };
  line(table.columns);
  for (const auto& row : table.rows) {
    line(row);
  }
  return out.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) {
      throw Error("cannot open '" + tmp.string() + "' for writing");
    }
    file << content;
    file.flush();
    if (!file) {
      throw Error("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename into '" + path + "': " + ec.message());
  }
}

void emit(const Table& table, const Common& common, std::ostream& out) {
  const std::string text = render(table, common.format);
  if (common.output.empty()) {
    out << text;
  } else {
    write_atomic(common.output, text);
  }
}

BigReal parse_real(const std::string& text, Precision p, const char* name) {
  try {
    return BigReal(text, p);
  } catch (const ArgumentError&) {
    throw UsageError(std::string(name) + ": not a number: '" + text + "'");
  }
}

BigReal positive_real(const std::string& text, Precision p, const char* name) {
  BigReal x = parse_real(text, p, name);
  if (!(x > 0)) {
    throw UsageError(std::string(name) + " must be positive, got '" + text + "'");
  }
  return x;
}

PulseArea parse_k(const std::string& text) {
  try {
    return PulseArea::parse(text);
  } catch (const ArgumentError& e) {
    throw UsageError(std::string("--k: ") + e.what());
  }
}

std::set<int> parse_which(const std::string& text) {
  std::set<int> out;
  std::stringstream ss(text);
  std::string part;
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size() || v < 1 || v > kSumCount) {
        throw std::invalid_argument(s);
      }
      return v;
    } catch (const std::exception&) {
      throw UsageError("--which: expected indices in 1..10, got '" + text + "'");
    }
  };
  while (std::getline(ss, part, ',')) {
    if (const auto dash = part.find('-'); dash != std::string::npos) {
      const int lo = to_int(part.substr(0, dash));
      const int hi = to_int(part.substr(dash + 1));
      if (lo > hi) {
        throw UsageError("--which: empty range '" + part + "'");
      }
      for (int i = lo; i <= hi; ++i) {
        out.insert(i);
      }
    } else {
      out.insert(to_int(part));
    }
  }
  if (out.empty()) {
    throw UsageError("--which selects no sums");
  }
  return out;
}

Strategy parse_strategy(const std::string& text) {
  if (text == "auto") return Strategy::automatic;
  if (text == "direct") return Strategy::direct;
  if (text == "taylor") return Strategy::taylor;
  throw UsageError("--strategy must be auto, direct or taylor");
}

std::string num(const BigReal& x, const Common& c) { return x.to_string(c.significant); }

// Flat key = value file; '#' starts a comment.
std::map<std::string, std::string> read_scenario(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw UsageError("cannot read scenario file '" + path + "'");
  }
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(file, line)) {
    ++number;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(number) + ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--digits", c.digits, "working precision in decimal digits")->check(CLI::Range(kMinimumDigits, 100000));
  sub->add_option("--sig", c.significant, "significant digits in the output")->check(CLI::Range(1, 100000));
  sub->add_option("-o,--output", c.output, "output file (default stdout)");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

struct Physics {
  std::string nbar;
  std::string k;
  std::string strategy = "auto";
  int taylor_order = 10;

  SumOptions sums() const {
    SumOptions o;
    o.strategy = parse_strategy(strategy);
    o.taylor_order = taylor_order;
    return o;
  }
};

void add_physics(CLI::App* sub, Physics& ph, bool need_k = true) {
  sub->add_option("--nbar", ph.nbar, "mean photon number")->required();
  auto* k = sub->add_option("--k", ph.k, "pulse area index, e.g. 2, 1/2, 0.5");
  if (need_k) {
    k->required();
  }
  sub->add_option("--strategy", ph.strategy, "auto, direct or taylor");
  sub->add_option("-p,--taylor-order", ph.taylor_order, "Taylor order")->check(CLI::Range(2, kMaxMomentOrder));
}

std::vector<long> period_points(const PulseArea& k, long m_max, bool skip_zero) {
  std::vector<long> ms;
  for (long m = skip_zero ? 1 : 0; m <= m_max; ++m) {
    if (k.completes_period(m)) {
      ms.push_back(m);
    }
  }
  return ms;
}

BigReal rabi_periods(const PulseArea& k, long m, Precision p) { return k.value(p) * m / 2; }

}  // namespace

int run_checks(const std::vector<std::string>& only, double tolerance_scale, std::ostream& out, std::ostream& err) {
  std::vector<const Criterion*> selected;
  if (only.empty()) {
    for (const Criterion& c : acceptance_criteria()) {
      selected.push_back(&c);
    }
  } else {
    for (const std::string& name : only) {
      const Criterion* c = find_criterion(name);
      if (!c) {
        err << "unknown criterion '" << name << "'\n";
        return kExitUsage;
      }
      selected.push_back(c);
    }
  }
  int failed = 0;
  for (const Criterion* c : selected) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult result;
    try {
      result = c->run(tolerance_scale);
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += result.pass ? 0 : 1;
    std::ostringstream line;
    line << (result.pass ? "PASS" : "FAIL") << "  " << c->id << " " << c->name << "  " << result.detail << "  ["
         << std::fixed << std::setprecision(2) << seconds << " s]\n";
    out << line.str() << std::flush;
  }
  out << (selected.size() - failed) << "/" << selected.size() << " criteria passed\n";
  return failed == 0 ? kExitOk : kExitNumeric;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rabi oscillation under a train of k pi pulses", "pulsetrain"};
  app.require_subcommand(1);
  Common common;
  Physics ph;

  // sums
  auto* sums = app.add_subcommand("sums", "Poisson-weighted sums S_1..S_10");
  add_common(sums, common);
  add_physics(sums, ph, false);
  std::string tau_text;
  std::string which = "1-10";
  std::optional<int> l_exp;
  sums->add_option("--tau", tau_text, "coupling phase g t instead of --k");
  sums->add_option("--which", which, "indices, e.g. 1-7 or 1,4,9");
  sums->add_option("-l", l_exp, "direct summation to truncation_cutoff(nbar, l)")->check(CLI::NonNegativeNumber);

  // map
  auto* map_cmd = app.add_subcommand("map", "Bloch channel of one pulse");
  add_common(map_cmd, common);
  add_physics(map_cmd, ph);

  // inversion
  auto* inversion = app.add_subcommand("inversion", "population inversion across the pulse train");
  add_common(inversion, common);
  add_physics(inversion, ph);
  long m_max = 100;
  int samples = 0;
  bool envelope_only = false;
  inversion->add_option("--m-max", m_max, "last pulse count")->check(CLI::NonNegativeNumber);
  inversion->add_option("--samples", samples, "points inside each pulse (0: pulse boundaries only)")
      ->check(CLI::NonNegativeNumber);
  inversion->add_flag("--envelope", envelope_only, "whole Rabi periods only, m >= 1");

  // profile
  auto* profile = app.add_subcommand("profile", "inversion inside pulses on a tau grid");
  add_common(profile, common);
  add_physics(profile, ph);
  long profile_m_max = 2;
  int profile_samples = 200;
  profile->add_option("--m-max", profile_m_max, "profiles for m = 0..m_max")->check(CLI::NonNegativeNumber);
  profile->add_option("--samples", profile_samples, "grid points per pulse")->check(CLI::Range(2, 1000000));

  // failprob
  auto* failprob = app.add_subcommand("failprob", "sphere-averaged failure probability at whole periods");
  add_common(failprob, common);
  add_physics(failprob, ph);
  long fail_m_max = 200;
  long mc_count = 2000;
  std::uint64_t seed = 0xC0FFEE;
  failprob->add_option("--m-max", fail_m_max)->check(CLI::NonNegativeNumber);
  failprob->add_option("--mc-count", mc_count, "Monte Carlo samples (0 disables)")->check(CLI::NonNegativeNumber);
  failprob->add_option("--seed", seed);

  // budget
  auto* budget = app.add_subcommand("budget", "photon-number budget for an ion trap");
  add_common(budget, common);
  std::string scenario_path;
  budget->add_option("--scenario", scenario_path, "key = value file")->required();

  // fit
  auto* fit = app.add_subcommand("fit", "exponential envelope fit of inversion --envelope output");
  add_common(fit, common);
  std::string fit_input;
  fit->add_option("--input", fit_input, "CSV with columns m,N_R,W")->required();

  // check
  auto* check = app.add_subcommand("check", "acceptance criteria");
  std::vector<std::string> only;
  double tolerance_scale = 1.0;
  check->add_option("--only", only, "criterion names or numbers");
  check->add_option("--tolerance-scale", tolerance_scale, "multiply every tolerance")->check(CLI::NonNegativeNumber);

  auto error_line = [&err](const std::string& kind, int code, const std::string& message) {
    nlohmann::ordered_json line;
    line["error"] = kind;
    line["exit"] = code;
    line["message"] = message;
    err << line.dump() << '\n';
    return code;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    return error_line("usage", kExitUsage, e.what());
  }

  try {
    if (check->parsed()) {
      return run_checks(only, tolerance_scale, out, err);
    }

    const Precision prec(common.digits);
    Table table;

    if (budget->parsed()) {
      const auto kv = read_scenario(scenario_path);
      static const std::set<std::string> known = {"wavelength", "xi",    "mass",     "mass_amu", "k",
                                                  "field",      "beam_area", "omega_l", "coupling", "power"};
      for (const auto& [key, value] : kv) {
        if (!known.count(key)) {
          throw UsageError("unknown scenario key '" + key + "'");
        }
      }
      auto need = [&](const char* key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) {
          throw UsageError(std::string("scenario is missing '") + key + "'");
        }
        return it->second;
      };
      auto maybe = [&](const char* key) -> std::optional<BigReal> {
        const auto it = kv.find(key);
        if (it == kv.end()) {
          return std::nullopt;
        }
        return positive_real(it->second, prec, key);
      };
      const PhysicalConstants constants = PhysicalConstants::codata(prec);
      BigReal mass(prec);
      if (kv.count("mass_amu")) {
        mass = mass_from_amu(positive_real(kv.at("mass_amu"), prec, "mass_amu"), constants);
      } else {
        mass = positive_real(need("mass"), prec, "mass");
      }
      TrapScenario s{positive_real(need("wavelength"), prec, "wavelength"), positive_real(need("xi"), prec, "xi"),
                     mass, kv.count("k") ? parse_k(kv.at("k")) : PulseArea(2), maybe("field"), maybe("beam_area")};
      try {
        s.validate();
      } catch (const ArgumentError& e) {
        throw UsageError(e.what());
      }
      const BigReal omega_t = trap_frequency(s.ion_mass, s.xi * s.wavelength, constants);
      const BigReal e_bound = field_upper_bound(s.ion_mass, s.xi, s.wavelength, constants);
      const BigReal n_eff = effective_photon_number(s.k, s.wavelength, s.field.value_or(e_bound), constants);
      const NbarBound bound = nbar_upper_bound(s.ion_mass, s.k, s.xi, s.wavelength, constants);
      for (const std::string& w : bound.warnings) {
        err << "warning: " << w << '\n';
      }
      table.columns = {"quantity", "value", "unit"};
      table.rows = {
          {"omega_t", num(omega_t, common), "rad/s"},
          {"field_bound", num(e_bound, common), "V/m"},
          {"nbar_eff", num(n_eff, common), "1"},
          {"nbar_bound", num(bound.value, common), "1"},
          {"prefactor", num(bound.prefactor, common), "SI"},
          {"prefactor_rounded", BigReal(bound.rounded_prefactor, prec).to_string(common.significant), "SI"},
          {"coefficient", num(bound.coefficient, common), "SI"},
      };
      const auto omega_l = maybe("omega_l");
      const auto coupling = maybe("coupling");
      const auto power = maybe("power");
      if (omega_l && coupling && power && s.beam_area) {
        table.rows.push_back({"nbar_continuous",
                              num(nbar_continuous_mode(s.k, *omega_l, *coupling, *s.beam_area, *power, constants), common),
                              "1"});
      }
      emit(table, common, out);
      return kExitOk;
    }

    if (fit->parsed()) {
      std::ifstream file(fit_input);
      if (!file) {
        throw UsageError("cannot read '" + fit_input + "'");
      }
      std::string line;
      std::getline(file, line);
      std::vector<std::string> header;
      {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
          header.push_back(cell);
        }
      }
      const auto col = [&](const char* name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
          throw UsageError(std::string("input has no column '") + name + "'");
        }
        return static_cast<std::size_t>(it - header.begin());
      };
      const std::size_t nr_col = col("N_R");
      const std::size_t w_col = col("W");
      std::vector<EnvelopePoint> points;
      while (std::getline(file, line)) {
        if (line.empty()) {
          continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
          cells.push_back(cell);
        }
        if (cells.size() != header.size()) {
          throw UsageError("malformed row: '" + line + "'");
        }
        points.push_back({parse_real(cells[nr_col], prec, "N_R"), parse_real(cells[w_col], prec, "W")});
      }
      const FitResult r = fit_exponential(points);
      table.columns = {"quantity", "value"};
      table.rows = {{"A", num(r.A, common)},
                    {"b", num(r.b, common)},
                    {"rms_residual", num(r.rms_residual, common)},
                    {"n_used", std::to_string(r.n_used)},
                    {"n_excluded", std::to_string(r.n_excluded)}};
      emit(table, common, out);
      return kExitOk;
    }

    const BigReal nbar = positive_real(ph.nbar, prec, "--nbar");
    const SumOptions sum_options = ph.sums();

    if (sums->parsed()) {
      const std::set<int> indices = parse_which(which);
      if (tau_text.empty() == ph.k.empty()) {
        throw UsageError("give exactly one of --k and --tau");
      }
      BigReal tau = ph.k.empty() ? parse_real(tau_text, prec, "--tau") : pulse_tau(nbar, parse_k(ph.k));
      if (tau.sign() < 0) {
        throw UsageError("--tau must be non-negative");
      }
      std::map<int, BigReal> values;
      if (l_exp) {
        const long t = truncation_cutoff(nbar, *l_exp);
        const long lo = std::min(precision_window(nbar, prec).lo, t);
        const SumArray all = sum_direct_all(nbar, tau, TermRange{lo, t}, sum_options.direct);
        for (int i : indices) {
          values.emplace(i, all[i - 1]);
        }
      } else {
        values = compute_sums(nbar, tau, indices, sum_options);
      }
      table.columns = {"index", "value"};
      for (const auto& [i, v] : values) {
        table.rows.push_back({std::to_string(i), num(v, common)});
      }
      emit(table, common, out);
      return kExitOk;
    }

    const PulseArea k = parse_k(ph.k);
    MapOptions map_options;
    map_options.sums = sum_options;
    const PulseMap map = build_pulse_map(nbar, k, map_options);

    if (map_cmd->parsed()) {
      const PowerDecomposition& d = map.decomposition;
      table.columns = {"quantity", "value"};
      table.rows = {{"tau", num(map.tau, common)},       {"Mxx", num(map.mxx, common)},
                    {"M1_11", num(map.m1.a11, common)},  {"M1_12", num(map.m1.a12, common)},
                    {"M1_21", num(map.m1.a21, common)},  {"M1_22", num(map.m1.a22, common)},
                    {"c_y", num(map.shift_y, common)},   {"c_z", num(map.shift_z, common)},
                    {"delta", num(d.delta, common)},     {"modulus", num(d.modulus, common)},
                    {"theta", num(d.theta, common)}};
      for (int i = 0; i < 7; ++i) {
        table.rows.push_back({"S" + std::to_string(i + 1), num(map.S[i], common)});
      }
      emit(table, common, out);
      return kExitOk;
    }

    if (inversion->parsed()) {
      table.columns = {"m", "N_R", "W"};
      if (envelope_only) {
        const std::vector<long> ms = period_points(k, m_max, true);
        const std::vector<BigReal> W = inversion_series(map, ms);
        for (std::size_t i = 0; i < ms.size(); ++i) {
          table.rows.push_back({std::to_string(ms[i]), num(rabi_periods(k, ms[i], prec), common), num(W[i], common)});
        }
      } else if (samples == 0) {
        std::vector<long> ms;
        for (long m = 0; m <= m_max; ++m) {
          ms.push_back(m);
        }
        const std::vector<BigReal> W = inversion_series(map, ms);
        for (std::size_t i = 0; i < ms.size(); ++i) {
          table.rows.push_back({std::to_string(ms[i]), num(rabi_periods(k, ms[i], prec), common), num(W[i], common)});
        }
      } else {
        // interior points j/samples of each pulse, then the final boundary
        std::vector<long> ms;
        for (long m = 0; m < m_max; ++m) {
          ms.push_back(m);
        }
        const auto profiles = inversion_profiles(map, ms, samples + 1, sum_options);
        for (long m = 0; m < m_max; ++m) {
          for (int j = 0; j < samples; ++j) {
            const BigReal n_r = k.value(prec) * (BigReal(m, prec) + BigReal(j, prec) / samples) / 2;
            table.rows.push_back({std::to_string(m), num(n_r, common), num(profiles[m][j].W, common)});
          }
        }
        table.rows.push_back({std::to_string(m_max), num(rabi_periods(k, m_max, prec), common),
                              num(inversion_at_pulse(map, m_max), common)});
      }
      emit(table, common, out);
      return kExitOk;
    }

    if (profile->parsed()) {
      std::vector<long> ms;
      for (long m = 0; m <= profile_m_max; ++m) {
        ms.push_back(m);
      }
      const auto profiles = inversion_profiles(map, ms, profile_samples, sum_options);
      table.columns = {"m", "tau", "W"};
      for (std::size_t i = 0; i < ms.size(); ++i) {
        for (const ProfilePoint& point : profiles[i]) {
          table.rows.push_back({std::to_string(ms[i]), num(point.tau, common), num(point.W, common)});
        }
      }
      emit(table, common, out);
      return kExitOk;
    }

    if (failprob->parsed()) {
      table.columns = {"m", "p_f_analytic", "p_f_mc"};
      for (long m : period_points(k, fail_m_max, false)) {
        const BigReal analytic = average_failure_probability(map, m).value;
        std::string mc;
        if (mc_count > 0) {
          mc = num(average_failure_probability(map, m, MonteCarlo{seed, mc_count}).value, common);
        }
        table.rows.push_back({std::to_string(m), num(analytic, common), mc});
      }
      emit(table, common, out);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    return error_line("usage", kExitUsage, e.what());
  } catch (const PlannerError& e) {
    return error_line("planner", kExitNumeric, e.what());
  } catch (const DomainError& e) {
    return error_line("domain", kExitNumeric, e.what());
  } catch (const ResourceError& e) {
    return error_line("resource", kExitNumeric, e.what());
  } catch (const InsufficientDataError& e) {
    return error_line("insufficient-data", kExitNumeric, e.what());
  } catch (const Error& e) {
    return error_line("numeric", kExitNumeric, e.what());
  }
  return error_line("usage", kExitUsage, "no subcommand");
}

}  // namespace pulsetrain::cli
