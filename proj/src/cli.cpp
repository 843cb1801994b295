#include "ses/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ses/availability.hpp"
#include "ses/diagram.hpp"
#include "ses/equilibrium.hpp"
#include "ses/error.hpp"
#include "ses/interactions.hpp"
#include "ses/io.hpp"
#include "ses/opensys.hpp"
#include "ses/partitioning.hpp"
#include "ses/verify.hpp"

namespace ses::cli {
namespace {

namespace fs = std::filesystem;
using io::format_bool;
using io::format_number;
using io::Json;
using io::Table;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  UnitSystem units = UnitSystem::reduced();
  verify::Tolerances tolerances;
  std::string output = "csv";
  std::uint64_t seed = 0;
};

UnitSystem units_named(const std::string& name) {
  if (name == "reduced") return UnitSystem::reduced();
  if (name == "si" || name == "SI") return UnitSystem::si();
  fail(ErrorCode::InvalidArgument, "unknown unit system '" + name + "'");
}

void validate(const RunConfig& c) {
  const auto& t = c.tolerances;
  if (!(t.energy_tol > 0.0 && t.entropy_tol > 0.0 && t.fd_step > 0.0))
    fail(ErrorCode::InvalidArgument, "tolerances must be positive");
  if (c.output != "csv" && c.output != "json")
    fail(ErrorCode::InvalidArgument, "output must be csv or json");
  if (!(c.units.k_B > 0.0 && c.units.h > 0.0))
    fail(ErrorCode::InvalidArgument, "unit constants must be positive");
}

RunConfig load_config(const fs::path& path) {
  const Json j = io::read_json_file(path);
  RunConfig c;
  try {
    if (j.contains("units")) {
      const Json& u = j.at("units");
      if (u.is_string()) {
        c.units = units_named(u.get<std::string>());
      } else {
        c.units = units_named(u.value("mode", std::string("reduced")));
        c.units.k_B = u.value("k_B", c.units.k_B);
        c.units.h = u.value("h", c.units.h);
      }
    }
    if (j.contains("tolerances")) {
      const Json& t = j.at("tolerances");
      c.tolerances.energy_tol = t.value("energy_tol", c.tolerances.energy_tol);
      c.tolerances.entropy_tol = t.value("entropy_tol", c.tolerances.entropy_tol);
      c.tolerances.fd_step = t.value("fd_step", c.tolerances.fd_step);
    }
    c.output = j.value("output", c.output);
    c.seed = j.value("seed", c.seed);
  } catch (const Json::exception& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return c;
}

// What a subcommand produced: a table, or a finished text artifact.
struct Result {
  Table table;
  std::optional<Json> annotation;
  std::optional<std::string> text;
  int exit_code = 0;
};

std::string render(const Result& r, const RunConfig& cfg) {
  if (r.text) return *r.text;
  if (cfg.output == "json") {
    Json j = r.table.json();
    j["seed"] = cfg.seed;
    if (r.annotation) j["annotation"] = *r.annotation;
    return j.dump(2) + "\n";
  }
  std::string s = "# seed=" + std::to_string(cfg.seed) + "\n" + r.table.csv();
  if (r.annotation) s += "# annotation " + r.annotation->dump() + "\n";
  return s;
}

std::shared_ptr<const Spectrum> load_spectrum(const std::string& path) {
  return std::make_shared<Spectrum>(io::spectrum_from_json(io::read_json_file(path)));
}

std::string fmt(double x) { return format_number(x); }

std::string fmt_beta(const InverseTemperature& b) { return fmt(b.value); }

double temperature_of(const InverseTemperature& b, const UnitSystem& u) {
  if (!b.is_finite()) return 0.0;
  return u.temperature_of_beta(b.value);
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("malformed ") + what + " '" + text + "'");
    }
  }
  return v;
}

std::vector<double> parse_grid(const std::string& text, bool log_spaced) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw UsageError("--b-grid expects lo:hi:n");
  double lo, hi;
  int n;
  try {
    lo = std::stod(parts[0]);
    hi = std::stod(parts[1]);
    n = std::stoi(parts[2]);
  } catch (const std::exception&) {
    throw UsageError("malformed --b-grid '" + text + "'");
  }
  if (n < 1) throw UsageError("--b-grid needs n >= 1");
  if (log_spaced && !(lo * hi > 0.0)) throw UsageError("--log needs lo and hi of the same sign, nonzero");
  std::vector<double> grid;
  for (int i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : double(i) / (n - 1);
    grid.push_back(log_spaced ? std::copysign(std::exp(std::log(std::fabs(lo)) * (1 - f) +
                                                       std::log(std::fabs(hi)) * f),
                                              lo)
                              : lo + (hi - lo) * f);
  }
  return grid;
}

ReservoirKind kind_named(const std::string& k) {
  if (k == "fixed_Vn" || k == "Gamma") return ReservoirKind::fixed_Vn;
  if (k == "variable_V" || k == "Phi") return ReservoirKind::variable_V;
  if (k == "variable_n" || k == "Upsilon") return ReservoirKind::variable_n;
  if (k == "variable_Vn" || k == "Xi") return ReservoirKind::variable_Vn;
  throw UsageError("unknown reservoir kind '" + k + "'");
}

CLI::App* sub(CLI::App& parent, const std::string& name, const std::string& desc) {
  CLI::App* s = parent.add_subcommand(name, desc);
  s->fallthrough();
  return s;
}

using Action = std::function<Result()>;

struct Dispatcher {
  std::vector<std::pair<CLI::App*, Action>> actions;
  void on(CLI::App* app, Action a) { actions.emplace_back(app, std::move(a)); }
};

// ------------------------------------------------------------------ spectrum

void add_spectrum(CLI::App& app, Dispatcher& d, const RunConfig& cfg) {
  CLI::App* spectrum = sub(app, "spectrum", "Build and inspect spectra");
  spectrum->require_subcommand(1);

  struct BuildArgs {
    std::string kind, label, sides;
    std::vector<std::string> levels;
    double hnu = 1.0, mass = 1.0, volume = 1.0;
    std::optional<int> n_levels, max_q;
    std::optional<double> tmax;
    double tail = kMaxTailBound;
  };
  auto ba = std::make_shared<BuildArgs>();
  CLI::App* build = sub(*spectrum, "build", "Emit a spectrum file");
  build->add_option("--kind", ba->kind, "finite, oscillator or box")
      ->required()
      ->check(CLI::IsMember({"finite", "oscillator", "box"}));
  build->add_option("--level", ba->levels, "Level as energy:degeneracy (finite)");
  build->add_option("--hnu", ba->hnu, "Oscillator quantum");
  build->add_option("--n-levels", ba->n_levels, "Oscillator level count (automatic when absent)");
  build->add_option("--mass", ba->mass, "Particle mass (box)");
  build->add_option("--volume", ba->volume, "Cube volume (box)");
  build->add_option("--sides", ba->sides, "Box sides a,b,c");
  build->add_option("--max-q", ba->max_q, "Largest quantum number per direction (box)");
  build->add_option("--tmax", ba->tmax, "Highest temperature the truncation must serve");
  build->add_option("--tail-tol", ba->tail, "Tail tolerance of the truncation");
  build->add_option("--label", ba->label, "Label");
  d.on(build, [ba, &cfg] {
    const UnitSystem& u = cfg.units;
    TruncationPolicy policy;
    if (ba->tmax) policy.max_temperature = u.k_B * *ba->tmax;
    policy.tail_tolerance = ba->tail;
    std::optional<Spectrum> s;
    if (ba->kind == "finite") {
      if (ba->levels.empty()) throw UsageError("--kind finite needs at least one --level");
      std::vector<Level> levels;
      for (const auto& text : ba->levels) {
        const auto colon = text.find(':');
        const auto v = parse_list(colon == std::string::npos ? text : text.substr(0, colon) + "," +
                                                                          text.substr(colon + 1),
                                  "--level");
        if (v.size() > 2 || v.empty()) throw UsageError("malformed --level '" + text + "'");
        levels.push_back({v[0], v.size() == 2 ? v[1] : 1.0});
      }
      s = build_finite(std::move(levels));
    } else if (ba->kind == "oscillator") {
      s = ba->n_levels ? build_oscillator(ba->hnu, *ba->n_levels, policy)
                       : build_oscillator_auto(ba->hnu, policy);
    } else {
      BoxGeometry geom = BoxGeometry::cube(ba->mass, ba->volume);
      if (!ba->sides.empty()) {
        const auto v = parse_list(ba->sides, "--sides");
        if (v.size() != 3) throw UsageError("--sides expects three lengths");
        geom.sides = {v[0], v[1], v[2]};
      }
      int q = 0;
      if (ba->max_q) {
        q = *ba->max_q;
      } else {
        for (double side : geom.sides) q = std::max(q, box_direction_levels_for(geom.mass, side, u, policy));
      }
      s = build_box(geom, q, u, policy);
    }
    if (!ba->label.empty()) s = s->with_label(ba->label);
    Result r;
    r.text = io::spectrum_to_json(*s).dump(2) + "\n";
    return r;
  });

  struct ComposeArgs {
    std::string a, b, label;
    int power = 1;
    double cutoff = kInfinity;
    std::optional<double> tmax;
  };
  auto ca = std::make_shared<ComposeArgs>();
  CLI::App* comp = sub(*spectrum, "compose", "Compose independent spectra");
  comp->add_option("--a", ca->a, "First spectrum file")->required();
  comp->add_option("--b", ca->b, "Second spectrum file");
  comp->add_option("--power", ca->power, "z-fold composition of --a (without --b)");
  comp->add_option("--cutoff", ca->cutoff, "Energy cutoff");
  comp->add_option("--tmax", ca->tmax, "Highest temperature the truncation must serve");
  comp->add_option("--label", ca->label, "Label");
  d.on(comp, [ca, &cfg] {
    std::optional<double> tmax;
    if (ca->tmax) tmax = cfg.units.k_B * *ca->tmax;
    const auto a = load_spectrum(ca->a);
    Spectrum s = ca->b.empty() ? compose_power(*a, ca->power, ca->cutoff, tmax)
                               : compose(*a, *load_spectrum(ca->b), ca->cutoff, tmax);
    if (!ca->label.empty()) s = s.with_label(ca->label);
    Result r;
    r.text = io::spectrum_to_json(s).dump(2) + "\n";
    return r;
  });

  auto path = std::make_shared<std::string>();
  CLI::App* info = sub(*spectrum, "info", "Summarize a spectrum file");
  info->add_option("--spectrum", *path, "Spectrum file")->required();
  d.on(info, [path, &cfg] {
    const auto s = load_spectrum(*path);
    Result r;
    r.table.columns = {"label", "levels", "bounded", "ground", "top", "tail_bound", "T_max", "log_multiplicity"};
    const double tmax = std::isfinite(s->min_beta()) && s->min_beta() > 0.0
                            ? cfg.units.temperature_of_beta(s->min_beta())
                            : kInfinity;
    r.table.add({s->label(), std::to_string(s->size()), format_bool(s->bounded()), fmt(s->ground_energy()),
                 fmt(s->top_energy()), fmt(s->tail_bound()), fmt(tmax),
                 fmt(s->bounded() ? s->log_total_degeneracy() : kInfinity)});
    return r;
  });
}

// --------------------------------------------------------------------- state

void add_state(CLI::App& app, Dispatcher& d) {
  CLI::App* state = sub(app, "state", "Inspect a state file");
  state->require_subcommand(1);
  auto path = std::make_shared<std::string>();
  CLI::App* info = sub(*state, "info", "E, S, variance and disequilibrium D of a state");
  info->add_option("state", *path, "State file")->required();
  d.on(info, [path] {
    const fs::path p(*path);
    const LevelDistribution st = io::state_from_json(io::read_json_file(p), p.parent_path());
    const Observables o = observables(st, ses_entropy_oracle());
    Result r;
    r.table.columns = {"E", "S", "variance", "D"};
    r.table.add({fmt(o.energy), fmt(o.entropy), fmt(o.variance), fmt(o.disequilibrium)});
    return r;
  });
}

// ------------------------------------------------------------------------ eq

void add_eq(CLI::App& app, Dispatcher& d, const RunConfig& cfg) {
  CLI::App* eq = sub(app, "eq", "Stable-equilibrium properties");
  eq->require_subcommand(1);

  struct Args {
    std::string spectrum, grid, a, b;
    bool log = false, negative = false;
    double energy = 0.0, entropy = 0.0;
  };
  auto args = std::make_shared<Args>();

  CLI::App* table = sub(*eq, "table", "Canonical properties over a grid of b");
  table->add_option("--spectrum", args->spectrum, "Spectrum file")->required();
  table->add_option("--b-grid", args->grid, "lo:hi:n")->required();
  table->add_flag("--log", args->log, "Logarithmic spacing");
  d.on(table, [args, &cfg] {
    const auto s = load_spectrum(args->spectrum);
    Result r;
    r.table.columns = {"b", "T", "lnQ", "E", "S", "variance", "C"};
    for (double b : parse_grid(args->grid, args->log)) {
      const ThermalPoint t = thermal_properties(*s, b);
      r.table.add({fmt(b), fmt(b == 0.0 ? kInfinity : cfg.units.temperature_of_beta(b)), fmt(t.log_partition),
                   fmt(t.energy), fmt(t.entropy), fmt(t.variance), fmt(t.heat_capacity)});
    }
    return r;
  });

  CLI::App* invert = sub(*eq, "invert", "Inverse temperature of the stable state with energy E");
  invert->add_option("--spectrum", args->spectrum, "Spectrum file")->required();
  invert->add_option("--energy", args->energy, "Energy")->required();
  d.on(invert, [args, &cfg] {
    const auto s = load_spectrum(args->spectrum);
    const InverseTemperature b = beta_of_energy(*s, args->energy);
    Result r;
    r.table.columns = {"b", "T", "E", "S"};
    r.table.add({fmt_beta(b), fmt(b.value == 0.0 ? kInfinity : temperature_of(b, cfg.units)), fmt(args->energy),
                 fmt(ses_entropy_of_energy(*s, args->energy))});
    return r;
  });

  CLI::App* entropy = sub(*eq, "entropy", "Stable-equilibrium energy at entropy S");
  entropy->add_option("--spectrum", args->spectrum, "Spectrum file")->required();
  entropy->add_option("--entropy", args->entropy, "Entropy in units of k_B")->required();
  entropy->add_flag("--negative", args->negative, "Negative-temperature branch");
  d.on(entropy, [args, &cfg] {
    const auto s = load_spectrum(args->spectrum);
    const Branch br = args->negative ? Branch::negative : Branch::positive;
    const InverseTemperature b = beta_of_entropy(*s, args->entropy, br);
    Result r;
    r.table.columns = {"S", "E", "b", "T"};
    r.table.add({fmt(args->entropy), fmt(ses_energy_of_entropy(*s, args->entropy, br)), fmt_beta(b),
                 fmt(b.value == 0.0 ? kInfinity : temperature_of(b, cfg.units))});
    return r;
  });

  CLI::App* split = sub(*eq, "split", "Maximum-entropy split of energy between two systems");
  split->add_option("--a", args->a, "First spectrum file")->required();
  split->add_option("--b", args->b, "Second spectrum file")->required();
  split->add_option("--energy", args->energy, "Total energy")->required();
  d.on(split, [args, &cfg] {
    const EquilibriumSplit sp = equilibrium_split(*load_spectrum(args->a), *load_spectrum(args->b), args->energy);
    Result r;
    r.table.columns = {"E_a", "E_b", "b", "T"};
    r.table.add({fmt(sp.energy_a), fmt(sp.energy_b), fmt_beta(sp.b),
                 fmt(sp.b.value == 0.0 ? kInfinity : temperature_of(sp.b, cfg.units))});
    return r;
  });
}

// --------------------------------------------------------------------- grand

void add_grand(CLI::App& app, Dispatcher& d, const RunConfig& cfg) {
  struct Args {
    std::string model;
    std::optional<double> b, t, mu, amount;
  };
  auto args = std::make_shared<Args>();
  CLI::App* grand = sub(app, "grand", "Grand-canonical properties of a model");
  grand->add_option("--model", args->model, "Grand model file")->required();
  auto* ob = grand->add_option("--b", args->b, "Inverse temperature");
  auto* ot = grand->add_option("--t", args->t, "Temperature");
  ob->excludes(ot);
  auto* om = grand->add_option("--mu", args->mu, "Chemical potential");
  auto* on = grand->add_option("--amount", args->amount, "Mean amount n (solves for mu)");
  om->excludes(on);
  d.on(grand, [args, &cfg] {
    if (!args->b && !args->t) throw UsageError("grand needs --b or --t");
    if (!args->mu && !args->amount) throw UsageError("grand needs --mu or --amount");
    const fs::path p(args->model);
    const GrandModel m = io::grand_model_from_json(io::read_json_file(p), p.parent_path());
    const double b = args->b ? *args->b : cfg.units.beta_of_temperature(*args->t);
    const double mu = args->mu ? *args->mu : fugacity_of_amount(m, b, *args->amount);
    const GrandPoint g = grand_properties(m, b, mu);
    Result r;
    r.table.columns = {"b", "mu", "lnQ", "n", "E", "S", "p", "Eu"};
    r.table.add({fmt(g.b), fmt(g.mu), fmt(g.log_partition), fmt(g.amount), fmt(g.energy), fmt(g.entropy),
                 fmt(g.pressure), fmt(g.euler)});
    return r;
  });
}

// --------------------------------------------------------------------- avail

void add_avail(CLI::App& app, Dispatcher& d, const RunConfig& cfg) {
  struct Args {
    std::string state, reservoir, kind = "fixed_Vn";
    std::optional<double> volume, amount;
  };
  auto args = std::make_shared<Args>();
  CLI::App* avail = sub(app, "avail", "Adiabatic availability, ergotropy and available energy");
  avail->add_option("--state", args->state, "State file")->required();
  avail->add_option("--reservoir", args->reservoir, "T_R[,p_R][,mu_R]");
  avail->add_option("--kind", args->kind, "fixed_Vn, variable_V, variable_n or variable_Vn");
  avail->add_option("--volume", args->volume, "Volume of the state");
  avail->add_option("--amount", args->amount, "Amount of constituents of the state");
  d.on(avail, [args, &cfg] {
    const fs::path p(args->state);
    const Json j = io::read_json_file(p);
    ExtendedState ext{io::state_from_json(j, p.parent_path()), j.value("volume", 1.0), j.value("amount", 0.0)};
    if (args->volume) ext.volume = *args->volume;
    if (args->amount) ext.amount = *args->amount;
    const ReservoirKind kind = kind_named(args->kind);
    double omega = std::nan(""), value = std::nan("");
    if (!args->reservoir.empty()) {
      const auto v = parse_list(args->reservoir, "--reservoir");
      if (v.empty() || v.size() > 3) throw UsageError("--reservoir expects T_R[,p_R][,mu_R]");
      Reservoir res{cfg.units.k_B * v[0], {}, {}, kind};
      if (v.size() == 2) {
        if (kind == ReservoirKind::variable_n) res.potential = v[1];
        else res.pressure = v[1];
      }
      if (v.size() == 3) {
        res.pressure = v[1];
        res.potential = v[2];
      }
      omega = available_energy(ext.state, Reservoir::thermal(res.temperature));
      value = availability_function(ext.properties(), res);
    }
    Result r;
    r.table.columns = {"E", "S", "psi", "ergotropy", "omega", "A_value"};
    r.table.add({fmt(state_energy(ext.state)), fmt(state_entropy(ext.state)), fmt(adiabatic_availability(ext.state)),
                 fmt(ergotropy(ext.state)), fmt(omega), fmt(value)});
    return r;
  });
}

// ------------------------------------------------------------------ interact

void add_interact(CLI::App& app, Dispatcher& d) {
  CLI::App* interact = sub(app, "interact", "Entropy-transfer bounds and cycle checks");
  interact->require_subcommand(1);

  struct Args {
    double ta = 1.0, tb = 1.0, de = 0.0;
    std::optional<double> pa, pb, mua, mub, dv, dn, ds;
    std::string records, samples, a, b;
    double ea = 0.0, eb = 0.0;
    double t = 1.0, h = 0.0, s = 0.0, p = 0.0;
    double q = 0.0, k = 1.0, grad = 0.0;
  };
  auto args = std::make_shared<Args>();
  auto endpoints = [args] {
    return std::pair{EndpointSES{args->ta, args->pa, args->mua}, EndpointSES{args->tb, args->pb, args->mub}};
  };
  auto temps = [args](CLI::App* c) {
    c->add_option("--ta", args->ta, "Temperature of A")->required();
    c->add_option("--tb", args->tb, "Temperature of B")->required();
  };

  CLI::App* bounds = sub(*interact, "bounds", "Entropy transfer interval for an infinitesimal exchange");
  temps(bounds);
  bounds->add_option("--pa", args->pa, "Pressure of A");
  bounds->add_option("--pb", args->pb, "Pressure of B");
  bounds->add_option("--mua", args->mua, "Chemical potential of A");
  bounds->add_option("--mub", args->mub, "Chemical potential of B");
  bounds->add_option("--de", args->de, "Energy transferred from A to B")->required();
  bounds->add_option("--dv", args->dv, "Volume transferred from A to B");
  bounds->add_option("--dn", args->dn, "Amount transferred from A to B");
  bounds->add_option("--ds", args->ds, "Proposed entropy transfer");
  d.on(bounds, [args, endpoints] {
    const auto [a, b] = endpoints();
    ExchangeProposal prop{args->de, 0.0, args->dv, args->dn};
    TransferBounds t = transfer_bounds(a, b, prop);
    prop.entropy = args->ds ? *args->ds : t.lower;
    t = transfer_bounds(a, b, prop);
    Result r;
    r.table.columns = {"lower", "upper", "admissible"};
    std::vector<std::string> row{fmt(t.lower), fmt(t.upper), format_bool(t.admissible)};
    if (t.work_window) {
      r.table.columns.insert(r.table.columns.end(), {"work_lo", "work_hi"});
      row.insert(row.end(), {fmt(t.work_window->lo), fmt(t.work_window->hi)});
    }
    r.table.add(std::move(row));
    return r;
  });

  CLI::App* direction = sub(*interact, "direction", "Whether energy may flow from A to B as heat");
  temps(direction);
  direction->add_option("--de", args->de, "Energy transferred from A to B")->required();
  d.on(direction, [args, endpoints] {
    const auto [a, b] = endpoints();
    Result r;
    r.table.columns = {"direction"};
    r.table.add({clausius_direction(a, b, args->de) == Direction::allowed ? "allowed" : "forbidden"});
    return r;
  });

  CLI::App* cycle = sub(*interact, "cycle", "Clausius inequality for a cycle");
  auto* orec = cycle->add_option("--records", args->records, "CSV of heat_out,temperature rows");
  auto* osam = cycle->add_option("--samples", args->samples,
                                 "CSV of t,rate_1,T_1,rate_2,T_2,... rows (trapezoidal)");
  orec->excludes(osam);
  d.on(cycle, [args] {
    ClausiusCheck c;
    if (!args->records.empty()) {
      std::vector<HeatRecord> recs;
      for (const auto& row : io::read_numeric_csv(args->records)) {
        if (row.size() != 2) fail(ErrorCode::ParseError, "records need heat_out,temperature");
        recs.push_back({row[0], row[1]});
      }
      c = clausius_cycle_check(recs);
    } else if (!args->samples.empty()) {
      const auto rows = io::read_numeric_csv(args->samples);
      if (rows.empty() || rows[0].size() < 3 || rows[0].size() % 2 == 0)
        fail(ErrorCode::ParseError, "samples need t followed by rate,temperature pairs");
      const std::size_t m = (rows[0].size() - 1) / 2;
      std::vector<double> times;
      std::vector<std::vector<double>> rates(m), temps_(m);
      for (const auto& row : rows) {
        if (row.size() != 2 * m + 1) fail(ErrorCode::ParseError, "ragged samples file");
        times.push_back(row[0]);
        for (std::size_t j = 0; j < m; ++j) {
          rates[j].push_back(row[1 + 2 * j]);
          temps_[j].push_back(row[2 + 2 * j]);
        }
      }
      c = clausius_cycle_check(times, rates, temps_);
    } else {
      throw UsageError("cycle needs --records or --samples");
    }
    Result r;
    r.table.columns = {"lhs", "verdict"};
    r.table.add({fmt(c.lhs), c.satisfied ? "satisfied" : "violated"});
    return r;
  });

  CLI::App* maxwork = sub(*interact, "maxwork", "Maximum work of a machine interposed between A and B");
  temps(maxwork);
  maxwork->add_option("--mua", args->mua, "Chemical potential of A");
  maxwork->add_option("--mub", args->mub, "Chemical potential of B");
  maxwork->add_option("--de", args->de, "Energy drawn from A")->required();
  maxwork->add_option("--dn", args->dn, "Amount drawn from A");
  d.on(maxwork, [args, endpoints] {
    const auto [a, b] = endpoints();
    Result r;
    r.table.columns = {"W_max"};
    r.table.add({fmt(max_work_interposed(a, b, args->de, args->dn))});
    return r;
  });

  CLI::App* finite = sub(*interact, "finite", "Entropy transfer bounds for a finite exchange");
  finite->add_option("--a", args->a, "Spectrum of A")->required();
  finite->add_option("--ea", args->ea, "Energy of A")->required();
  finite->add_option("--b", args->b, "Spectrum of B")->required();
  finite->add_option("--eb", args->eb, "Energy of B")->required();
  finite->add_option("--de", args->de, "Energy transferred from A to B")->required();
  d.on(finite, [args] {
    const FiniteBounds f =
        transfer_bounds_finite(*load_spectrum(args->a), args->ea, *load_spectrum(args->b), args->eb, args->de);
    Result r;
    r.table.columns = {"S_min", "S_max", "admissible"};
    r.table.add({fmt(f.s_min), fmt(f.s_max), format_bool(f.admissible)});
    return r;
  });

  CLI::App* heat = sub(*interact, "heat", "Measurable heat of an exchange with bulk flow");
  heat->add_option("--t", args->t, "Temperature")->required();
  heat->add_option("--enthalpy", args->h, "Partial enthalpy")->required();
  heat->add_option("--entropy", args->s, "Partial entropy")->required();
  heat->add_option("--de", args->de, "Energy exchanged")->required();
  heat->add_option("--dn", args->dn, "Amount exchanged")->required();
  heat->add_option("--dv", args->dv, "Volume exchanged");
  heat->add_option("--p", args->p, "Pressure");
  d.on(heat, [args] {
    const HeatSplit hs = measurable_heat_split(args->t, args->h, args->s, args->de, *args->dn, args->dv,
                                               args->dv ? std::optional<double>(args->p) : std::nullopt);
    Result r;
    r.table.columns = {"Q", "S"};
    r.table.add({fmt(hs.heat), fmt(hs.entropy)});
    return r;
  });

  CLI::App* cond = sub(*interact, "conduction", "Local entropy generation by heat conduction");
  cond->add_option("--q", args->q, "Heat flux")->required();
  cond->add_option("--k", args->k, "Conductivity")->required();
  cond->add_option("--t", args->t, "Temperature")->required();
  cond->add_option("--grad", args->grad, "Temperature gradient")->required();
  d.on(cond, [args] {
    const ConductionSigma c = conduction_sigma(args->q, args->k, args->t, args->grad);
    Result r;
    r.table.columns = {"sigma_flux", "sigma_gradient"};
    r.table.add({fmt(c.from_flux), fmt(c.from_gradient)});
    return r;
  });
}

// ----------------------------------------------------------------- partition

void add_partition(CLI::App& app, Dispatcher& d, const RunConfig& cfg) {
  struct Args {
    int n = 1, lambda = 2;
    double t = 1.0, volume = 1.0, mass = 1.0;
    std::optional<double> tmax;
    std::string model = "closed";
  };
  auto args = std::make_shared<Args>();
  CLI::App* part = sub(app, "partition", "Entropy and work of partitioning an ideal gas");
  part->add_option("--n", args->n, "Number of particles")->required()->check(CLI::PositiveNumber);
  part->add_option("--lambda", args->lambda, "Number of compartments")->required()->check(CLI::PositiveNumber);
  part->add_option("--t", args->t, "Temperature")->required();
  part->add_option("--volume", args->volume, "Volume");
  part->add_option("--mass", args->mass, "Particle mass (numeric model)");
  part->add_option("--tmax", args->tmax, "Truncation temperature (numeric model)");
  part->add_option("--model", args->model, "closed or numeric")->check(CLI::IsMember({"closed", "numeric"}));
  d.on(part, [args, &cfg] {
    const double kt = cfg.units.k_B * args->t;
    PartitionScenario sc{args->n, args->volume, kt, args->lambda, PartitionModel::ideal_gas_closed_form};
    PartitionResult res;
    double potential;
    if (args->model == "closed") {
      res = ideal_gas_partitioning(sc);
      potential = ideal_gas_subdivision_derivative(args->n, kt, args->lambda);
    } else {
      sc.model = PartitionModel::composite_numeric;
      const BoxGasFamily family(args->mass, cfg.units,
                                {cfg.units.k_B * (args->tmax ? *args->tmax : 10.0 * args->t)});
      res = composite_partitioning(family, sc);
      const double s = family.build(args->volume, args->n)->summary(1.0 / kt).entropy;
      potential = subdivision_potential(family, args->n, args->volume, s, args->lambda).central_difference;
    }
    Result r;
    r.table.columns = {"lambda", "S_irr", "W_min", "subdivision_potential"};
    r.table.add({std::to_string(args->lambda), fmt(res.entropy_irr), fmt(res.min_work), fmt(potential)});
    return r;
  });
}

// ------------------------------------------------------------------- diagram

Json annotation_json(const Annotation& a) {
  Json j{{"E", a.energy},        {"S", a.entropy},          {"E_ses_at_S", a.ses_energy_at_entropy},
         {"psi", a.psi}};
  if (a.reservoir_temperature) {
    j["T_R"] = *a.reservoir_temperature;
    j["E_R"] = a.reservoir_energy;
    j["S_R"] = a.reservoir_entropy;
    j["energy_part"] = a.energy_part;
    j["entropy_part"] = a.entropy_part;
    j["omega"] = a.omega;
  }
  return j;
}

void add_diagram(CLI::App& app, Dispatcher& d, const RunConfig& cfg) {
  struct Args {
    std::string spectrum, annotate;
    int points = 50;
    bool negative = false;
    std::optional<double> tr;
  };
  auto args = std::make_shared<Args>();
  CLI::App* diag = sub(app, "diagram", "Energy-entropy diagram data");
  diag->add_option("--spectrum", args->spectrum, "Spectrum file")->required();
  diag->add_option("--points", args->points, "Number of curve points")->check(CLI::PositiveNumber);
  diag->add_flag("--negative", args->negative, "Include the negative-temperature branch");
  diag->add_option("--annotate", args->annotate, "State file to place on the diagram");
  diag->add_option("--tr", args->tr, "Reservoir temperature for the annotation");
  d.on(diag, [args, &cfg] {
    const auto s = load_spectrum(args->spectrum);
    const ESCurve curve = ses_curve(*s, args->points, args->negative);
    Result r;
    r.table.columns = {"S", "E", "b", "T"};
    for (const auto& pt : curve.points) {
      const double t = pt.b == 0.0 ? kInfinity : std::isinf(pt.b) ? 0.0 : cfg.units.temperature_of_beta(pt.b);
      r.table.add({fmt(pt.entropy), fmt(pt.energy), fmt(pt.b), fmt(t)});
    }
    if (!args->annotate.empty()) {
      const fs::path p(args->annotate);
      const LevelDistribution st = io::state_from_json(io::read_json_file(p), p.parent_path());
      std::optional<double> tr;
      if (args->tr) tr = cfg.units.k_B * *args->tr;
      r.annotation = annotation_json(annotate(st, tr));
    }
    return r;
  });
}

// -------------------------------------------------------------------- verify

void add_verify(CLI::App& app, Dispatcher& d, const RunConfig& cfg) {
  auto suites = std::make_shared<std::vector<std::string>>();
  CLI::App* ver = sub(app, "verify", "Run the invariant suites");
  std::string names;
  for (const auto& n : verify::suite_names()) names += (names.empty() ? "" : ", ") + n;
  ver->add_option("--suite", *suites, "Suite to run (repeatable): " + names);
  d.on(ver, [suites, &cfg] {
    const verify::Report rep = verify::run(cfg.seed, cfg.tolerances, *suites);
    Result r;
    r.table.columns = {"suite", "check", "status", "observed", "bound", "samples"};
    for (const auto& c : rep.checks)
      r.table.add({c.suite, c.name, c.passed ? "pass" : "FAIL", fmt(c.observed), fmt(c.bound),
                   std::to_string(c.samples)});
    if (cfg.output == "csv") r.text = "# seed=" + std::to_string(cfg.seed) + "\n" + rep.text();
    r.exit_code = rep.failed() > 0 ? 1 : 0;
    return r;
  });
}

std::string one_line(std::string s) {
  for (auto& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stable-equilibrium state toolkit", "ses"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string config_path, out_path, format, units;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "RunConfig JSON file (default: $SES_CONFIG)");
  app.add_option("--out", out_path, "Write output to this file");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "Seed for verify sampling");
  app.add_option("--units", units, "reduced or si")->check(CLI::IsMember({"reduced", "si"}));

  RunConfig cfg;
  Dispatcher d;
  add_spectrum(app, d, cfg);
  add_state(app, d);
  add_eq(app, d, cfg);
  add_grand(app, d, cfg);
  add_avail(app, d, cfg);
  add_interact(app, d);
  add_partition(app, d, cfg);
  add_diagram(app, d, cfg);
  add_verify(app, d, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (config_path.empty())
      if (const char* env = std::getenv("SES_CONFIG"); env && *env) config_path = env;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!units.empty()) cfg.units = units_named(units);
    if (!format.empty()) cfg.output = format;
    if (seed) cfg.seed = *seed;
    validate(cfg);

    const Action* action = nullptr;
    for (const auto& [sub_app, act] : d.actions)
      if (sub_app->parsed()) action = &act;
    if (!action) throw UsageError("missing subcommand");
    const Result result = (*action)();
    const std::string text = render(result, cfg);
    if (out_path.empty()) {
      out << text;
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!(f << text)) fail(ErrorCode::InvalidArgument, "cannot write " + out_path);
    }
    if (result.exit_code) err << "verify: some checks failed\n";
    return result.exit_code;
  } catch (const UsageError& e) {
    err << "usage error: " << one_line(e.what()) << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return 1;
  }
}

}  // namespace ses::cli
