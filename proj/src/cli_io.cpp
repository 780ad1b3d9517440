#include "voigt/cli_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "voigt/errors.hpp"

namespace voigt {

namespace {

namespace pt = boost::property_tree;

double parse_double(const std::string& text, const std::string& key) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "': expected a finite number, got '" + text + "'");
  }
  return v;
}

template <class Int>
Int parse_integer(const std::string& text, const std::string& key) {
  Int v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    items.push_back(first == std::string::npos ? "" : item.substr(first, last - first + 1));
  }
  return items;
}

// One INI section. Every key read is marked; finish() rejects the rest.
class Section {
 public:
  Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

  bool present() const { return tree_ != nullptr; }
  std::string key(const std::string& k) const { return name_ + "." + k; }

  std::optional<std::string> raw(const std::string& k) {
    used_.insert(k);
    if (!tree_) return std::nullopt;
    const auto child = tree_->get_child_optional(pt::ptree::path_type(k, '\0'));
    if (!child) return std::nullopt;
    return child->data();
  }

  std::string required(const std::string& k) {
    auto v = raw(k);
    if (!v) throw ConfigError("missing required key '" + key(k) + "'");
    return *v;
  }

  std::optional<double> number(const std::string& k) {
    const auto v = raw(k);
    if (!v) return std::nullopt;
    return parse_double(*v, key(k));
  }
  double number(const std::string& k, double fallback) { return number(k).value_or(fallback); }
  double required_number(const std::string& k) { return parse_double(required(k), key(k)); }

  std::optional<int> integer(const std::string& k) {
    const auto v = raw(k);
    if (!v) return std::nullopt;
    return parse_integer<int>(*v, key(k));
  }

  void finish(const std::string& context = "") const {
    if (!tree_) return;
    for (const auto& [k, child] : *tree_) {
      if (!used_.count(k)) {
        throw ConfigError("unknown key '" + key(k) + "'" + (context.empty() ? "" : " (" + context + ")"));
      }
    }
  }

 private:
  std::string name_;
  const pt::ptree* tree_;
  std::set<std::string> used_;
};

DataKind kind_from_string(const std::string& name) {
  if (name == "eigenfunction") return DataKind::eigenfunction;
  if (name == "random_sobolev") return DataKind::random_sobolev;
  if (name == "yudovich_patch") return DataKind::yudovich_patch;
  if (name == "taylor_family") return DataKind::taylor_family;
  throw ConfigError("key 'init.kind': unknown kind '" + name + "'");
}

const char* to_string(DataKind kind) {
  switch (kind) {
    case DataKind::eigenfunction: return "eigenfunction";
    case DataKind::random_sobolev: return "random_sobolev";
    case DataKind::yudovich_patch: return "yudovich_patch";
    case DataKind::taylor_family: return "taylor_family";
  }
  return "unknown";
}

DataRecipe parse_init(Section& init) {
  DataRecipe r;
  r.kind = kind_from_string(init.required("kind"));
  if (const auto seed = init.raw("seed")) r.seed = parse_integer<std::uint64_t>(*seed, init.key("seed"));
  r.amplitude = init.number("amplitude", 1.0);
  const std::string normalize = init.raw("normalize").value_or("none");
  if (normalize == "peak") {
    r.normalize = Normalization::peak;
  } else if (normalize != "none") {
    throw ConfigError("key 'init.normalize': expected none or peak, got '" + normalize + "'");
  }
  switch (r.kind) {
    case DataKind::eigenfunction:
      r.k1 = parse_integer<int>(init.required("k1"), init.key("k1"));
      r.k2 = parse_integer<int>(init.required("k2"), init.key("k2"));
      break;
    case DataKind::random_sobolev:
      r.sigma = init.required_number("sigma");
      r.band = parse_integer<int>(init.required("band"), init.key("band"));
      break;
    case DataKind::yudovich_patch:
      r.radius = init.required_number("radius");
      r.smoothing = init.number("smoothing", 0.0);
      r.patches = init.integer("patches").value_or(1);
      break;
    case DataKind::taylor_family:
      r.modes = init.integer("modes").value_or(2);
      break;
  }
  init.finish(std::string("not used by kind ") + to_string(r.kind));
  return r;
}

SweepSection parse_sweep(Section& sec) {
  SweepSection s;
  const std::string alphas = sec.required("alphas");
  for (const std::string& item : split_list(alphas)) {
    if (item.empty()) continue;
    s.alphas.push_back(parse_double(item, sec.key("alphas")));
  }
  if (s.alphas.empty()) throw ConfigError("key 'sweep.alphas' is empty");

  try {
    s.regime = regime_from_string(sec.required("regime"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("key 'sweep.regime': ") + e.what());
  }

  const std::string reference = sec.raw("reference").value_or("same_grid");
  if (reference == "same_grid") {
    s.reference = ReferenceMode::same_grid;
  } else if (reference == "refined") {
    s.reference = ReferenceMode::refined;
    s.refine_factor = sec.integer("refine_factor").value_or(2);
  } else {
    throw ConfigError("key 'sweep.reference': expected same_grid or refined, got '" + reference + "'");
  }

  const auto s_value = sec.number("s");
  if (s.regime == Regime::smooth_intermediate && !s_value) {
    throw ConfigError("missing required key 'sweep.s' (regime smooth_2_lt_s_lt_3)");
  }
  if (s_value) s.s = *s_value;

  const std::string family = sec.raw("family").value_or("exact");
  if (family == "exact") {
    s.family = ExactFamily{};
  } else if (family == "perturbed") {
    PerturbedFamily p;
    p.gamma = sec.number("gamma", 1.0);
    if (const auto seed = sec.raw("family_seed")) {
      p.seed = parse_integer<std::uint64_t>(*seed, sec.key("family_seed"));
    }
    s.family = p;
  } else {
    throw ConfigError("key 'sweep.family': expected exact or perturbed, got '" + family + "'");
  }
  s.cutoff_constant = sec.number("cutoff_constant", 1.0);
  s.slope_tolerance = sec.number("slope_tolerance", 0.15);
  sec.finish();
  return s;
}

OutputSection parse_output(Section& sec, bool have_snapshot_times) {
  OutputSection o;
  if (const auto dir = sec.raw("directory")) {
    if (dir->empty()) throw ConfigError("key 'output.directory' is empty");
    o.directory = *dir;
  }
  if (const auto formats = sec.raw("formats")) {
    o.csv = false;
    for (const std::string& f : split_list(*formats)) {
      if (f == "csv") {
        o.csv = true;
      } else if (f == "snapshots") {
        o.snapshots = true;
      } else {
        throw ConfigError("key 'output.formats': unknown format '" + f + "'");
      }
    }
  }
  if (o.snapshots && !have_snapshot_times) {
    throw ConfigError("output format 'snapshots' needs key 'time.snapshot_every'");
  }
  sec.finish();
  return o;
}

std::string list_text(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + format_double(values[i]);
  return s;
}

void put_u32(std::string& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_f64(std::string& b, double d) {
  const auto u = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<char>((u >> (8 * i)) & 0xffu));
}

std::uint64_t get_le(const std::string& b, std::size_t pos, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[pos + i])) << (8 * i);
  }
  return v;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

// ------------------------------------------------------------------ config

GridSpec RunConfig::grid() const {
  return dealias_cutoff ? GridSpec(size, *dealias_cutoff) : GridSpec(size);
}

SolverConfig RunConfig::solver_config() const {
  if (!alpha) throw ConfigError("missing required key 'model.alpha'");
  SolverConfig cfg;
  cfg.grid = grid();
  cfg.alpha = *alpha;
  cfg.t_end = t_end;
  if (dt) {
    cfg.step = FixedStep{*dt};
  } else {
    cfg.step = CflStep{cfl};
  }
  cfg.record_every = record_every;
  cfg.snapshot_every = snapshot_every;
  return cfg;
}

SweepPlan RunConfig::sweep_plan() const {
  if (!sweep) throw ConfigError("missing section [sweep]");
  if (dt) throw ConfigError("key 'time.dt' is not used by sweeps; they share the CFL step (time.cfl)");
  if (snapshot_every) throw ConfigError("key 'time.snapshot_every' is not used by sweeps");
  if (alpha) throw ConfigError("key 'model.alpha' is not used by sweeps; see sweep.alphas");
  const double records = std::round(t_end / record_every);
  if (!(records >= 1.0) || std::abs(records * record_every - t_end) > 1e-9 * t_end) {
    throw ConfigError("key 'time.record_every' must divide time.t_end into whole intervals");
  }
  SweepPlan plan;
  plan.recipe = recipe;
  plan.family = sweep->family;
  plan.alphas = sweep->alphas;
  plan.grid = grid();
  plan.t_end = t_end;
  plan.courant = cfl;
  plan.records = static_cast<int>(records);
  plan.regime = sweep->regime;
  plan.s = sweep->s;
  plan.refine_factor = sweep->reference == ReferenceMode::refined ? sweep->refine_factor : 1;
  plan.cutoff_constant = sweep->cutoff_constant;
  plan.slope_tolerance = sweep->slope_tolerance;
  return plan;
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  static const std::set<std::string> known{"grid", "time", "model", "init", "sweep", "output"};
  for (const auto& [name, child] : tree) {
    if (child.empty()) throw ConfigError("key '" + name + "' outside any section");
    if (!known.count(name)) throw ConfigError("unknown section [" + name + "]");
  }
  auto section = [&](const char* name) {
    const auto child = tree.get_child_optional(name);
    return Section(name, child ? &*child : nullptr);
  };

  RunConfig c;
  Section grid = section("grid");
  c.size = parse_integer<int>(grid.required("size"), "grid.size");
  c.dealias_cutoff = grid.integer("dealias_cutoff");
  grid.finish();
  try {
    (void)c.grid();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("section [grid]: ") + e.what());
  }

  Section time = section("time");
  c.t_end = time.required_number("t_end");
  c.dt = time.number("dt");
  const auto cfl = time.number("cfl");
  if (c.dt && cfl) throw ConfigError("keys 'time.dt' and 'time.cfl' are exclusive");
  if (cfl) c.cfl = *cfl;
  c.record_every = time.required_number("record_every");
  c.snapshot_every = time.number("snapshot_every");
  time.finish();

  Section model = section("model");
  if (model.present()) c.alpha = model.required_number("alpha");
  model.finish();

  Section init = section("init");
  c.recipe = parse_init(init);

  Section sweep = section("sweep");
  if (sweep.present()) c.sweep = parse_sweep(sweep);

  Section output = section("output");
  c.output = parse_output(output, c.snapshot_every.has_value());
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << f.rdbuf();
  return parse_config(text.str());
}

std::string canonical_config(const RunConfig& c) {
  std::string s;
  auto kv = [&](const char* k, const std::string& v) { s += fmt::format("{} = {}\n", k, v); };
  auto num = [&](const char* k, double v) { kv(k, format_double(v)); };

  s += "[grid]\n";
  kv("size", std::to_string(c.size));
  kv("dealias_cutoff", std::to_string(c.grid().dealias_cutoff()));

  s += "[time]\n";
  num("t_end", c.t_end);
  if (c.dt) {
    num("dt", *c.dt);
  } else {
    num("cfl", c.cfl);
  }
  num("record_every", c.record_every);
  if (c.snapshot_every) num("snapshot_every", *c.snapshot_every);

  if (c.alpha) {
    s += "[model]\n";
    num("alpha", *c.alpha);
  }

  const DataRecipe& r = c.recipe;
  s += "[init]\n";
  kv("kind", to_string(r.kind));
  switch (r.kind) {
    case DataKind::eigenfunction:
      kv("k1", std::to_string(r.k1));
      kv("k2", std::to_string(r.k2));
      break;
    case DataKind::random_sobolev:
      num("sigma", r.sigma);
      kv("band", std::to_string(r.band));
      break;
    case DataKind::yudovich_patch:
      num("radius", r.radius);
      num("smoothing", r.smoothing);
      kv("patches", std::to_string(r.patches));
      break;
    case DataKind::taylor_family:
      kv("modes", std::to_string(r.modes));
      break;
  }
  num("amplitude", r.amplitude);
  kv("normalize", r.normalize == Normalization::peak ? "peak" : "none");
  kv("seed", std::to_string(r.seed));

  if (c.sweep) {
    const SweepSection& w = *c.sweep;
    s += "[sweep]\n";
    kv("alphas", list_text(w.alphas));
    kv("regime", to_string(w.regime));
    if (w.reference == ReferenceMode::refined) {
      kv("reference", "refined");
      kv("refine_factor", std::to_string(w.refine_factor));
    } else {
      kv("reference", "same_grid");
    }
    num("s", w.s);
    if (const auto* p = std::get_if<PerturbedFamily>(&w.family)) {
      kv("family", "perturbed");
      num("gamma", p->gamma);
      kv("family_seed", std::to_string(p->seed));
    } else {
      kv("family", "exact");
    }
    num("cutoff_constant", w.cutoff_constant);
    num("slope_tolerance", w.slope_tolerance);
  }

  s += "[output]\n";
  kv("directory", c.output.directory.generic_string());
  std::vector<std::string> formats;
  if (c.output.csv) formats.emplace_back("csv");
  if (c.output.snapshots) formats.emplace_back("snapshots");
  kv("formats", fmt::format("{}", fmt::join(formats, ",")));
  return s;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string provenance_header(const RunConfig& config) {
  const std::string canonical = canonical_config(config);
  std::string s = fmt::format("# {}\n# config_hash fnv1a64:{:016x}\n", kToolVersion, fnv1a64(canonical));
  std::istringstream in(canonical);
  for (std::string line; std::getline(in, line);) s += "# " + line + "\n";
  return s;
}

// --------------------------------------------------------------- snapshots

SnapshotData snapshot_data(const Snapshot& snap, double alpha) {
  SnapshotData d;
  d.size = static_cast<std::uint32_t>(snap.omega.grid().size());
  d.time = snap.time;
  d.alpha = alpha;
  d.values = inverse_transform(snap.omega);
  return d;
}

SpectralField snapshot_field(const SnapshotData& data) {
  return forward_transform(data.values, GridSpec(static_cast<int>(data.size)));
}

std::string encode_snapshot(const SnapshotData& data) {
  if (data.values.size() != static_cast<std::size_t>(data.size) * data.size) {
    throw std::invalid_argument("encode_snapshot: value count does not match the grid size");
  }
  std::string b = "VFLD";
  b.reserve(28 + 8 * data.values.size());
  put_u32(b, kSnapshotVersion);
  put_u32(b, data.size);
  put_f64(b, data.time);
  put_f64(b, data.alpha);
  for (double v : data.values) put_f64(b, v);
  return b;
}

SnapshotData decode_snapshot(const std::string& bytes) {
  constexpr std::size_t header = 28;
  if (bytes.size() < header) throw FormatError("snapshot truncated: header incomplete");
  if (bytes.compare(0, 4, "VFLD") != 0) throw FormatError("not a snapshot file (bad magic)");
  const auto version = static_cast<std::uint32_t>(get_le(bytes, 4, 4));
  if (version != kSnapshotVersion) {
    throw FormatError(fmt::format("unsupported snapshot version {} (expected {})", version, kSnapshotVersion));
  }
  SnapshotData d;
  d.size = static_cast<std::uint32_t>(get_le(bytes, 8, 4));
  if (d.size < 8 || d.size % 2 != 0 || d.size > (1u << 16)) {
    throw FormatError(fmt::format("invalid snapshot grid size {}", d.size));
  }
  const std::size_t count = static_cast<std::size_t>(d.size) * d.size;
  if (bytes.size() != header + 8 * count) {
    throw FormatError(fmt::format("snapshot length {} bytes, expected {}", bytes.size(), header + 8 * count));
  }
  d.time = std::bit_cast<double>(get_le(bytes, 12, 8));
  d.alpha = std::bit_cast<double>(get_le(bytes, 20, 8));
  d.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) d.values[i] = std::bit_cast<double>(get_le(bytes, header + 8 * i, 8));
  return d;
}

void write_snapshot(const std::filesystem::path& path, const SnapshotData& data) {
  write_file(path, encode_snapshot(data));
}

SnapshotData read_snapshot(const std::filesystem::path& path) { return decode_snapshot(read_file(path)); }

// ---------------------------------------------------------------- reports

std::string format_double(double v) { return fmt::format("{}", v); }

std::string diagnostics_csv(const TrajectoryRecord& record, const std::string& header) {
  std::string s = header + "t,energy,enstrophy,voigt_energy,voigt_enstrophy\n";
  for (const DiagnosticSample& d : record.samples) {
    s += fmt::format("{},{},{},{},{}\n", d.time, d.energy, d.enstrophy, d.voigt_energy, d.voigt_enstrophy);
  }
  return s;
}

std::string errors_csv(const ConvergenceReport& report, const std::string& header) {
  std::string s = header + "alpha,sup_u_l2,sup_omega_l2,sup_u_h1\n";
  for (const AlphaRow& r : report.rows) {
    s += fmt::format("{},{},{},{}\n", r.alpha, r.errors.sup_u_l2, r.errors.sup_omega_l2, r.errors.sup_u_h1);
  }
  return s;
}

std::string galerkin_csv(const ConvergenceReport& report, const std::string& header) {
  std::string s = header +
                  "alpha,cutoff,truncation_error,model_error,total_error,initial_truncation,"
                  "truncation_bounds_hold\n";
  for (const GalerkinRow& r : report.galerkin) {
    s += fmt::format("{},{},{},{},{},{},{}\n", r.alpha, r.cutoff, r.truncation_error, r.model_error,
                     r.total_error, r.initial_truncation, r.truncation_bounds_hold ? 1 : 0);
  }
  return s;
}

std::string summary_text(const ConvergenceReport& report, const std::string& header) {
  std::string s = header;
  s += fmt::format("regime: {}\n", to_string(report.plan.regime));
  s += fmt::format("theory: {}\n", report.theory.description);
  if (report.failed) {
    s += fmt::format("status: FAILED ({})\n", report.failure);
    return s;
  }
  auto fit_line = [&](const char* name, const std::optional<RateFit>& fit) {
    if (!fit) return;
    s += fmt::format("fit {}: slope {:.6f} stderr {:.6f} intercept {:.6f}\n", name, fit->slope,
                     fit->stderr_slope, fit->intercept);
  };
  fit_line("sup_u_l2", report.velocity_fit);
  fit_line("sup_omega_l2", report.vorticity_fit);
  fit_line("sup_u_h1", report.h1_fit);
  fit_line("total_vorticity", report.total_vorticity_fit);
  if (report.pre_asymptotic) {
    s += fmt::format("asymptotics: {}\n", *report.pre_asymptotic ? "pre-asymptotic" : "asymptotic");
  }
  for (const CriterionResult& v : report.verdicts) {
    s += fmt::format("verdict {} {}: {}\n", v.name, to_string(v.verdict), v.detail);
  }
  s += fmt::format("overall: {}\n", report.passed() ? "PASS" : "FAIL");
  return s;
}

// ---------------------------------------------------------------- commands

double fit_self_test(std::ostream& out) {
  const std::vector<std::vector<double>> grids{{1e-2, 1e-3, 1e-4, 1e-5}, {1e-2, 3e-3, 1e-3, 3e-4, 1e-4}};
  double worst = 0.0;
  for (const auto& alphas : grids) {
    for (double p : {0.25, 0.5, 1.0, 1.5}) {
      for (double c : {1.0, 2.0, 7.0}) {
        std::vector<std::pair<double, double>> pts;
        for (double a : alphas) pts.emplace_back(a, c * std::pow(a, p));
        const RateFit fit = fit_rate(pts);
        const double err = std::abs(fit.slope - p);
        worst = std::max(worst, err);
        out << fmt::format("power law {} alpha^{} over {} alphas: slope {:.12f} (error {:.3g})\n", c, p,
                           alphas.size(), fit.slope, err);
      }
    }
  }
  return worst;
}

int cmd_sweep_self_test(std::ostream& out) {
  const double worst = fit_self_test(out);
  const bool ok = worst <= 1e-10;
  out << fmt::format("self-test fit_rate: max slope error {:.3g} (limit 1e-10) {}\n", worst, ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}

int cmd_simulate(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  SolverConfig solver;
  SpectralField omega0(GridSpec(8));
  try {
    cfg = load_config(config_path);
    if (cfg.sweep) throw ConfigError("section [sweep] is not used by simulate; run `voigt sweep`");
    solver = cfg.solver_config();
    solver.validate();
    omega0 = generate(cfg.recipe, solver.grid);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::config);
  }

  TrajectoryRecord record;
  try {
    record = integrate(omega0, solver);
  } catch (const BlowUpError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::blow_up);
  }

  try {
    const std::string header = provenance_header(cfg);
    std::filesystem::create_directories(cfg.output.directory);
    if (cfg.output.csv) {
      const auto path = cfg.output.directory / "diagnostics.csv";
      write_file(path, diagnostics_csv(record, header));
      out << "wrote " << path.string() << "\n";
    }
    if (cfg.output.snapshots) {
      for (std::size_t i = 0; i < record.snapshots.size(); ++i) {
        const auto path = cfg.output.directory / fmt::format("snapshot_{:04d}.vfld", i);
        write_snapshot(path, snapshot_data(record.snapshots[i], solver.alpha));
      }
      out << "wrote " << record.snapshots.size() << " snapshots to " << cfg.output.directory.string() << "\n";
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::failed);
  }
  return static_cast<int>(ExitCode::ok);
}

int cmd_sweep(const std::filesystem::path& config_path, int jobs, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  SweepPlan plan;
  try {
    cfg = load_config(config_path);
    plan = cfg.sweep_plan();
    plan.validate();
    (void)generate(plan.recipe, plan.grid);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::config);
  }

  const bool galerkin = plan.regime == Regime::smooth_intermediate;
  const ConvergenceReport report = galerkin ? galerkin_reference_sweep(plan, plan.s, jobs) : run_sweep(plan, jobs);

  try {
    const std::string header = provenance_header(cfg);
    const std::string summary = summary_text(report, header);
    std::filesystem::create_directories(cfg.output.directory);
    write_file(cfg.output.directory / "summary.txt", summary);
    if (cfg.output.csv && !report.failed) {
      write_file(cfg.output.directory / "errors.csv", errors_csv(report, header));
      if (galerkin) write_file(cfg.output.directory / "galerkin.csv", galerkin_csv(report, header));
    }
    out << summary;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::failed);
  }

  if (report.failed) {
    err << "error: " << report.failure << "\n";
    return static_cast<int>(report.blow_up ? ExitCode::blow_up : ExitCode::failed);
  }
  return static_cast<int>(report.passed() ? ExitCode::ok : ExitCode::failed);
}

int cmd_diagnose(const std::filesystem::path& snapshot_path, const DiagnoseOptions& options,
                 std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    const SnapshotData data = read_snapshot(snapshot_path);
    const SpectralField omega = snapshot_field(data);
    const VelocityPair u = biot_savart(omega);

    text = "quantity,parameter,value\n";
    auto row = [&](const char* name, std::optional<double> param, double value) {
      text += fmt::format("{},{},{}\n", name, param ? format_double(*param) : "", value);
    };
    row("time", std::nullopt, data.time);
    row("alpha", std::nullopt, data.alpha);
    row("omega_l2", std::nullopt, l2_norm(omega));
    row("omega_linf", std::nullopt, lp_norm(omega, kInfinity));
    row("energy", std::nullopt, energy(u));
    row("enstrophy", std::nullopt, enstrophy(omega));
    row("voigt_energy", std::nullopt, voigt_energy(u, data.alpha));
    row("voigt_enstrophy", std::nullopt, voigt_enstrophy(omega, data.alpha));
    for (double s : options.sobolev) row("u_sobolev", s, sobolev_norm(u, s));
    for (double p : options.lp) row("omega_lp", p, lp_norm(omega, p));
    for (double p : options.gagliardo) row("gagliardo_ratio", p, gagliardo_ratio(omega, p));
    for (double p : options.cz) row("cz_ratio", p, cz_ratio(omega, p));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::config);
  }
  out << text;
  return static_cast<int>(ExitCode::ok);
}

}  // namespace voigt
