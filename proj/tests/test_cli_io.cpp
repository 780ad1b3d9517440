#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "voigt/cli_io.hpp"
#include "voigt/errors.hpp"

using namespace voigt;
using namespace voigt::testing;
namespace fs = std::filesystem;

namespace {

// Fresh directory under the system temp dir, removed on scope exit.
struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("voigt_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name, std::ios::binary) << text;
    return path / name;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> lines;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> v;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) v.push_back(std::stod(cell));
  return v;
}

const char* kEigenConfig = R"([grid]
size = 32
[time]
t_end = 1
cfl = 0.5
record_every = 0.25
snapshot_every = 0.5
[model]
alpha = 0.1
[init]
kind = eigenfunction
k1 = 1
k2 = 2
[output]
directory = OUT
formats = csv, snapshots
)";

const char* kSweepConfig = R"([grid]
size = 32
[time]
t_end = 0.5
record_every = 0.1
[init]
kind = random_sobolev
sigma = 3.25
band = 10
seed = 3
[sweep]
alphas = 1e-2, 3e-3, 1e-3, 1e-4
regime = smooth_s_ge_3
[output]
directory = OUT
)";

std::string with_dir(std::string text, const fs::path& dir) {
  text.replace(text.find("OUT"), 3, dir.string());
  return text;
}

void check_config_error(const std::string& text, const std::string& needle) {
  try {
    parse_config(text);
    FAIL("expected a ConfigError mentioning " << needle);
  } catch (const ConfigError& e) {
    INFO(std::string(e.what()));
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

}  // namespace

TEST_CASE("parse_config") {
  SUBCASE("values and defaults") {
    const RunConfig c = parse_config(kEigenConfig);
    CHECK(c.size == 32);
    CHECK_FALSE(c.dealias_cutoff);
    CHECK(c.grid().dealias_cutoff() == 10);
    CHECK(c.t_end == 1.0);
    CHECK_FALSE(c.dt);
    CHECK(c.cfl == 0.5);
    CHECK(*c.snapshot_every == 0.5);
    CHECK(*c.alpha == 0.1);
    CHECK(c.recipe.kind == DataKind::eigenfunction);
    CHECK(c.recipe.k2 == 2);
    CHECK(c.output.csv);
    CHECK(c.output.snapshots);
    CHECK_FALSE(c.sweep);
  }

  SUBCASE("sweep section and plan") {
    const RunConfig c = parse_config(kSweepConfig);
    REQUIRE(c.sweep);
    CHECK(c.sweep->alphas == std::vector<double>{1e-2, 3e-3, 1e-3, 1e-4});
    const SweepPlan plan = c.sweep_plan();
    CHECK(plan.records == 5);
    CHECK(plan.refine_factor == 1);
    CHECK(plan.courant == 0.5);
    CHECK(plan.recipe.seed == 3);
    CHECK_NOTHROW(plan.validate());
  }

  SUBCASE("patches and normalization") {
    const std::string text =
        "[grid]\nsize = 64\n[time]\nt_end = 1\nrecord_every = 0.1\n[model]\nalpha = 0\n"
        "[init]\nkind = yudovich_patch\nradius = 0.8\npatches = 2\nnormalize = peak\namplitude = 2\n";
    const RunConfig c = parse_config(text);
    CHECK(c.recipe.patches == 2);
    CHECK(c.recipe.radius == 0.8);
    CHECK(c.recipe.normalize == Normalization::peak);
    CHECK(c.recipe.amplitude == 2.0);
    CHECK(parse_config(canonical_config(c)).recipe == c.recipe);
    CHECK(parse_config(kEigenConfig).recipe.normalize == Normalization::none);
    check_config_error(text + "sigma = 2\n", "init.sigma");
    std::string bad = text;
    bad.replace(bad.find("peak"), 4, "max");
    check_config_error(bad, "init.normalize");
    check_config_error(
        "[grid]\nsize = 32\n[time]\nt_end = 1\nrecord_every = 0.1\n[init]\nkind = random_sobolev\n"
        "sigma = 2\nband = 4\npatches = 2\n",
        "init.patches");
  }

  SUBCASE("canonical form is a fixed point") {
    for (const char* text : {kEigenConfig, kSweepConfig}) {
      const RunConfig c = parse_config(text);
      const std::string canonical = canonical_config(c);
      CHECK(canonical_config(parse_config(canonical)) == canonical);
      CHECK(fnv1a64(canonical) == fnv1a64(canonical_config(parse_config(canonical))));
    }
    const std::string header = provenance_header(parse_config(kEigenConfig));
    CHECK(header.rfind(std::string("# ") + kToolVersion + "\n", 0) == 0);
    CHECK(header.find("# config_hash fnv1a64:") != std::string::npos);
    CHECK(header.find("# alpha = 0.1") != std::string::npos);
  }

  SUBCASE("fnv1a64 reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
  }

  SUBCASE("strictness") {
    const std::string base = kEigenConfig;
    check_config_error(base + "bogus = 1\n", "output.bogus");
    check_config_error("[grid]\nsize = 32\nextra = 3\n", "grid.extra");
    check_config_error("top = 1\n" + base, "top");
    check_config_error(base + "[plot]\nx = 1\n", "[plot]");
    check_config_error(std::string(kEigenConfig).substr(std::string(kEigenConfig).find("[time]")), "grid.size");
    check_config_error("[grid]\nsize = 32\nsize = 64\n", "duplicate");
    check_config_error("[grid]\nsize = 3x2\n", "grid.size");
    check_config_error(
        "[grid]\nsize = 32\n[time]\nt_end = 1\nrecord_every = 0.1\n[init]\nkind = eigenfunction\n"
        "k1 = 1\nk2 = 0\nsigma = 3\n",
        "init.sigma");
    check_config_error(
        "[grid]\nsize = 32\n[time]\nt_end = 1\ndt = 0.1\ncfl = 0.5\nrecord_every = 0.1\n"
        "[init]\nkind = taylor_family\n",
        "exclusive");
    check_config_error(
        "[grid]\nsize = 32\n[time]\nt_end = 1\nrecord_every = 0.1\n[init]\nkind = taylor_family\n"
        "[output]\nformats = snapshots\n",
        "snapshot_every");
    check_config_error(
        "[grid]\nsize = 32\n[time]\nt_end = 1\nrecord_every = 0.1\n[init]\nkind = taylor_family\n"
        "[sweep]\nalphas =\nregime = yudovich\n",
        "sweep.alphas");
    check_config_error(
        "[grid]\nsize = 31\n[time]\nt_end = 1\nrecord_every = 0.1\n[init]\nkind = taylor_family\n",
        "[grid]");
  }

  SUBCASE("sweep plan constraints") {
    std::string text = kSweepConfig;
    text.replace(text.find("record_every = 0.1"), 18, "record_every = 0.3");
    CHECK_THROWS_AS(parse_config(text).sweep_plan(), ConfigError);
    std::string fixed = kSweepConfig;
    fixed.replace(fixed.find("[time]\n"), 7, "[time]\ndt = 0.01\n");
    CHECK_THROWS_AS(parse_config(fixed).sweep_plan(), ConfigError);
    CHECK_THROWS_AS(parse_config(kEigenConfig).sweep_plan(), ConfigError);
  }
}

TEST_CASE("snapshot format") {
  const GridSpec grid(16);
  SnapshotData d;
  d.size = 16;
  d.time = 0.75;
  d.alpha = 1e-3;
  d.values = random_samples(grid, 5);

  const std::string bytes = encode_snapshot(d);
  REQUIRE(bytes.size() == 28 + 8 * 256);
  CHECK(bytes.substr(0, 4) == "VFLD");
  CHECK(bytes.substr(4, 4) == std::string("\x01\x00\x00\x00", 4));
  CHECK(bytes.substr(8, 4) == std::string("\x10\x00\x00\x00", 4));
  // 0.75 = 0x3FE8000000000000, little-endian.
  CHECK(bytes.substr(12, 8) == std::string("\x00\x00\x00\x00\x00\x00\xe8\x3f", 8));

  const SnapshotData back = decode_snapshot(bytes);
  CHECK(back == d);
  CHECK(encode_snapshot(back) == bytes);

  CHECK_THROWS_AS(decode_snapshot(bytes.substr(0, bytes.size() - 1)), FormatError);
  CHECK_THROWS_AS(decode_snapshot(bytes.substr(0, 20)), FormatError);
  CHECK_THROWS_AS(decode_snapshot(bytes + "x"), FormatError);
  std::string magic = bytes;
  magic[0] = 'X';
  CHECK_THROWS_AS(decode_snapshot(magic), FormatError);
  std::string version = bytes;
  version[4] = 2;
  CHECK_THROWS_AS(decode_snapshot(version), FormatError);
  std::string odd = bytes;
  odd[8] = 15;
  CHECK_THROWS_AS(decode_snapshot(odd), FormatError);

  TempDir dir;
  write_snapshot(dir.path / "a.vfld", d);
  CHECK(read_snapshot(dir.path / "a.vfld") == d);
  CHECK(slurp(dir.path / "a.vfld") == bytes);
  CHECK_THROWS_AS(read_snapshot(dir.path / "missing.vfld"), FormatError);

  const Snapshot snap{0.5, make_eigenfunction(grid, 1, 0)};
  const SnapshotData sd = snapshot_data(snap, 0.2);
  CHECK(sd.values[1] == doctest::Approx(std::cos(grid.spacing())).epsilon(1e-15));
  CHECK(max_abs(inverse_transform(snapshot_field(sd) - snap.omega)) < 1e-15);
}

TEST_CASE("cmd_simulate") {
  TempDir dir;
  const fs::path out_dir = dir.path / "run";
  const fs::path config = dir.write("eig.ini", with_dir(kEigenConfig, out_dir));
  std::ostringstream out, err;

  REQUIRE(cmd_simulate(config, out, err) == 0);
  const std::string csv = slurp(out_dir / "diagnostics.csv");
  const auto lines = data_lines(csv);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "t,energy,enstrophy,voigt_energy,voigt_enstrophy");
  const auto first = split_numbers(lines[1]);
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto row = split_numbers(lines[i]);
    for (std::size_t j = 1; j < row.size(); ++j) CHECK(std::abs(row[j] - first[j]) <= 1e-10 * first[j]);
  }
  CHECK(csv.find("# config_hash fnv1a64:") == csv.find("\n") + 1);
  CHECK(fs::exists(out_dir / "snapshot_0000.vfld"));
  CHECK(fs::exists(out_dir / "snapshot_0002.vfld"));
  const SnapshotData last = read_snapshot(out_dir / "snapshot_0002.vfld");
  CHECK(last.time == 1.0);
  CHECK(last.alpha == 0.1);

  REQUIRE(cmd_simulate(config, out, err) == 0);
  CHECK(slurp(out_dir / "diagnostics.csv") == csv);

  std::ostringstream err2;
  const std::string no_grid = std::string(kEigenConfig).substr(std::string(kEigenConfig).find("[time]"));
  CHECK(cmd_simulate(dir.write("nogrid.ini", with_dir(no_grid, out_dir)), out, err2) == 2);
  CHECK(err2.str().find("grid.size") != std::string::npos);

  std::ostringstream err3;
  const fs::path unstable = dir.write("blow.ini", R"([grid]
size = 32
[time]
t_end = 100
dt = 1
record_every = 100
[model]
alpha = 0
[init]
kind = random_sobolev
sigma = 1
band = 10
amplitude = 50
seed = 1
[output]
directory = )" + (dir.path / "blow").string() + "\n");
  CHECK(cmd_simulate(unstable, out, err3) == 3);
  CHECK(err3.str().find("blew up") != std::string::npos);

  CHECK(cmd_simulate(dir.path / "absent.ini", out, err) == 2);
}

TEST_CASE("cmd_sweep") {
  TempDir dir;
  const fs::path a = dir.path / "a";
  const fs::path b = dir.path / "b";
  std::ostringstream out, err;
  const int code_a = cmd_sweep(dir.write("a.ini", with_dir(kSweepConfig, a)), 1, out, err);
  const int code_b = cmd_sweep(dir.write("b.ini", with_dir(kSweepConfig, b)), 3, out, err);
  CHECK((code_a == 0 || code_a == 1));
  CHECK(code_a == code_b);

  const std::string errors_a = slurp(a / "errors.csv");
  const auto lines = data_lines(errors_a);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "alpha,sup_u_l2,sup_omega_l2,sup_u_h1");
  CHECK(split_numbers(lines[1])[0] == 1e-2);
  // Identical apart from the output directory echoed in the header.
  CHECK(data_lines(slurp(b / "errors.csv")) == lines);
  CHECK(data_lines(slurp(b / "summary.txt")) == data_lines(slurp(a / "summary.txt")));
  CHECK(slurp(a / "summary.txt").find("verdict velocity_rate") != std::string::npos);

  std::string galerkin = with_dir(kSweepConfig, dir.path / "g");
  galerkin.replace(galerkin.find("smooth_s_ge_3"), 13, "smooth_2_lt_s_lt_3\ns = 2.5");
  CHECK(cmd_sweep(dir.write("g.ini", galerkin), 1, out, err) <= 1);
  CHECK(data_lines(slurp(dir.path / "g" / "galerkin.csv")).size() == 5);

  std::string empty = with_dir(kSweepConfig, dir.path / "e");
  empty.replace(empty.find("1e-2, 3e-3, 1e-3, 1e-4"), 22, "");
  std::ostringstream err2;
  CHECK(cmd_sweep(dir.write("e.ini", empty), 1, out, err2) == 2);
  CHECK(err2.str().find("sweep.alphas") != std::string::npos);

  std::string band = with_dir(kSweepConfig, dir.path / "x");
  band.replace(band.find("band = 10"), 9, "band = 11");
  CHECK(cmd_sweep(dir.write("x.ini", band), 1, out, err) == 2);

  std::ostringstream self;
  CHECK(cmd_sweep_self_test(self) == 0);
  CHECK(self.str().find("1 alpha^0.5 over 4 alphas: slope 0.500000000000") != std::string::npos);
  CHECK(fit_self_test(self) <= 1e-10);
}

TEST_CASE("cmd_diagnose") {
  TempDir dir;
  const GridSpec grid(32);
  const SpectralField c = make_eigenfunction(grid, 1, 0);
  write_snapshot(dir.path / "cos.vfld", snapshot_data({0.0, c}, 0.0));

  DiagnoseOptions opts;
  opts.sobolev = {0.0, 1.0};
  opts.lp = {2.0, 4.0, kInfinity};
  opts.gagliardo = {2.0, 8.0};
  opts.cz = {4.0, 16.0};
  std::ostringstream out, err;
  REQUIRE(cmd_diagnose(dir.path / "cos.vfld", opts, out, err) == 0);
  const auto lines = data_lines(out.str());
  CHECK(lines[0] == "quantity,parameter,value");

  auto value_of = [&](const std::string& prefix) {
    for (const auto& l : lines) {
      if (l.rfind(prefix, 0) == 0) return l.substr(prefix.size());
    }
    FAIL("missing row " << prefix);
    return std::string();
  };
  CHECK(std::abs(std::stod(value_of("omega_l2,,")) - kPi * std::sqrt(2.0)) <= 1e-10);

  // Printed values match direct library calls bit for bit.
  const SpectralField omega = snapshot_field(read_snapshot(dir.path / "cos.vfld"));
  CHECK(value_of("omega_lp,4,") == format_double(lp_norm(omega, 4.0)));
  CHECK(value_of("omega_lp,inf,") == format_double(lp_norm(omega, kInfinity)));
  CHECK(value_of("gagliardo_ratio,8,") == format_double(gagliardo_ratio(omega, 8.0)));
  CHECK(value_of("cz_ratio,16,") == format_double(cz_ratio(omega, 16.0)));
  CHECK(value_of("u_sobolev,1,") == format_double(sobolev_norm(biot_savart(omega), 1.0)));
  CHECK(std::stod(value_of("omega_lp,4,")) == lp_norm(omega, 4.0));

  const std::string bytes = slurp(dir.path / "cos.vfld");
  dir.write("cut.vfld", bytes.substr(0, bytes.size() / 2));
  std::ostringstream out2, err2;
  CHECK(cmd_diagnose(dir.path / "cut.vfld", opts, out2, err2) == 2);
  CHECK(out2.str().empty());
  CHECK_FALSE(err2.str().empty());

  DiagnoseOptions bad;
  bad.cz = {2.0};
  std::ostringstream out3, err3;
  CHECK(cmd_diagnose(dir.path / "cos.vfld", bad, out3, err3) == 2);
  CHECK(out3.str().empty());
}
