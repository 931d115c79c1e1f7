#include "fastslow/cli.hpp"
#include "fastslow/config.hpp"
#include "fastslow/report.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace fastslow;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t count_occurrences(const std::string& hay, const std::string& needle) {
    std::size_t n = 0, pos = 0;
    while ((pos = hay.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("fastslow_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

// small but physically meaningful config, fast enough for CLI round trips
std::string quick_cfg_text(bool on_critical = true) {
    std::ostringstream cfg;
    cfg << "system.alpha = -1.0\nsystem.beta = 1.0\nsystem.gamma = 1.0\n"
           "system.delta = -2.0\nsystem.mu = 0.0\nsystem.nu = 1.0\n"
           "ladder.eps = 1e-1 3e-2 1e-2 3e-3 1e-3\n"
           "lattice.dim = 1\nlattice.cutoff = 4.0\nlattice.dk = 0.05\n"
           "data.v0.widths = 3.14159265358979323846\ndata.v0.amps = 1.0\n"
           "data.u0.widths = 2.0\ndata.u0.amps = 0.5\n"
        << "data.on_critical = " << (on_critical ? "true" : "false") << "\n"
        << "time.T = 2.0\ntime.samples = 32\ntime.tmin_over_T = 0.5\n"
           "bounds.ladder.eps = 1e-2 3e-3 1e-3 3e-4\n"
           "bounds.time.samples = 32\nbounds.time.tmin_over_T = 0.0009765625\n"
           "bounds.quasi_static_from = 0.1\nseed = 1\n";
    return cfg.str();
}

fs::path write_cfg(const TempDir& dir, const std::string& text,
                   const std::string& name = "test.cfg") {
    const fs::path p = dir.path / name;
    std::ofstream out(p);
    out << text;
    return p;
}

} // namespace

TEST_CASE("csv formatting: header-only, one row, determinism") {
    CsvTable empty;
    empty.header = {"eps", "t_sup", "error_h2"};
    CHECK(format_csv(empty) == "eps,t_sup,error_h2\n");

    CsvTable one = empty;
    one.rows.push_back({0.1, 1.0, 0.0901010101});
    const std::string body = format_csv(one);
    CHECK(count_occurrences(body, "\n") == 2);
    CHECK(body.find("1.00000000000e-01") != std::string::npos);
    CHECK(format_csv(one) == body);
}

TEST_CASE("scientific formatting carries 12 significant digits") {
    CHECK(format_sci(0.1) == "1.00000000000e-01");
    CHECK(format_sci(-12345.678901234) == "-1.23456789012e+04");
}

TEST_CASE("rate svg holds one marker per point and a single fitted line") {
    RateFit fit;
    fit.slope = 0.997;
    fit.intercept = 0.7;
    fit.r_squared = 0.9999;
    for (double e : {1e-1, 3e-2, 1e-2, 3e-3, 1e-3})
        fit.points.emplace_back(e, 2.0 * e);
    std::string svg;
    REQUIRE(format_rate_svg(fit, "test", svg));
    CHECK(count_occurrences(svg, "<circle") == 5);
    CHECK(count_occurrences(svg, "<line") == 1);
    CHECK(svg.find("slope≈1.0") != std::string::npos);

    RateFit tiny;
    tiny.points.emplace_back(0.1, 0.2);
    CHECK_FALSE(format_rate_svg(tiny, "test", svg));
}

TEST_CASE("manifold svg draws exactly two lines, coincident when identical") {
    const std::string svg = format_manifold_svg(2.0, 2.0, 1.0, 1e-3);
    CHECK(count_occurrences(svg, "<line") == 2);
    CHECK(svg.find("eps=0.001") != std::string::npos);

    // identical sigmas: the two line elements carry identical endpoints
    const auto first = svg.find("<line");
    const auto second = svg.find("<line", first + 1);
    const auto ep = [&](std::size_t from) {
        const auto x1 = svg.find("x1=", from);
        const auto end = svg.find("/>", from);
        return svg.substr(x1, end - x1);
    };
    std::string a = ep(first), b = ep(second);
    b.erase(b.find(" stroke="));
    a.erase(a.find(" stroke="));
    CHECK(a == b);
}

TEST_CASE("config parsing round trip and schema failures") {
    const ExperimentConfig cfg = parse_config_text(quick_cfg_text());
    CHECK(cfg.base.alpha == -1.0);
    CHECK(cfg.eps_ladder.size() == 5);
    CHECK(cfg.bounds_ladder.size() == 4);
    CHECK(cfg.on_critical);
    CHECK(cfg.time.samples == 32);
    cfg.validate();

    CHECK_THROWS_AS((void)parse_config_text("system.alpha -1"), error);
    try {
        (void)parse_config_text("system.alpha = -1.0\n");
        FAIL("expected a schema error");
    } catch (const error& e) {
        CHECK(e.code() == errc::config_parse);
        CHECK(std::string(e.what()).find("expected keys") != std::string::npos);
    }
}

TEST_CASE("cli: converge emits artifacts and exits 0") {
    TempDir dir("converge");
    const fs::path cfg = write_cfg(dir, quick_cfg_text());
    const fs::path out = dir.path / "out";
    const int rc = run_cli({"converge", "--config", cfg.string(), "--out", out.string(),
                            "--quiet"});
    CHECK(rc == 0);
    CHECK(fs::exists(out / "converge.csv"));
    CHECK(fs::exists(out / "converge_fit.json"));
    CHECK(fs::exists(out / "converge.svg"));
    CHECK(fs::exists(out / "run.json"));

    const std::string csv = slurp(out / "converge.csv");
    CHECK(csv.rfind("eps,t_sup,error_h2\n", 0) == 0);
    CHECK(count_occurrences(csv, "\n") == 6);
}

TEST_CASE("cli: identical configs reproduce byte-identical artifacts") {
    TempDir dir("determinism");
    const fs::path cfg = write_cfg(dir, quick_cfg_text());
    const fs::path out1 = dir.path / "run1";
    const fs::path out2 = dir.path / "run2";
    REQUIRE(run_cli({"converge", "--config", cfg.string(), "--out", out1.string(),
                     "--quiet"}) == 0);
    REQUIRE(run_cli({"converge", "--config", cfg.string(), "--out", out2.string(),
                     "--quiet"}) == 0);
    CHECK(slurp(out1 / "converge.csv") == slurp(out2 / "converge.csv"));
    CHECK(slurp(out1 / "converge_fit.json") == slurp(out2 / "converge_fit.json"));
    CHECK(slurp(out1 / "converge.svg") == slurp(out2 / "converge.svg"));
}

TEST_CASE("cli: all runs every stage and the manifest lists the artifacts") {
    TempDir dir("all");
    const fs::path cfg = write_cfg(dir, quick_cfg_text());
    const fs::path out = dir.path / "out";
    const int rc = run_cli({"all", "--config", cfg.string(), "--out", out.string(),
                            "--quiet", "--seed", "7"});
    CHECK(rc == 0);
    for (const char* name : {"solve.csv", "converge.csv", "converge_fit.json",
                             "converge.svg", "bounds.csv", "bounds_report.json",
                             "manifold.csv", "manifold_fit.json", "manifold.svg"})
        CHECK(fs::exists(out / name));

    const auto manifest = nlohmann::json::parse(slurp(out / "run.json"));
    CHECK(manifest["files"].size() >= 6);
    CHECK(manifest["seed"] == 7);
    CHECK(manifest.contains("config_hash"));
    std::set<std::string> names;
    for (const auto& f : manifest["files"]) {
        CHECK(f.contains("checksum"));
        CHECK(names.insert(f["name"].get<std::string>()).second); // unique entries
        CHECK(fs::exists(out / f["name"].get<std::string>()));
    }
}

TEST_CASE("cli: validation failures name the condition and exit 1") {
    TempDir dir("badalpha");
    std::string text = quick_cfg_text();
    text.replace(text.find("system.alpha = -1.0"), 19, "system.alpha = +1.0");
    const fs::path cfg = write_cfg(dir, text);
    const int rc = run_cli({"converge", "--config", cfg.string(),
                            "--out", (dir.path / "out").string(), "--quiet"});
    CHECK(rc == 1);
}

TEST_CASE("cli: a missed slope criterion exits 2") {
    // a wide sample grid drags the fitted slope of the pinned ladder below
    // the acceptance band (the sup lands on the fast transient at fine eps)
    TempDir dir("exit2");
    std::string text = quick_cfg_text();
    text.replace(text.find("time.tmin_over_T = 0.5"), 22,
                 "time.tmin_over_T = 0.001");
    const fs::path cfg = write_cfg(dir, text);
    const int rc = run_cli({"converge", "--config", cfg.string(),
                            "--out", (dir.path / "out").string(), "--quiet"});
    CHECK(rc == 2);
    CHECK(fs::exists(dir.path / "out" / "converge.csv")); // artifacts still land
}

TEST_CASE("cli: unreadable config exits 64, unwritable out dir exits 66") {
    TempDir dir("io");
    CHECK(run_cli({"converge", "--config", (dir.path / "missing.cfg").string(),
                   "--out", (dir.path / "out").string(), "--quiet"}) == 64);

    const fs::path cfg = write_cfg(dir, quick_cfg_text());
    CHECK(run_cli({"converge", "--config", cfg.string(),
                   "--out", "/proc/fastslow_not_writable", "--quiet"}) == 66);
}

TEST_CASE("fnv1a64 checksum spot values") {
    CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
    CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
}
