#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hmcf/cli.hpp"
#include "hmcf/config.hpp"
#include "hmcf/io.hpp"
#include "hmcf/synthetic.hpp"

using namespace hmcf;
namespace fs = std::filesystem;

namespace {

std::string tmp_path(const std::string& name) {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "hmcf_io_test";
        fs::create_directories(d);
        return d;
    }();
    return (dir / name).string();
}

void write_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out << bytes;
}

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("pgm round trip preserves 8-bit quantized intensities") {
    const Grid2D g(16, 9);
    ScalarField f(g);
    for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] = double(i % 256) / 255.0;
    const std::string path = tmp_path("rt.pgm");
    save_pgm(Image{f}, path);
    const Image back = load_image(path);
    REQUIRE(back.intensity.grid == g);
    for (std::size_t i = 0; i < f.v.size(); ++i) CHECK(back.intensity.v[i] == f.v[i]);
}

TEST_CASE("ascii pgm with comments") {
    const std::string path = tmp_path("ascii.pgm");
    write_bytes(path, "P2\n# a comment\n4 2 # inline\n255\n0 128 255 64\n1 2 3 4\n");
    const Image img = load_image(path);
    REQUIRE(img.intensity.width() == 4);
    REQUIRE(img.intensity.height() == 2);
    CHECK(img.intensity.at(0, 0) == 0.0);
    CHECK(img.intensity.at(1, 0) == Catch::Approx(128.0 / 255.0));
    CHECK(img.intensity.at(2, 0) == 1.0);
    CHECK(img.intensity.at(3, 1) == Catch::Approx(4.0 / 255.0));
}

TEST_CASE("sixteen bit binary pgm is big endian") {
    const std::string path = tmp_path("wide.pgm");
    std::string bytes = "P5\n2 1\n65535\n";
    const unsigned char raster[4] = {0x01, 0x00, 0xFF, 0xFF};
    bytes.append(reinterpret_cast<const char*>(raster), 4);
    write_bytes(path, bytes);
    const Image img = load_image(path);
    CHECK(img.intensity.at(0, 0) == Catch::Approx(256.0 / 65535.0));
    CHECK(img.intensity.at(1, 0) == 1.0);
}

TEST_CASE("pgm reader rejects malformed files") {
    using Catch::Matchers::ContainsSubstring;
    const std::string p = tmp_path("bad.pgm");

    CHECK_THROWS_WITH(load_image(tmp_path("missing.pgm")), ContainsSubstring("cannot open"));

    write_bytes(p, "P3\n2 2\n255\n");
    CHECK_THROWS_WITH(load_image(p), ContainsSubstring("unsupported magic"));

    write_bytes(p, "P2\n4\n");
    CHECK_THROWS_WITH(load_image(p), ContainsSubstring("truncated header"));

    write_bytes(p, "P2\n2 1\n0\n");
    CHECK_THROWS_WITH(load_image(p), ContainsSubstring("maxval out of range"));

    write_bytes(p, "P2\n2 1\n70000\n");
    CHECK_THROWS_WITH(load_image(p), ContainsSubstring("maxval out of range"));

    write_bytes(p, "P2\n2 1\n255\n12 300\n");
    CHECK_THROWS_WITH(load_image(p), ContainsSubstring("sample above maxval"));

    write_bytes(p, "P5\n4 4\n255\nabc");
    CHECK_THROWS_WITH(load_image(p), ContainsSubstring("truncated raster"));

    write_bytes(p, "P2\n2 1\n255\n1 x\n");
    CHECK_THROWS_WITH(load_image(p), ContainsSubstring("bad sample token"));
}

TEST_CASE("mask loading thresholds at one half") {
    const std::string path = tmp_path("mask.pgm");
    write_bytes(path, "P2\n3 1\n255\n0 127 255\n");
    const BinaryMask m = load_mask(path);
    CHECK(m.bits[0] == 0);
    CHECK(m.bits[1] == 0);  // 127/255 < 0.5
    CHECK(m.bits[2] == 1);
}

TEST_CASE("overlay paints contour-adjacent pixels only") {
    const Grid2D g(12, 12);
    ScalarField img(g, 0.5);
    const LevelSetState phi = make_circle_sdf(g, 6.0, 6.0, 3.0);
    const std::string path = tmp_path("overlay.ppm");
    save_overlay(Image{img}, phi.phi, path);

    const std::string bytes = read_bytes(path);
    REQUIRE(bytes.substr(0, 13) == "P6\n12 12\n255\n");
    REQUIRE(bytes.size() == 13 + 12 * 12 * 3);
    int red = 0, gray = 0;
    for (int i = 0; i < 144; ++i) {
        const unsigned char r = bytes[13 + 3 * i], gg = bytes[13 + 3 * i + 1],
                            b = bytes[13 + 3 * i + 2];
        if (r == 255 && gg == 0 && b == 0) ++red;
        else if (r == gg && gg == b) ++gray;
    }
    CHECK(red + gray == 144);
    CHECK(red > 8);        // a radius-3 circle rim
    CHECK(red < 60);

    // second field painted in the alternate color where the primary is absent
    const LevelSetState phi2 = make_circle_sdf(g, 6.0, 6.0, 5.0);
    save_overlay(Image{img}, phi.phi, path, {}, &phi2.phi);
    const std::string two = read_bytes(path);
    int blue = 0;
    for (int i = 0; i < 144; ++i) {
        const unsigned char r = two[13 + 3 * i], gg = two[13 + 3 * i + 1], b = two[13 + 3 * i + 2];
        if (r == 0 && gg == 90 && b == 255) ++blue;
    }
    CHECK(blue > 8);

    // identical fields: the primary color wins everywhere
    save_overlay(Image{img}, phi.phi, path, {}, &phi.phi);
    const std::string same = read_bytes(path);
    for (int i = 0; i < 144; ++i) CHECK_FALSE(same[13 + 3 * i + 2] == char(255));
}

TEST_CASE("field files round trip exactly") {
    const Grid2D g(7, 5);
    ScalarField f(g);
    f.v = {0.1,     -0.2,        1e-300,      1e300,  -123.456789012345678, 0.0,    3.25,
           1.0 / 3, -7.0 / 11,   2.5e-17,     -1e17,  0.30000000000000004,  -0.1,   5.5,
           42.0,    -42.000001,  8.8817e-16,  1.75,   -2.25,                0.125,  9.0,
           0.33,    -0.66,       1e-9,        -1e9,   6.02e23,              -273.15, 1.5,
           2.5,     -3.5,        4.5,         -5.5,   6.5,                  -7.5,   8.5};
    const std::string path = tmp_path("field.txt");
    save_field(f, path);
    const ScalarField back = load_field(path);
    REQUIRE(back.grid == g);
    for (std::size_t i = 0; i < f.v.size(); ++i) CHECK(back.v[i] == f.v[i]);

    ScalarField tiny(Grid2D(1, 1), -0.75);
    save_field(tiny, tmp_path("tiny.txt"));
    CHECK(load_field(tmp_path("tiny.txt")).v[0] == -0.75);
}

TEST_CASE("field reader rejects malformed input") {
    using Catch::Matchers::ContainsSubstring;
    const std::string p = tmp_path("badfield.txt");
    CHECK_THROWS_WITH(load_field(tmp_path("missingfield.txt")), ContainsSubstring("cannot open"));
    write_bytes(p, "0 4\n");
    CHECK_THROWS_WITH(load_field(p), ContainsSubstring("bad dimension header"));
    write_bytes(p, "2 2\n1 2 3\n");
    CHECK_THROWS_WITH(load_field(p), ContainsSubstring("malformed or short"));
    write_bytes(p, "2 1\n1 nope\n");
    CHECK_THROWS_WITH(load_field(p), ContainsSubstring("malformed or short"));
    write_bytes(p, "2 1\n1 2 3\n");
    CHECK_THROWS_WITH(load_field(p), ContainsSubstring("trailing data"));
}

TEST_CASE("minimal config applies defaults") {
    const RunConfig c = parse_config_text("model = hmcf-cv\n");
    CHECK(c == RunConfig{});

    const RunConfig g = parse_config_text("# comment only\n\nmodel = hmcf-gac  # tail\n");
    CHECK(g.model == ModelKind::hmcf_gac);
}

TEST_CASE("config serialization round trips every field") {
    RunConfig c;
    c.model = ModelKind::hdrf_cv;
    c.wave.b = 123.456789012345;
    c.wave.tau = 0.017;
    c.wave.substeps = 9;
    c.wave.eta = 0.625;
    c.modelp.lambda = -2.5;
    c.modelp.mu = 17.25;
    c.modelp.gamma = 0.375;
    c.modelp.u = -1.125;
    c.modelp.sigma = 4.5;
    c.modelp.n_threshold = 0.33;
    c.modelp.window = 11;
    c.reg.epsilon = 1.0 / 3.0;
    c.reg.alpha = 0.07;
    c.edge.sigma_g = 2.25;
    c.edge.amplitude = 55.5;
    c.edge.exponent = 3.0;
    c.reinit_every = 4;
    c.max_iters = 321;
    c.conv_window = 7;
    c.conv_threshold = 2.5e-4;
    c.init.circle = CircleSpec{31.5, 32.5, 10.125};
    c.init.circle2 = CircleSpec{40.0, 41.0, 9.5};
    c.init.mask_path = "some/mask.pgm";
    c.seed = 18446744073709551615ULL;
    c.allow_vanish = true;
    c.vmax = 12.5;
    c.bench.strength = {0.05, 0.1, 0.15, 0.2};
    c.bench.hmcf_b = {10.0, 20.0, 30.0, 40.0};
    c.bench.pmcf_mu = {1.0, 2.0, 3.0, 4.0};
    c.bench.grid = 96;
    c.bench.max_iters = 77;

    const RunConfig back = parse_config_text(serialize_config(c));
    CHECK(back == c);
}

TEST_CASE("config parser reports the offending line") {
    using Catch::Matchers::ContainsSubstring;

    CHECK_THROWS_WITH(parse_config_text("wave.b = 1\n"), ContainsSubstring("'model' is missing"));
    CHECK_THROWS_WITH(parse_config_text("model = hmcf-cv\nwave.b = 1\nwave.b = 2\n"),
                      ContainsSubstring("line 3") && ContainsSubstring("duplicate"));
    CHECK_THROWS_WITH(parse_config_text("model = hmcf-cv\nwave.c = 1\n"),
                      ContainsSubstring("line 2") && ContainsSubstring("unknown key"));
    CHECK_THROWS_WITH(parse_config_text("model = hmcf-cv\n\nwave.eta = 1.2\n"),
                      ContainsSubstring("line 3") && ContainsSubstring("[0.5, 1]"));
    CHECK_THROWS_WITH(parse_config_text("model = hmcf-cv\nwave.eta = 0.4\n"),
                      ContainsSubstring("[0.5, 1]"));
    CHECK_THROWS_WITH(parse_config_text("model = hmcf-cv\nwave.tau = 0\n"),
                      ContainsSubstring("must be positive"));
    CHECK_THROWS_WITH(parse_config_text("model = hmcf-cv\ninit.circle = 3,4\n"),
                      ContainsSubstring("circle needs cx,cy,r"));
    CHECK_THROWS_WITH(parse_config_text("model = hmcf-cv\ninit.circle = 3,4,0\n"),
                      ContainsSubstring("radius must be positive"));
    CHECK_THROWS_WITH(parse_config_text("model = hmcf-cv\nbench.strength = 1,2,3,\n"),
                      ContainsSubstring("trailing comma"));
    CHECK_THROWS_WITH(parse_config_text("model = hmcf-cv\nbench.strength = 1,2,3\n"),
                      ContainsSubstring("expected 4"));
    CHECK_THROWS_WITH(parse_config_text("model = hmcf-cv\nallow_vanish = yep\n"),
                      ContainsSubstring("true/false"));
    CHECK_THROWS_WITH(parse_config_text("model = hmcf-cv\nseed = -4\n"),
                      ContainsSubstring("non-negative"));
    CHECK_THROWS_WITH(parse_config_text("model = hmcf-cv\nbench.grid = 32\n"),
                      ContainsSubstring("at least 64"));
    CHECK_THROWS_WITH(parse_config_text("model = hmcf-cv\nmodelp.window = 4\n"),
                      ContainsSubstring("odd"));
    CHECK_THROWS_WITH(parse_config_text("model = hmcf-cv\nwave.b 3\n"),
                      ContainsSubstring("expected 'key = value'"));
    CHECK_THROWS_WITH(parse_config_text("model = qmcf\n"), ContainsSubstring("unknown model"));
    CHECK_THROWS_WITH(parse_config_text("model = hmcf-cv\nwave.b = abc\n"),
                      ContainsSubstring("expected a number"));
    CHECK_THROWS_AS(parse_config("no/such/config.cfg"), config_error);
}

TEST_CASE("cli usage errors exit with 1 and help with 0") {
    CHECK(cli_main({}) == 1);
    CHECK(cli_main({"--help"}) == 0);
    CHECK(cli_main({"frobnicate"}) == 1);
    CHECK(cli_main({"segment"}) == 1);                       // missing args
    CHECK(cli_main({"demo", "cube"}) == 1);                  // bad shape
    CHECK(cli_main({"demo", "star", "--iters", "0"}) == 1);  // positive check
}

TEST_CASE("cli reports data errors with 2") {
    CHECK(cli_main({"segment", tmp_path("absent.pgm"), "--config", tmp_path("absent.cfg")}) == 2);

    const std::string img = tmp_path("imgok.pgm");
    write_bytes(img, "P2\n64 64\n255\n" + [] {
        std::string s;
        for (int i = 0; i < 64 * 64; ++i) s += "128 ";
        return s;
    }());
    const std::string cfg = tmp_path("badmodel.cfg");
    write_bytes(cfg, "wave.b = 2\n");  // missing model
    CHECK(cli_main({"segment", img, "--config", cfg}) == 2);

    write_bytes(cfg, "model = hmcf-cv\n");  // no initial contour
    CHECK(cli_main({"segment", img, "--config", cfg}) == 2);

    const std::string sweep_cfg = tmp_path("sweep.cfg");
    write_bytes(sweep_cfg, "model = hmcf-cv\ninit.circle = 32,32,10\nmax_iters = 5\n");
    CHECK(cli_main({"sweep-b", img, "--config", sweep_cfg, "--b-list", "5,x", "--truth", img,
                    "--out", tmp_path("s.csv")}) == 2);
    CHECK(cli_main({"sweep-b", img, "--config", sweep_cfg, "--b-list", "50,20", "--truth", img,
                    "--out", tmp_path("s.csv")}) == 2);  // unsorted
}

TEST_CASE("cli reinit writes a signed distance field") {
    const Grid2D g(48, 48);
    const LevelSetState exact = make_circle_sdf(g, 24.0, 24.0, 12.0);
    ScalarField scaled = exact.phi;
    for (double& v : scaled.v) v *= 4.0;
    const std::string in = tmp_path("reinit_in.txt"), out = tmp_path("reinit_out.txt");
    save_field(scaled, in);

    REQUIRE(cli_main({"reinit", in, "--out", out}) == 0);
    const ScalarField r = load_field(out);
    REQUIRE(r.grid == g);
    for (int y = 0; y < 48; ++y)
        for (int x = 0; x < 48; ++x) {
            const double d = std::hypot(x - 24.0, y - 24.0);
            if (d < 3.0) continue;
            CHECK(r.at(x, y) == Catch::Approx(exact.phi.at(x, y)).margin(0.03));
        }

    CHECK(cli_main({"reinit", tmp_path("absent.txt"), "--out", out}) == 2);
}

TEST_CASE("cli segment writes overlay, field and history") {
    const auto [img, truth] = make_synthetic(SyntheticKind::disk, Grid2D(64, 64));
    const std::string img_path = tmp_path("disk.pgm");
    save_pgm(img, img_path);

    const std::string cfg = tmp_path("seg.cfg");
    write_bytes(cfg,
                "model = hmcf-cv\n"
                "wave.b = 50\n"
                "wave.tau = 0.1\n"
                "modelp.lambda = 30\n"
                "init.circle = 32,32,20\n"
                "max_iters = 80\n");
    const std::string p1 = tmp_path("runA"), p2 = tmp_path("runB");
    REQUIRE(cli_main({"segment", img_path, "--config", cfg, "--out-prefix", p1}) == 0);

    const ScalarField phi = load_field(p1 + "_phi.txt");
    REQUIRE(phi.grid == Grid2D(64, 64));
    CHECK(dice(threshold_mask(phi), truth) > 0.98);

    const std::string hist = read_bytes(p1 + "_history.csv");
    CHECK(hist.substr(0, hist.find('\n')) ==
          "iter,changed_fraction,components,holes,c1,c2,c3,c4,max_v,contour_delta");
    CHECK(read_bytes(p1 + "_overlay.ppm").substr(0, 2) == "P6");

    REQUIRE(cli_main({"segment", img_path, "--config", cfg, "--out-prefix", p2}) == 0);
    CHECK(read_bytes(p1 + "_phi.txt") == read_bytes(p2 + "_phi.txt"));
    CHECK(read_bytes(p1 + "_history.csv") == read_bytes(p2 + "_history.csv"));
}

TEST_CASE("cli vanish policy controls the exit code") {
    const std::string img_path = tmp_path("flat.pgm");
    {
        ScalarField flat(Grid2D(64, 64), 0.5);
        save_pgm(Image{flat}, img_path);
    }
    const std::string cfg = tmp_path("vanish.cfg");
    const std::string base =
        "model = hmcf-gac\n"
        "modelp.u = -2\n"
        "wave.b = 1\n"
        "wave.tau = 0.5\n"
        "init.circle = 32,32,6\n"
        "max_iters = 40\n";
    write_bytes(cfg, base);
    CHECK(cli_main({"segment", img_path, "--config", cfg, "--out-prefix", tmp_path("van")}) == 3);

    write_bytes(cfg, base + "allow_vanish = true\n");
    CHECK(cli_main({"segment", img_path, "--config", cfg, "--out-prefix", tmp_path("van")}) == 0);
}

TEST_CASE("cli multiphase segment writes both fields") {
    const auto [img, truth] = make_synthetic(SyntheticKind::quadrants, Grid2D(64, 64));
    const std::string img_path = tmp_path("quad.pgm");
    save_pgm(img, img_path);
    const std::string cfg = tmp_path("multi.cfg");
    write_bytes(cfg,
                "model = hmcf-multiphase-cv\n"
                "wave.b = 100\n"
                "wave.tau = 0.1\n"
                "modelp.lambda = 200\n"
                "init.circle = 24,32,16\n"
                "init.circle2 = 32,40,16\n"
                "max_iters = 40\n");
    const std::string p = tmp_path("multi");
    REQUIRE(cli_main({"segment", img_path, "--config", cfg, "--out-prefix", p}) == 0);
    CHECK(load_field(p + "_phi.txt").grid == Grid2D(64, 64));
    CHECK(load_field(p + "_phi2.txt").grid == Grid2D(64, 64));
    CHECK(read_bytes(p + "_history2.csv").substr(0, 4) == "iter");
}

TEST_CASE("cli demo writes snapshots") {
    const std::string p = tmp_path("demo");
    REQUIRE(cli_main({"demo", "star", "--b", "2", "--tau", "0.5", "--iters", "8", "--every", "4",
                      "--out-prefix", p}) == 0);
    CHECK(fs::exists(p + "_000.ppm"));
    CHECK(fs::exists(p + "_001.ppm"));
    CHECK(fs::exists(p + "_002.ppm"));
    CHECK_FALSE(fs::exists(p + "_003.ppm"));
}

TEST_CASE("cli bench-noise writes a reproducible csv") {
    const std::string cfg = tmp_path("bench.cfg");
    write_bytes(cfg,
                "model = hmcf-cv\n"
                "wave.b = 50\n"
                "wave.tau = 0.1\n"
                "modelp.lambda = 30\n"
                "bench.grid = 64\n"
                "bench.max_iters = 25\n"
                "bench.strength = 0.1,0.1,0.2,0.2\n"
                "bench.hmcf_b = 50,50,50,50\n"
                "bench.pmcf_mu = 2,2,2,2\n");
    const std::string o1 = tmp_path("b1.csv"), o2 = tmp_path("b2.csv");
    REQUIRE(cli_main({"bench-noise", "--config", cfg, "--out", o1, "--zero-runtime"}) == 0);
    REQUIRE(cli_main({"bench-noise", "--config", cfg, "--out", o2, "--zero-runtime"}) == 0);

    const std::string csv = read_bytes(o1);
    CHECK(csv.substr(0, csv.find('\n')) == bench_csv_header());
    int lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 9);
    CHECK(csv == read_bytes(o2));
}

TEST_CASE("cli sweep-b writes one row per value") {
    const auto [img, truth] = make_synthetic(SyntheticKind::star, Grid2D(64, 64));
    const std::string img_path = tmp_path("star.pgm"), truth_path = tmp_path("star_truth.pgm");
    save_pgm(img, img_path);
    {
        ScalarField t(truth.grid);
        for (std::size_t i = 0; i < t.v.size(); ++i) t.v[i] = truth.bits[i] ? 1.0 : 0.0;
        save_pgm(Image{t}, truth_path);
    }
    const std::string cfg = tmp_path("sw.cfg");
    write_bytes(cfg,
                "model = hmcf-cv\n"
                "wave.b = 1\n"
                "wave.tau = 0.1\n"
                "modelp.lambda = 30\n"
                "init.circle = 32,32,20\n"
                "max_iters = 30\n");
    const std::string out = tmp_path("sweep.csv");
    REQUIRE(cli_main({"sweep-b", img_path, "--config", cfg, "--b-list", "20,60", "--truth",
                      truth_path, "--out", out, "--zero-runtime"}) == 0);
    const std::string csv = read_bytes(out);
    int lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 3);
    CHECK(csv.find("sweep-b,hmcf-cv") != std::string::npos);
}
