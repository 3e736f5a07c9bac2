#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(CALORICS_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

nlohmann::json json_of(const Run& r) { return nlohmann::json::parse(r.out); }

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "calorics_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("gen") {
        const Run a = run("gen basic -d 4 --text");
        CHECK(a.status == 0);
        CHECK(a.out == "t^2 + t*x^2 + 1/12*x^4\n");
        const Run b = run("gen fixture n2d3 --text");
        CHECK(b.out == "450*t*x + 150*t*y + 27*x^3 + 267*x^2*y + 144*x*y^2 - 64*y^3\n");
        const Run c = run("gen zero-mod4 -d 4 --eps 1/2 --rot 3/5,4/5");
        REQUIRE(c.status == 0);
        const auto j = json_of(c);
        CHECK(j["rotation"] == "exact");
        CHECK(j["spec"]["eps"] == "1/2");
        const Run f = run("gen zero-mod4 -d 4 --eps 0.2 --rot angle:pi/10");
        REQUIRE(f.status == 0);
        CHECK(json_of(f)["rotation"] == "angle");
        CHECK(json_of(f).contains("angle_error"));
        CHECK(run("gen zero-mod4 -d 6 --eps 1/2").status == 4);
        CHECK(run("gen nonsense -d 6").status == 4);
    }

    TEST_CASE("gen writes a file the other commands read") {
        const fs::path file = scratch("lewy6.json");
        CHECK(run("gen lewy -d 6 -o " + file.string()).status == 0);
        const Run v = run("verify " + file.string());
        CHECK(v.status == 0);
        CHECK(json_of(v)["ok"] == true);
    }

    TEST_CASE("verify") {
        const Run a = run("verify --fixture n3d4");
        CHECK(a.status == 0);
        CHECK(json_of(a)["checks"]["parabolic_degree"]["degree"] == 4);
        const Run b = run("verify 't + x^2'");
        CHECK(b.status == 2);
        CHECK(json_of(b)["checks"]["is_caloric"]["ok"] == false);
        const Run c = run("verify 't + x'");
        CHECK(c.status == 2);
        CHECK(json_of(c)["checks"]["parabolic_degree"]["ok"] == false);
        CHECK(run("verify 't + q'").status == 4);
        CHECK(run("verify").status == 4);
        CHECK(run("verify x --fixture n2d3").status == 4);
    }

    TEST_CASE("count") {
        const Run a = run("count --fixture n2d4 --assert 3");
        CHECK(a.status == 0);
        const auto j = json_of(a);
        CHECK(j["count"]["total"] == 3);
        CHECK(j["count"]["method"] == "cube-exact");
        CHECK(j["bounds"]["courant_upper"] == "15");
        CHECK(run("count --gen basic -d 7 --assert 8").status == 0);
        CHECK(run("count --gen product -n 2 -d 4 --assert 6").status == 0);
        CHECK(run("count --fixture n2d4 --assert 4").status == 3);
        CHECK(run("count --fixture n2d4 --schedule 64,32,128").status == 4);
        CHECK(run("count 't + x'").status == 2);
        const Run s = run("count --fixture deg2 --slice");
        CHECK(s.status == 0);
        CHECK(json_of(s)["slice"]["count"] == 3);
    }

    TEST_CASE("output is byte identical across runs") {
        CHECK(run("count --fixture n2d3").out == run("count --fixture n2d3").out);
        CHECK(run("export --fixture n2d4 --resolution 48").out == run("export --fixture n2d4 --resolution 48").out);
    }

    TEST_CASE("scan") {
        const Run a = run("scan odd -d 3 --target 2 --eps-grid 1");
        CHECK(a.status == 0);
        CHECK(a.out == "eps,count,stable,admissible\n1,2,true,true\n# largest_admissible=1\n");
        const Run b = run("scan odd -d 3 --target 2 --eps-grid 1000000 --json");
        CHECK(b.status == 3);
        CHECK(json_of(b)["flagged"] == true);
    }

    TEST_CASE("export") {
        const fs::path file = scratch("zm4.csv");
        const Run a = run("export --gen zero-mod4 -d 4 --rot angle:pi/10 --delta 0.2 --resolution 128 -o " + file.string());
        REQUIRE(a.status == 0);
        const auto j = json_of(a);
        CHECK(j["points"].get<int>() > 0);
        CHECK(j["clusters"] == 2);
        std::ifstream in(file);
        std::string header;
        std::getline(in, header);
        CHECK(header == "x,y,t");
        const Run c = run("export 5 --space-dim 2");
        CHECK(c.status == 0);
        CHECK(c.out == "x,y,t\n");
        CHECK(run("export --fixture n3d4").status == 4);
    }

    TEST_CASE("bounds") {
        const Run a = run("bounds -n 2 -d 8");
        CHECK(a.status == 0);
        const auto j = json_of(a);
        CHECK(j["minimum"] == 3);
        CHECK(j["product_lower"] == "16");
        CHECK(j["courant_upper"] == "45");
        CHECK(run("bounds -n 2 -d 4 --counted 99").status == 2);
        CHECK(run("bounds -n 2").status == 4);
    }
}
