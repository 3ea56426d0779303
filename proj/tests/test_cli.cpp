#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int lab(const std::string& args) {
    std::string cmd = std::string(LAB_BINARY) + " " + args + " >/dev/null 2>&1";
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("lab_cli_" + name);
    fs::remove_all(p);
    return p;
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream f(p);
    return nlohmann::json::parse(f);
}

}  // namespace

TEST_CASE("usage errors exit 64") {
    CHECK(lab("") == 64);
    CHECK(lab("frobnicate") == 64);
    CHECK(lab("solve --k notanumber") == 64);
    CHECK(lab("--help") == 0);
}

TEST_CASE("validation failures exit 3") {
    fs::path out = scratch("bad");
    CHECK(lab("solve --s 0 --out " + out.string()) == 3);
    CHECK(lab("solve --s -0.1 --out " + out.string()) == 3);
    CHECK(lab("solve --k 1 --out " + out.string()) == 3);
    CHECK(lab("verify --out " + out.string()) == 3);
    CHECK(lab("solve --seed teapot --out " + out.string()) == 3);
}

TEST_CASE("foliate writes a table") {
    fs::path out = scratch("foliate");
    CHECK(lab("foliate --s-grid -1:0.01:1 --out " + out.string()) == 0);
    CHECK(fs::exists(out / "foliation.csv"));
    CHECK(read_json(out / "report.json")["leaves"] == 201);
}

TEST_CASE("config file beats defaults and flags beat the file") {
    fs::path out = scratch("config");
    fs::create_directories(out);
    fs::path cfg = out / "lab.cfg";
    std::ofstream(cfg) << "s_grid = 0:0.5:1\nr_max = 5\n";
    CHECK(lab("foliate --config " + cfg.string() + " --out " + (out / "a").string()) == 0);
    CHECK(read_json(out / "a" / "report.json")["leaves"] == 3);
    CHECK(read_json(out / "a" / "report.json")["config"]["r_max"] == 5.0);
    CHECK(lab("foliate --config " + cfg.string() + " --s-grid 0:0.25:1 --out " + (out / "b").string()) == 0);
    CHECK(read_json(out / "b" / "report.json")["leaves"] == 5);
}

TEST_CASE("disk solve is deterministic and verify reads its mesh") {
    fs::path a = scratch("disk_a"), b = scratch("disk_b"), v = scratch("disk_v");
    CHECK(lab("solve --seed disk --out " + a.string()) == 0);
    CHECK(lab("solve --seed disk --out " + b.string()) == 0);
    for (const char* f : {"mesh.obj", "report.json", "history.csv", "series.csv"}) CHECK(fs::exists(a / f));
    std::ifstream fa(a / "report.json"), fb(b / "report.json");
    std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
    CHECK(sa == sb);
    auto j = read_json(a / "report.json");
    CHECK(j["genus"] == 0);
    CHECK(j["type"] == "Other");
    CHECK(j["size"] == "Small");
    CHECK(lab("verify --input " + (a / "mesh.obj").string() + " --out " + v.string()) == 0);
    CHECK(read_json(v / "report.json")["genus"] == 0);
}

TEST_CASE("iteration cap gives exit 2") {
    fs::path out = scratch("cap");
    CHECK(lab("solve --s 0.05 --max-iter 1 --tol 1e-12 --out " + out.string()) == 2);
    CHECK(fs::exists(out / "report.json"));
}
