#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "mmphflab/cli.hpp"
#include "mmphflab/graphs.hpp"

using nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "mmphflab");
    std::ostringstream out;
    std::ostringstream err;
    const int code = mmphflab::run_cli(args, out, err);
    return Run{code, out.str(), err.str()};
}

json run_json(const std::vector<std::string>& args) {
    const auto r = run(args);
    REQUIRE(r.code == 0);
    return json::parse(r.out);
}

}  // namespace

TEST_CASE("chif on conflict(2,4) reports 2/1") {
    const auto j = run_json({"chif", "--graph", "conflict", "--m", "2", "--M", "4"});
    CHECK(j.at("chi_f") == "2/1");
    CHECK(j.at("dual").at("value") == "2/1");
    const auto& meta = j.at("metadata");
    CHECK(meta.at("tool") == "mmphflab");
    CHECK(meta.at("version") == mmphflab::tool_version);
    CHECK(meta.at("subcommand") == "chif");
    CHECK(meta.at("seed") == "0");
    CHECK(meta.at("config").at("M") == "4");
}

TEST_CASE("errors exit with code 2 and a message") {
    const auto cap = run({"chif", "--graph", "conflict", "--m", "4", "--M", "100"});
    CHECK(cap.code == 2);
    CHECK(cap.err.find("enumeration cap exceeded") != std::string::npos);
    CHECK(run({"chif", "--bogus"}).code == 2);
    CHECK(run({"nosuchcommand"}).code == 2);
    CHECK(run({"sample", "--m", "2", "--k", "2", "--s0", "7"}).code == 2);
    CHECK(run({"parameterize", "--n", "1", "--u", "2^2^64"}).code == 2);
    CHECK(run({"mmphf-verify", "--scheme", "nope", "--n", "3", "--u", "9"}).code == 2);
}

TEST_CASE("chi and graph export") {
    const auto chi = run_json({"chi", "--graph", "shift", "--n", "2", "--u", "8"});
    CHECK(chi.at("chi") == 3);
    const auto g = run_json({"graph", "--graph", "conflict", "--m", "2", "--M", "4"});
    CHECK(g.dump().find("metadata") != std::string::npos);
    const auto dimacs = run({"graph", "--graph", "conflict", "--m", "2", "--M", "5", "--export", "dimacs"});
    REQUIRE(dimacs.code == 0);
    CHECK(dimacs.out.rfind("c ", 0) == 0);
    const auto back = mmphflab::graphs::from_dimacs(dimacs.out);
    const auto direct = mmphflab::graphs::build_graph(mmphflab::graphs::conflict(2, 5));
    CHECK(back.size() == direct.size());
    CHECK(back.edges() == direct.edges());
}

TEST_CASE("sample at canonical parameters yields clean traces") {
    const auto j = run_json({"sample", "--m", "3", "--paper-defaults", "--trials", "100", "--traces", "none"});
    CHECK(j.at("trials") == 100);
    CHECK(j.at("clean") == 100);
    CHECK(j.at("params").at("k") == "27");
    const auto alias = run_json({"sample", "--m", "3", "--canonical", "--trials", "100", "--traces", "none"});
    CHECK(alias.at("clean") == 100);
}

TEST_CASE("runs are byte-identical for a fixed seed") {
    const std::vector<std::string> args = {"sample", "--m", "2", "--paper-defaults", "--trials", "20", "--seed", "9"};
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto other = args;
    other.back() = "10";
    CHECK(run(other).out != a.out);
    const std::vector<std::string> mc = {"mc-success", "--m", "2", "--k", "2", "--s0", "8", "--trials", "500"};
    CHECK(run(mc).out == run(mc).out);
}

TEST_CASE("csv output carries a metadata comment") {
    const auto r = run({"sample", "--m", "2", "--trials", "2", "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# {", 0) == 0);
    const auto header = r.out.substr(r.out.find('\n') + 1);
    CHECK(header.rfind("trial,", 0) == 0);
    const auto meta = json::parse(r.out.substr(2, r.out.find('\n') - 2));
    CHECK(meta.at("subcommand") == "sample");
}

TEST_CASE("--out writes the result to a file") {
    const auto path = std::filesystem::temp_directory_path() / "mmphflab_cli_out.json";
    std::filesystem::remove(path);
    const auto r = run({"chif", "--graph", "cycle", "--size", "5", "--out", path.string()});
    REQUIRE(r.code == 0);
    std::ifstream in(path);
    REQUIRE(in.good());
    const auto j = json::parse(in);
    CHECK(j.at("chi_f") == "5/2");
    std::filesystem::remove(path);
}

TEST_CASE("adversary and enumerate on the worked instance") {
    const auto adv = run_json({"adversary", "--m", "2", "--k", "2", "--s0", "8", "--split", "256", "--skip-exhaustive"});
    CHECK(adv.at("split_success") == "17/512");
    CHECK(adv.at("universe") == 272);
    const auto en = run_json({"enumerate", "--m", "2", "--k", "2", "--s0", "8"});
    CHECK(en.dump().find("\"1/1\"") != std::string::npos);
}

TEST_CASE("index subcommands") {
    const auto v = run_json({"mmphf-verify", "--scheme", "rank-map", "--n", "50", "--u", "100000", "--seed", "3"});
    CHECK(v.dump().find("\"ok\":true") != std::string::npos);
    const auto sx = run_json({"sx-roundtrip", "--d-max", "4"});
    CHECK(sx.at("ok") == true);
    const auto br = run_json({"bound-report", "--graph", "conflict", "--m", "2", "--M", "4"});
    CHECK(br.at("chi_f") == "2/1");
    const auto p = run_json({"parameterize", "--n", "1024", "--u", "2^2^64"});
    CHECK(p.at("m") == 2);
    CHECK(p.at("k") == 512);
    CHECK(p.at("u_prime_pow2") == "73");
}

TEST_CASE("window tree subcommands") {
    const auto c = run_json({"case1-sweep", "--instances", "50", "--force-hypothesis"});
    CHECK(c.at("conclusion_failures") == 0);
    CHECK(c.at("identity_failures") == 0);
    const auto p = run_json({"prune", "--arity", "2", "--depth", "2", "--labels", "2", "--tau", "1/2", "--seed", "4"});
    CHECK(p.contains("kept_product"));
}
