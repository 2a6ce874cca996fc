#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <latcong/cli.hpp>

using namespace latcong;

namespace {

struct CliResult {
    int code;
    std::string out, err;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> args;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) args.push_back(tok);
    return args;
}

CliResult cli(const std::string& line) {
    std::ostringstream out, err;
    int code = run_cli(split(line), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("usage errors exit with code 2") {
    for (const char* bad : {
             "",
             "theory --a 3.0",
             "theory --a 0",
             "theory --bogus",
             "simulate-rdist --n 2 --j 2",
             "simulate-rdist --n 1 --j 1",
             "simulate-rdist --range 50:20",
             "simulate-rdist --range 1:50",
             "simulate-rdist --range nonsense",
             "simulate-rdist --modulus 101 --count 4",
             "simulate-rdist --modulus 101 --modulus-kind any",
             "simulate-rdist --modulus 101 --samples 0",
             "simulate-rdist --n 3 --j 1 --modulus 101 --box square",
             "solve",
             "solve --modulus 25",
             "solve --row 1,1",
             "solve --modulus 1 --row 1,1",
             "solve --modulus 25 --row 7",
             "solve --modulus 25 --row 1,1,1 --box rect",
             "solve --modulus 25 --row 1,1 --box cube --cube-scale 1.5",
             "solve --modulus 25 --row 1,1 --box pyramid",
             "lattices",
             "hecke-average --modulus 12 --r 1 --n 3 --j 3",
             "hecke-average --modulus 12 --r 1 --n 5 --j 1",
             "hecke-average --modulus 12",
             "simulate-primitive --a 2.5",
             "expsum --range 10:5",
             "expsum --a 0",
             "theory --format yaml",
         }) {
        CAPTURE(bad);
        auto r = cli(bad);
        REQUIRE(r.code == 2);
        REQUIRE(r.err.rfind("usage error: ", 0) == 0);
        REQUIRE(r.out.empty());
    }
}

TEST_CASE("help exits cleanly") {
    auto top = cli("--help");
    CHECK(top.code == 0);
    CHECK(top.out.find("theory") != std::string::npos);
    auto sub = cli("solve --help");
    CHECK(sub.code == 0);
    CHECK(sub.out.find("--row") != std::string::npos);
    CHECK(sub.err.empty());
}

TEST_CASE("runtime guard failures exit with code 1 and an error record") {
    auto r = cli("solve --modulus 4 --row 2,2");
    REQUIRE(r.code == 1);
    auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 3);
    CHECK(ls[0].rfind("# artifact: ", 0) == 0);
    CHECK(ls[1].rfind("# config: ", 0) == 0);
    REQUIRE(ls[2].rfind("# error: ", 0) == 0);

    auto j = cli("solve --modulus 4 --row 2,2 --format json");
    REQUIRE(j.code == 1);
    auto doc = nlohmann::json::parse(j.out);
    REQUIRE(doc.contains("error"));
    CHECK(doc["error"].get<std::string>().find("gcd") != std::string::npos);
}

TEST_CASE("csv headers are frozen per command") {
    auto check3 = [](const std::string& cmdline, const std::string& name,
                     const std::string& header) {
        auto r = cli(cmdline);
        CAPTURE(cmdline, r.err);
        REQUIRE(r.code == 0);
        auto ls = lines_of(r.out);
        REQUIRE(ls.size() >= 3);
        REQUIRE(ls[0] == "# artifact: latcong/" + name + " 0.1.0");
        REQUIRE(ls[1].rfind("# config: " + name, 0) == 0);
        size_t h = 2;
        while (h < ls.size() && ls[h].rfind("# ", 0) == 0) ++h;
        REQUIRE(ls[h] == header);
    };
    check3("theory --a 1.0 --rmax 9", "theory", "quantity,r,value");
    check3("solve --modulus 25 --row 1,1 --box square --a 2.0", "solve", "key,value");
    check3("lattices --modulus 12", "lattices", "d,a,snf1,snf2,cyclic,row_a,row_b");
    check3("simulate-rdist --modulus 101 --samples 200 --seed 5", "simulate-rdist",
           "N,r,count,freq,theory_freq,z");
    check3("simulate-primitive --modulus 101 --samples 200 --seed 5", "simulate-primitive",
           "quantity,key,value");
    check3("hecke-average --n 2 --j 1 --modulus 24 --r 1 --box square --a 1.0",
           "hecke-average", "n,j,N,r,orbit_size,matching,fraction");
    check3("expsum --range 100:300 --count 3 --samples 2 --seed 1", "expsum",
           "p,g,h1,h2,r1,r2,a1,a2,abs_S,weil_bound,M_unsigned,M_signed,improved_holds");
}

TEST_CASE("echoed config reparses to the same canonical echo") {
    for (const char* line : {
             "theory --a 0.5 --rmax 11",
             "solve --modulus 25 --row 1,1 --box rect --a 1.5",
             "lattices --modulus 30",
             "simulate-rdist --n 2 --j 1 --modulus 101 --modulus 103 --samples 50 --seed 9",
             "simulate-rdist --n 3 --j 2 --modulus-kind any --range 100:200 --count 2 "
             "--samples 10 --box cube --cube-scale 0.75 --seed 3",
             "simulate-primitive --modulus 101 --samples 40 --a 2.0 --seed 4",
             "hecke-average --n 2 --j 1 --modulus 36 --r 3 --box square --a 2.0",
             "expsum --range 100:300 --count 2 --samples 3 --a 1.0 --seed 8 --format json",
         }) {
        CAPTURE(line);
        auto cfg = parse_config(split(line));
        std::string echo = detail::echo_config(cfg);
        auto cfg2 = parse_config(split(echo));
        REQUIRE(detail::echo_config(cfg2) == echo);
        REQUIRE(cfg2.command == cfg.command);
        REQUIRE(cfg2.format == cfg.format);
        REQUIRE(cfg2.samples == cfg.samples);
        REQUIRE(cfg2.seed == cfg.seed);
        REQUIRE(cfg2.a == cfg.a);
        REQUIRE(cfg2.modulus_list == cfg.modulus_list);
    }
}

TEST_CASE("documented experiment invocation parses") {
    auto cfg = parse_config(split(
        "simulate-rdist --n 2 --j 1 --modulus-kind prime --range 100000:1000000 "
        "--count 10 --samples 20000 --a 1.0 --seed 42"));
    CHECK(cfg.command == CliConfig::Command::simulate_rdist);
    CHECK(cfg.modulus_kind == "prime");
    CHECK(cfg.range_lo == 100000);
    CHECK(cfg.range_hi == 1000000);
    CHECK(cfg.count == 10);
    CHECK(cfg.samples == 20000);
    CHECK(cfg.seed == 42);
    CHECK(cfg.n == 2);
    CHECK(cfg.j == 1);
}

TEST_CASE("expsum defaults differ from the sampling commands") {
    auto cfg = parse_config(split("expsum"));
    CHECK(cfg.range_lo == 1000);
    CHECK(cfg.range_hi == 10000);
    CHECK(cfg.count == 200);
    CHECK(cfg.samples == 5);
    auto rd = parse_config(split("simulate-rdist"));
    CHECK(rd.range_lo == 100000);
    CHECK(rd.range_hi == 1000000);
    CHECK(rd.count == 10);
    CHECK(rd.samples == 1000);
}

TEST_CASE("solve reports the survey in json") {
    auto r = cli("solve --modulus 25 --row 1,1 --box square --a 2.0 --format json");
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["artifact"] == "latcong/solve");
    CHECK(doc["modulus"] == 25);
    CHECK(doc["generator"] == nlohmann::json({1, 24}));
    CHECK(doc["shortest"] == nlohmann::json({1, -1}));
    CHECK(doc["shortest_sup"] == 1);
    CHECK(doc["box_count"] == 7);
    REQUIRE(doc["census"].is_array());
    CHECK(doc["census"].size() == 6);
    CHECK(doc["census"][0]["k"] == 1);
    CHECK(doc["census"][0]["d"] == 1);
}

TEST_CASE("theory csv carries the quoted values") {
    auto r = cli("theory --a 1.0 --rmax 9");
    REQUIRE(r.code == 0);
    double c21 = -1, p = -1, bound = -1;
    for (const auto& line : lines_of(r.out)) {
        if (line.rfind("c2r,1,", 0) == 0) c21 = std::stod(line.substr(6));
        if (line.rfind("p_nontrivial,,", 0) == 0) p = std::stod(line.substr(14));
        if (line.rfind("primitive_lower_bound,,", 0) == 0)
            bound = std::stod(line.substr(23));
    }
    CHECK(std::abs(c21 - 0.696036) <= 5e-7);
    CHECK(std::abs(p - 0.303964) <= 5e-7);
    CHECK(std::abs(bound - 0.089029) <= 5e-7);
}

TEST_CASE("worker count never changes output bytes") {
    for (const char* base : {
             "simulate-rdist --modulus 101 --modulus 103 --samples 400 --seed 6",
             "simulate-primitive --modulus 101 --modulus 103 --samples 400 --seed 6",
             "expsum --range 100:300 --count 3 --samples 3 --seed 6",
         }) {
        auto one = cli(std::string(base) + " --threads 1");
        auto four = cli(std::string(base) + " --threads 4");
        CAPTURE(base);
        REQUIRE(one.code == 0);
        REQUIRE(one.out == four.out);
    }
}

TEST_CASE("output flag writes the same bytes to a file") {
    std::string path = "cli_out_probe.csv";
    auto direct = cli("lattices --modulus 12");
    auto filed = cli("lattices --modulus 12 --output " + path);
    REQUIRE(filed.code == 0);
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == direct.out);
    std::remove(path.c_str());

    auto bad = cli("lattices --modulus 12 --output no_such_dir/x.csv");
    CHECK(bad.code == 1);
}
