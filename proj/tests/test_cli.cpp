#include <doctest.h>

#include "percross/crossing.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

// End-to-end tests against the installed binary. PERCROSS_CLI_PATH is set by
// the build to the freshly built executable.

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult sh(const std::string& command) {
    RunResult r;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int rc = pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

std::string cli() { return std::string(PERCROSS_CLI_PATH); }

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

nlohmann::json parse_line(const std::string& line) {
    return nlohmann::json::parse(line);
}

} // namespace

TEST_CASE("eval produces a self-describing record") {
    const RunResult r = sh(cli() + " eval P_h --r 1 2>/dev/null");
    REQUIRE(r.status == 0);
    const auto rec = parse_line(r.out);
    CHECK(rec["command"] == "eval");
    CHECK(rec["function"] == "P_h");
    CHECK(rec["coordinate"] == "r");
    CHECK(rec["r"].get<double>() == 1.0);
    CHECK(rec["z"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rec["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("eval agrees with the library at full precision") {
    const RunResult r = sh(cli() + " eval P_hv --z 0.37");
    REQUIRE(r.status == 0);
    const auto rec = parse_line(r.out);
    CHECK(rec["value"].get<double>() == percross::crossing::p_hv(0.37));
}

TEST_CASE("identical invocations are byte-identical") {
    const std::string cmd = cli() + " eval N_h --z 0.73";
    const RunResult a = sh(cmd);
    const RunResult b = sh(cmd);
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(sh(cli() + " eval P_h 2>/dev/null").status == 2);               // missing coord
    CHECK(sh(cli() + " eval P_h --z 0.2 --r 3 2>/dev/null").status == 2); // two coords
    CHECK(sh(cli() + " eval P_x --z 0.2 2>/dev/null").status == 2);       // bad function
    CHECK(sh(cli() + " eval P_h --z 1.7 2>/dev/null").status == 2);       // domain
    CHECK(sh(cli() + " verify nonsuite 2>/dev/null").status == 2);
    CHECK(sh(cli() + " table P_h --z 0.2:0.1:0.1 2>/dev/null").status == 2);
    CHECK(sh(cli() + " 2>/dev/null").status == 2);                        // no subcommand
}

TEST_CASE("verify suite reports every check and a summary") {
    const RunResult r = sh(cli() + " verify psymbol");
    REQUIRE(r.status == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() >= 2);
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
        const auto rec = parse_line(lines[i]);
        CHECK(rec["command"] == "verify");
        CHECK(rec["pass"] == true);
        CHECK(rec["residual"].get<double>() <= rec["bound"].get<double>());
    }
    const auto summary = parse_line(lines.back());
    CHECK(summary["checks"].get<int>() == static_cast<int>(lines.size()) - 1);
    CHECK(summary["failures"].get<int>() == 0);
    CHECK(summary["pass"] == true);
}

TEST_CASE("verify all is a single-command gate") {
    const RunResult r = sh(cli() + " verify all");
    REQUIRE(r.status == 0);
    const auto summary = parse_line(lines_of(r.out).back());
    CHECK(summary["suite"] == "all");
    CHECK(summary["failures"].get<int>() == 0);
    CHECK(summary["pass"] == true);
    CHECK(summary["checks"].get<int>() >= 30);
}

TEST_CASE("table emits an inclusive csv grid") {
    const RunResult r = sh(cli() + " table P_h --z 0.1:0.9:0.1 --format csv");
    REQUIRE(r.status == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 10); // header + 9 rows, endpoint included
    CHECK(lines[0] == "z,value");
    double z = 0.1;
    for (std::size_t i = 1; i < lines.size(); ++i, z += 0.1) {
        double zi = 0.0, vi = 0.0;
        REQUIRE(std::sscanf(lines[i].c_str(), "%lf,%lf", &zi, &vi) == 2);
        CHECK(zi == doctest::Approx(z).epsilon(1e-12));
        CHECK(vi == doctest::Approx(percross::crossing::p_h(zi)).epsilon(1e-14));
    }
}

TEST_CASE("table in json matches table in csv") {
    const RunResult j = sh(cli() + " table P_surr --z -1:1:0.5 --format json");
    REQUIRE(j.status == 0);
    const auto lines = lines_of(j.out);
    REQUIRE(lines.size() == 5);
    // odd about z = 0: first and last rows sum to 1
    const double lo = parse_line(lines.front())["value"].get<double>();
    const double hi = parse_line(lines.back())["value"].get<double>();
    CHECK(lo + hi == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(parse_line(lines[2])["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("simulate: small run, json fields and reproducibility") {
    const std::string cmd =
        cli() + " simulate --geometry rectangle --L 16 --trials 500 --seed 11 --workers 2";
    const RunResult a = sh(cmd);
    REQUIRE(a.status == 0);
    const RunResult b = sh(cmd);
    CHECK(a.out == b.out);

    const auto lines = lines_of(a.out);
    REQUIRE(lines.size() == 3); // P_h, P_hv, N_h
    for (const auto& line : lines) {
        const auto rec = parse_line(line);
        CHECK(rec["command"] == "simulate");
        CHECK(rec["trials"].get<long>() == 500);
        CHECK(rec["seed"].get<long>() == 11);
        CHECK(rec["mean"].get<double>() >= 0.0);
        CHECK(rec["std_error"].get<double>() > 0.0);
        CHECK(rec["digest"].get<std::string>().size() == 16);
        CHECK(rec["formula"].get<double>() > 0.0);
    }
    CHECK(parse_line(lines[0])["observable"] == "P_h");
    CHECK(parse_line(lines[1])["observable"] == "P_hv");
    CHECK(parse_line(lines[2])["observable"] == "N_h");
}

TEST_CASE("simulate: observable filter and csv header") {
    const RunResult r = sh(cli() +
                           " simulate --geometry rectangle --L 16 --trials 200 --seed 3"
                           " --observable P_h --format csv");
    REQUIRE(r.status == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] ==
          "geometry,observable,L,aspect,split,p,trials,seed,workers,mean,std_error,digest,"
          "formula,z_score");
    CHECK(lines[1].rfind("rectangle,P_h,16,", 0) == 0);

    CHECK(sh(cli() + " simulate --geometry rectangle --L 16 --trials 100"
                     " --observable P_surr 2>/dev/null")
              .status == 2);
}

TEST_CASE("simulate: seed from the environment") {
    const RunResult env = sh("PERCROSS_SEED=911 " + cli() +
                             " simulate --geometry rectangle --L 16 --trials 300");
    REQUIRE(env.status == 0);
    const RunResult flag = sh(cli() +
                              " simulate --geometry rectangle --L 16 --trials 300 --seed 911");
    REQUIRE(flag.status == 0);
    CHECK(env.out == flag.out);
}

TEST_CASE("simulate: config file with flag overrides") {
    const std::string path = "/tmp/percross_cli_test_config.json";
    {
        std::ofstream out(path);
        out << "{\"geometry\":\"triangle\",\"side_sites\":16,\"split\":0.25,"
               "\"trials\":400,\"seed\":5,\"workers\":1}\n";
    }
    const RunResult cfg = sh(cli() + " simulate --config " + path);
    REQUIRE(cfg.status == 0);
    const RunResult flags = sh(cli() +
                               " simulate --geometry triangle --L 16 --t 0.25 --trials 400"
                               " --seed 5 --workers 1");
    REQUIRE(flags.status == 0);
    CHECK(cfg.out == flags.out);

    // an explicit flag wins over the file
    const RunResult over = sh(cli() + " simulate --config " + path + " --seed 6");
    REQUIRE(over.status == 0);
    CHECK(parse_line(lines_of(over.out)[0])["seed"].get<long>() == 6);
    CHECK(over.out != cfg.out);
    std::remove(path.c_str());
}

TEST_CASE("psymbol script from stdin") {
    const std::string script =
        "hyper 1/3 2/3 / 4/3\\n"
        "shift 0 1/3\\n"
        "sum\\n"
        "pullback [A]=inf:3 [B]=0:3 [C]=1:3\\n"
        "render\\n";
    const RunResult r = sh("printf '" + script + "' | " + cli() + " psymbol -");
    REQUIRE(r.status == 0);
    CHECK(r.out == "exponent sum: 1\nP{ }\n");

    // bad script lines carry their line number
    const RunResult bad = sh("printf 'hyper 1/2 / 0\\n' | " + cli() + " psymbol - 2>&1");
    CHECK(bad.status == 2);
    CHECK(bad.out.find("line 1") != std::string::npos);
}

TEST_CASE("psymbol script from a file") {
    const std::string path = "/tmp/percross_cli_test_script.psym";
    {
        std::ofstream out(path);
        out << "# quadratic-map tableau\n"
            << "hyper 1/2 2/3 / 3/2\n"
            << "shift 0 1/2\n"
            << "pullback 0=0:2 i=1:1 -i=1:1 inf=inf:2\n"
            << "render\n";
    }
    const RunResult r = sh(cli() + " psymbol " + path);
    REQUIRE(r.status == 0);
    CHECK(r.out ==
          "P{ i     -i    inf\n"
          "   ---------------\n"
          "   0     0     0\n"
          "   1/3   1/3   1/3 }\n");
    std::remove(path.c_str());
}
