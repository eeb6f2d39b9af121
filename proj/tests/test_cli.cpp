#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

struct CliOut {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

CliOut run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + ROADFIELD_CLI_PATH + "\" " +
                            args + " > cli_stdout.txt 2> cli_stderr.txt";
    const int raw = std::system(cmd.c_str());
    CliOut r;
    r.code = (raw >= 0 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
    r.out = slurp("cli_stdout.txt");
    r.err = slurp("cli_stderr.txt");
    return r;
}

double json_number(const std::string& text, const std::string& key) {
    const std::string tag = "\"" + key + "\":";
    const auto pos = text.find(tag);
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + tag.size()));
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

}  // namespace

TEST_CASE("speed: baseline value and fields") {
    const CliOut r = run_cli("--D 1 --d 1 --mu 1 --nu 1 --L 2 speed");
    CHECK(r.code == 0);
    CHECK(std::abs(json_number(r.out, "c_star") - 0.93) < 0.01);
    CHECK(r.out.find("\"family\": \"trig\"") != std::string::npos);
    CHECK(r.out.find("\"regime\"") != std::string::npos);
}

TEST_CASE("speed: deterministic byte-identical reruns") {
    const CliOut a = run_cli("--D 3.7 --L 2.4 speed");
    const CliOut b = run_cli("--D 3.7 --L 2.4 speed");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
}

TEST_CASE("speed: extinction regime exits 3 with a JSON diagnostic") {
    const CliOut r = run_cli("--L 1.4 speed");
    CHECK(r.code == 3);
    CHECK(r.out.empty());
    CHECK(r.err.find("\"error\"") != std::string::npos);
    CHECK(r.err.find("\"exit\": 3") != std::string::npos);
}

TEST_CASE("config file: values read, flags override, unknown key rejected") {
    write_file("cli_cfg.json",
               "{\"params\": {\"D\": 8, \"L\": 2}, \"reaction\": \"logistic\"}");
    const CliOut r = run_cli("--config cli_cfg.json speed");
    CHECK(r.code == 0);
    CHECK(std::abs(json_number(r.out, "c_star") - 1.8614) < 1e-3);

    const CliOut o = run_cli("--config cli_cfg.json --D 1 speed");
    CHECK(o.code == 0);
    CHECK(std::abs(json_number(o.out, "c_star") - 0.93) < 0.01);

    write_file("cli_bad.json", "{\"params\": {\"D\": 8}, \"speling\": 1}");
    const CliOut b = run_cli("--config cli_bad.json speed");
    CHECK(b.code == 2);
    CHECK(b.err.find("unknown config key") != std::string::npos);

    write_file("cli_badp.json", "{\"params\": {\"Q\": 8}}");
    CHECK(run_cli("--config cli_badp.json speed").code == 2);
}

TEST_CASE("bad arguments and bad parameter values exit 2") {
    CHECK(run_cli("frobnicate").code == 2);
    CHECK(run_cli("--L 0 speed").code == 2);
    CHECK(run_cli("--reaction nope speed").code == 2);
    CHECK(run_cli("--config does_not_exist.json speed").code == 2);
}

TEST_CASE("limits: all fields present, c_kpp_dr null at L=2") {
    const CliOut r = run_cli("--D 8 --L 2 limits");
    CHECK(r.code == 0);
    for (const char* key : {"ell0", "ell_infinity", "c_star_halfplane",
                            "c_kpp", "D_kpp", "c_int"})
        CHECK(r.out.find(std::string("\"") + key + "\"") != std::string::npos);
    CHECK(r.out.find("\"c_kpp_dr\": null") != std::string::npos);
    CHECK(std::abs(json_number(r.out, "c_kpp") - 2.0) < 1e-12);

    const CliOut r4 = run_cli("--D 8 --L 4 limits");
    CHECK(r4.code == 0);
    CHECK(std::abs(json_number(r4.out, "c_kpp_dr") - 1.53) < 0.01);
}

TEST_CASE("steady: roots JSON and profile CSV") {
    const CliOut r = run_cli("--L 2 --output cli_steady.csv steady");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"roots\": [") != std::string::npos);
    const std::string csv = slurp("cli_steady.csv");
    CHECK(csv.rfind("y,V\n", 0) == 0);
    // first row is the Dirichlet floor
    CHECK(csv.find("y,V\n0,0\n") == 0);
    // extinction width: empty root list, no profile required
    const CliOut e = run_cli("--L 1.4 steady");
    CHECK(e.code == 0);
    CHECK(e.out.find("\"roots\": []") != std::string::npos);
}

TEST_CASE("sweep: increasing c_star over a log D grid") {
    const CliOut r = run_cli(
        "--L 2 --output cli_sweep.csv sweep --var D --from 0.1 --to 10 "
        "--points 5 --log");
    CHECK(r.code == 0);
    std::ifstream in("cli_sweep.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "D,c_star,beta_star,alpha_star,family,regime");
    double prev = 0.0;
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double c = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        CHECK(c > prev);
        prev = c;
        ++rows;
    }
    CHECK(rows == 5);
}

TEST_CASE("sweep --curves: samples one dispersion curve") {
    const CliOut r = run_cli(
        "--L 2 --output cli_curve.csv sweep --curves --family trig "
        "--branch plus --side road --c 1.5 --from 0.0 --to 0.7 --points 8");
    CHECK(r.code == 0);
    std::ifstream in("cli_curve.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "family,branch,c,beta,alpha");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        CHECK(line.rfind("trig,plus,1.5,", 0) == 0);
        ++rows;
    }
    CHECK(rows == 8);
}

TEST_CASE("simulate: tiny run writes trace, field and road CSVs") {
    const CliOut r = run_cli(
        "--L 2 --output cli_sim simulate --x-halfwidth 20 --nx 201 --ny 15 "
        "--dt 9.5e-4 --T 4 --record-dt 1");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"fitted_speed\"") != std::string::npos);
    CHECK(r.out.find("\"outcome\"") != std::string::npos);
    CHECK(slurp("cli_sim_trace.csv").rfind("t,x_right,x_left,sup_v\n", 0) == 0);
    CHECK(slurp("cli_sim_field.csv").rfind("x,y,v\n", 0) == 0);
    CHECK(slurp("cli_sim_road.csv").rfind("x,u\n", 0) == 0);
}

TEST_CASE("verify: speed line plus three complex-root lines") {
    const CliOut r = run_cli("--D 0.5 --L 2 verify");
    CHECK(r.code == 0);
    std::istringstream is(r.out);
    std::string line;
    int lines = 0, roots = 0;
    while (std::getline(is, line)) {
        ++lines;
        if (line.find("\"beta_im\"") != std::string::npos) {
            ++roots;
            CHECK(json_number(line, "residual") < 1e-10);
            CHECK(json_number(line, "beta_im") > 0.0);
        }
    }
    CHECK(lines == 4);
    CHECK(roots == 3);
}
