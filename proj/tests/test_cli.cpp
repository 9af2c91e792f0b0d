#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

std::string cli_path() {
    const char* env = std::getenv("EXTGINI_CLI");
    REQUIRE(env != nullptr);
    return env;
}

std::string fixture_path() { return std::string(EXTGINI_DATA_DIR) + "/gdp_2023.csv"; }

RunResult run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    std::array<char, 4096> buffer{};
    std::size_t got = 0;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        output.append(buffer.data(), got);
    }
    const int status = pclose(pipe);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, output};
}

json parse_document(const RunResult& result) {
    REQUIRE(result.exit_code == 0);
    json doc = json::parse(result.stdout_text);
    REQUIRE(doc.contains("schema_version"));
    REQUIRE(doc["schema_version"] == "1.0");
    return doc;
}

// every numeric field must parse back to a finite number
void check_finite(const json& node) {
    if (node.is_number_float()) {
        CHECK(std::isfinite(node.get<double>()));
    } else if (node.is_object() || node.is_array()) {
        for (const auto& child : node) {
            check_finite(child);
        }
    }
}

}  // namespace

TEST_CASE("theoretical subcommand reproduces known values") {
    auto doc = parse_document(run_cli("theoretical --alpha 2 --m 2 --j 1 --k 2"));
    CHECK(doc["results"]["index"].get<double>() == Catch::Approx(0.375).margin(1e-8));
    check_finite(doc);

    doc = parse_document(run_cli("theoretical --alpha 2 --m 4 --j 2 --k 3"));
    CHECK(doc["results"]["index"].get<double>() == Catch::Approx(0.09657118056).margin(1e-8));
    CHECK(doc["command"] == "theoretical");
}

TEST_CASE("theoretical subcommand usage errors") {
    CHECK(run_cli("theoretical --alpha 2 --m 4 --j 3 --k 2").exit_code == 2);
    CHECK(run_cli("theoretical --alpha 0 --m 2 --j 1 --k 2").exit_code == 2);
    CHECK(run_cli("theoretical --m 2 --j 1 --k 2").exit_code == 2);  // missing --alpha
    CHECK(run_cli("theoretical --alpha 2 --m 2 --j 1 --k 2 --tol 0").exit_code == 2);
    CHECK(run_cli("no_such_subcommand").exit_code == 2);
}

TEST_CASE("estimate subcommand on the bundled fixture") {
    auto doc = parse_document(
        run_cli("estimate --input " + fixture_path() + " --m 2 --j 1 --k 2"));
    CHECK(doc["results"]["estimate"].get<double>() == Catch::Approx(0.5600).margin(5e-5));
    CHECK(doc["results"]["n"] == 17);
    CHECK(doc["results"]["method"] == "fast");

    doc = parse_document(
        run_cli("estimate --input " + fixture_path() + " --m 17 --j 1 --k 17"));
    CHECK(doc["results"]["estimate"].get<double>() == Catch::Approx(0.2206).margin(5e-5));

    doc = parse_document(
        run_cli("estimate --input " + fixture_path() + " --m 3 --j 1 --k 3 --naive"));
    CHECK(doc["results"]["method"] == "naive");
}

TEST_CASE("estimate subcommand error paths") {
    CHECK(run_cli("estimate --input /tmp/no_such_file.csv --m 2 --j 1 --k 2").exit_code == 2);
    {
        std::ofstream out("/tmp/extgini_cli_const.csv");
        out << "5\n5\n5\n";
    }
    auto doc = parse_document(run_cli("estimate --input /tmp/extgini_cli_const.csv --m 2 --j 1 --k 2"));
    CHECK(doc["results"]["estimate"].get<double>() == 0.0);
    {
        std::ofstream out("/tmp/extgini_cli_big.csv");
        for (int i = 1; i <= 80; ++i) {
            out << i << "\n";
        }
    }
    CHECK(run_cli("estimate --input /tmp/extgini_cli_big.csv --m 12 --j 2 --k 5 --naive")
              .exit_code == 3);
}

TEST_CASE("simulate subcommand is deterministic modulo timing") {
    const std::string flags =
        "simulate --alpha 2 --rate 1 --n 10 --reps 20 --m 4 --j 2 --k 3 --seed 42";
    auto doc1 = parse_document(run_cli(flags));
    auto doc2 = parse_document(run_cli(flags));
    doc1.erase("timing");
    doc2.erase("timing");
    CHECK(doc1 == doc2);
    CHECK(doc1["results"]["reps"] == 20);
    check_finite(doc1);

    const std::string single =
        "simulate --alpha 2 --rate 1 --n 5 --reps 1 --m 4 --j 2 --k 3 --seed 42";
    auto one1 = parse_document(run_cli(single));
    auto one2 = parse_document(run_cli(single));
    one1.erase("timing");
    one2.erase("timing");
    CHECK(one1 == one2);
    CHECK(one1["results"]["std_error"] == 0.0);
}

TEST_CASE("simulate subcommand usage errors") {
    CHECK(run_cli("simulate --alpha 2 --n 3 --m 5 --j 2 --k 4 --seed 1").exit_code == 2);
}

TEST_CASE("fit subcommand reports the MLE") {
    auto doc = parse_document(run_cli("fit --input " + fixture_path()));
    CHECK(doc["results"]["shape"].get<double>() == Catch::Approx(0.92279103).margin(1e-6));
    CHECK(doc["results"]["converged"] == true);
    check_finite(doc);

    // zero observations are a domain error for the fit
    {
        std::ofstream out("/tmp/extgini_cli_zero.csv");
        out << "1.0\n0.0\n2.0\n";
    }
    CHECK(run_cli("fit --input /tmp/extgini_cli_zero.csv").exit_code == 2);
}

TEST_CASE("fit --gof produces p-values above the 5% line on the fixture") {
    auto doc = parse_document(
        run_cli("fit --input " + fixture_path() + " --gof --bootstrap 200 --seed 7"));
    const auto& gof = doc["results"]["gof"];
    CHECK(gof["ks_p"].get<double>() > 0.05);
    CHECK(gof["cvm_p"].get<double>() > 0.05);
    CHECK(gof["bootstrap_reps"] == 200);
}

TEST_CASE("heatmap subcommand writes the grid CSV") {
    const std::string out_path = "/tmp/extgini_cli_heat.csv";
    auto doc = parse_document(run_cli("heatmap --input " + fixture_path() + " --m-max 2 --output " +
                                      out_path));
    CHECK(doc["results"]["rows"] == 3);

    std::ifstream in(out_path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream content;
    content << in.rdbuf();
    const std::string text = content.str();
    CHECK(text.find("m,j,k,estimate\n") == 0);
    CHECK(text.find("\r") == std::string::npos);  // LF endings only

    // parse rows: (2,1,1) -> 0, (2,1,2) -> gini, (2,2,2) -> 0
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    CHECK(line == "2,1,1,0");
    std::getline(lines, line);
    CHECK(line.rfind("2,1,2,", 0) == 0);
    const double gini = std::strtod(line.c_str() + 6, nullptr);
    CHECK(gini == Catch::Approx(0.5600).margin(5e-5));
    std::getline(lines, line);
    CHECK(line == "2,2,2,0");

    CHECK(run_cli("heatmap --input " + fixture_path() + " --m-max 99 --output " + out_path)
              .exit_code == 2);
}

TEST_CASE("heatmap rows widen monotonically at fixed m") {
    const std::string out_path = "/tmp/extgini_cli_heat5.csv";
    parse_document(
        run_cli("heatmap --input " + fixture_path() + " --m-max 5 --output " + out_path));
    std::ifstream in(out_path);
    std::string line;
    std::getline(in, line);  // header
    struct Row {
        int m, j, k;
        double est;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        Row r{};
        REQUIRE(std::sscanf(line.c_str(), "%d,%d,%d,%lf", &r.m, &r.j, &r.k, &r.est) == 4);
        rows.push_back(r);
    }
    CHECK(rows.size() == 3 + 6 + 10 + 15);
    for (const auto& row : rows) {
        if (row.j == row.k) {
            CHECK(row.est == 0.0);
        }
    }
    // at fixed (m, j), estimates grow with k
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].m == rows[i - 1].m && rows[i].j == rows[i - 1].j) {
            CHECK(rows[i].est >= rows[i - 1].est - 1e-13);
        }
    }
}

TEST_CASE("help is available on every subcommand") {
    for (const std::string sub : {"theoretical", "estimate", "simulate", "fit", "heatmap"}) {
        const auto result = run_cli(sub + " --help");
        CHECK(result.exit_code == 0);
        CHECK(result.stdout_text.find("--") != std::string::npos);
    }
}
