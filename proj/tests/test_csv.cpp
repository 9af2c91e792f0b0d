#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>

#include "extgini/csv.hpp"
#include "extgini/estimator.hpp"

using namespace extgini;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = std::string("/tmp/extgini_test_") + name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

// FNV-1a over the raw fixture bytes; golden tests bind to this, not to the path.
std::uint64_t fnv1a(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::uint64_t hash = 1469598103934665603ULL;
    char c;
    while (in.get(c)) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ULL;
    }
    return hash;
}

}  // namespace

TEST_CASE("single-column file") {
    const auto path = write_temp("single.csv", "1.5\n2.5\n3\n");
    const auto data = load_dataset(path);
    CHECK(data.values == std::vector<double>{1.5, 2.5, 3.0});
    CHECK(data.labels.empty());
    CHECK_FALSE(data.had_header);
}

TEST_CASE("label-value file with header auto-detection") {
    const auto path = write_temp("labeled.csv", "country,gdp\na,1.0\nb,2.0\n");
    const auto data = load_dataset(path);
    CHECK(data.had_header);
    CHECK(data.values == std::vector<double>{1.0, 2.0});
    CHECK(data.labels == std::vector<std::string>{"a", "b"});
}

TEST_CASE("headerless label-value file") {
    const auto path = write_temp("nohdr.csv", "a,1.0\nb,2.0\n");
    const auto data = load_dataset(path);
    CHECK_FALSE(data.had_header);
    CHECK(data.values == std::vector<double>{1.0, 2.0});
}

TEST_CASE("CRLF endings and blank lines are tolerated") {
    const auto path = write_temp("crlf.csv", "x,1.0\r\n\r\ny,2.0\r\n");
    const auto data = load_dataset(path);
    CHECK(data.values == std::vector<double>{1.0, 2.0});
}

TEST_CASE("non-numeric value cells past the header are reported with line numbers") {
    const auto path = write_temp("bad.csv", "hdr,value\na,1.0\nb,oops\n");
    try {
        load_dataset(path);
        FAIL("expected invalid_input");
    } catch (const invalid_input& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("too many columns fail") {
    const auto path = write_temp("wide.csv", "a,1.0,extra\n");
    CHECK_THROWS_AS(load_dataset(path), invalid_input);
}

TEST_CASE("missing and empty files fail") {
    CHECK_THROWS_AS(load_dataset("/tmp/extgini_does_not_exist.csv"), invalid_input);
    const auto path = write_temp("empty.csv", "");
    CHECK_THROWS_AS(load_dataset(path), invalid_input);
}

TEST_CASE("negative observations are rejected by the sample") {
    const auto path = write_temp("neg.csv", "1.0\n-2.0\n");
    const auto data = load_dataset(path);
    CHECK_THROWS_AS(data.sample(), invalid_input);
}

TEST_CASE("bundled GDP fixture matches its recorded checksum and values") {
    const std::string path = std::string(EXTGINI_DATA_DIR) + "/gdp_2023.csv";
    CHECK(fnv1a(path) == 0x0b748aee6b993070ULL);
    const auto data = load_dataset(path);
    REQUIRE(data.values.size() == 17);
    CHECK(data.had_header);
    CHECK(data.labels.front() == "Singapore");
    CHECK(data.labels.back() == "Somalia");
    const Sample sample = data.sample();
    CHECK(gini_estimate(sample).value == Catch::Approx(0.5599781256112254).margin(1e-12));
    CHECK(mth_gini_estimate(sample, 17).value ==
          Catch::Approx(0.2205633889800872).margin(1e-12));
}
