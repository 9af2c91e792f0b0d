#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "extgini/simulation.hpp"

using namespace extgini;

TEST_CASE("substream derivation is deterministic and order independent") {
    CHECK(substream_seed(42, 0) == substream_seed(42, 0));
    CHECK(substream_seed(42, 0) != substream_seed(42, 1));
    CHECK(substream_seed(42, 1) != substream_seed(43, 1));

    SplitMix64 a(substream_seed(7, 3));
    SplitMix64 b(substream_seed(7, 3));
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next() == b.next());
    }
}

TEST_CASE("uniform draws live strictly inside (0,1)") {
    SplitMix64 rng(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.next_uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("gamma sampling hits the distribution") {
    // law of large numbers: mean of 10^6 Gamma(2,1) draws near 2
    {
        SplitMix64 rng(substream_seed(2024, 0));
        double sum = 0.0;
        const int n = 1'000'000;
        for (int i = 0; i < n; ++i) {
            sum += gamma_variate(rng, 2.0, 1.0);
        }
        CHECK(sum / n == Catch::Approx(2.0).margin(0.01));
    }
    // KS distance of 10^5 Exp(1) draws from the exponential CDF below 0.01
    {
        SplitMix64 rng(substream_seed(2024, 1));
        const int n = 100'000;
        std::vector<double> draws(n);
        for (auto& d : draws) {
            d = gamma_variate(rng, 1.0, 1.0);
        }
        std::sort(draws.begin(), draws.end());
        double ks = 0.0;
        for (int i = 0; i < n; ++i) {
            const double f = -std::expm1(-draws[static_cast<std::size_t>(i)]);
            ks = std::max(ks, std::fabs(f - (i + 0.5) / n) + 0.5 / n);
        }
        CHECK(ks < 0.01);
    }
    // sub-1 shapes go through the boost branch
    {
        SplitMix64 rng(substream_seed(2024, 2));
        double sum = 0.0;
        const int n = 400'000;
        for (int i = 0; i < n; ++i) {
            const double d = gamma_variate(rng, 0.5, 2.0);
            CHECK(d >= 0.0);
            sum += d;
        }
        CHECK(sum / n == Catch::Approx(0.25).margin(0.01));
    }
}

TEST_CASE("same seed reproduces the identical sample") {
    SplitMix64 a(substream_seed(99, 5));
    SplitMix64 b(substream_seed(99, 5));
    const Sample s1 = gamma_sample(GammaParams(2.0, 1.0), 50, a);
    const Sample s2 = gamma_sample(GammaParams(2.0, 1.0), 50, b);
    CHECK(std::memcmp(s1.values().data(), s2.values().data(), 50 * sizeof(double)) == 0);
}

TEST_CASE("run_simulation is bit-identical across runs") {
    SimulationConfig config{GammaParams(2.0, 1.0), 10, 50, IndexSpec(4, 2, 3), 12345,
                            std::nullopt,          {}};
    const SimulationReport r1 = run_simulation(config);
    const SimulationReport r2 = run_simulation(config);
    CHECK(r1.bias == r2.bias);
    CHECK(r1.mse == r2.mse);
    CHECK(r1.mean_estimate == r2.mean_estimate);
    CHECK(r1.std_error == r2.std_error);
    CHECK(r1.true_value == r2.true_value);
}

TEST_CASE("report invariants hold") {
    SimulationConfig config{GammaParams(2.0, 1.0), 20, 200, IndexSpec(4, 2, 3), 777,
                            std::nullopt,          {}};
    const SimulationReport report = run_simulation(config);
    CHECK(report.mse >= report.bias * report.bias - 1e-15);
    CHECK(report.mean_estimate == report.true_value + report.bias);
    CHECK(report.std_error > 0.0);
    CHECK(std::fabs(report.bias) < 3.0 * report.std_error);
}

TEST_CASE("degenerate j = k campaign is exactly zero") {
    SimulationConfig config{GammaParams(2.0, 1.0), 10, 20, IndexSpec(4, 3, 3), 1,
                            std::nullopt,          {}};
    const SimulationReport report = run_simulation(config);
    CHECK(report.true_value == 0.0);
    CHECK(report.bias == 0.0);
    CHECK(report.mse == 0.0);
    CHECK(report.mean_estimate == 0.0);
}

TEST_CASE("single replicate is definitional") {
    SimulationConfig config{GammaParams(2.0, 1.0), 10, 1, IndexSpec(4, 2, 3), 31415,
                            std::nullopt,          {}};
    const SimulationReport report = run_simulation(config);

    SplitMix64 rng(substream_seed(31415, 0));
    const Sample sample = gamma_sample(GammaParams(2.0, 1.0), 10, rng);
    const double estimate = extended_gini_estimate(sample, IndexSpec(4, 2, 3)).value;
    CHECK(report.bias == estimate - report.true_value);
    CHECK(report.std_error == 0.0);
}

TEST_CASE("a supplied true value bypasses quadrature") {
    SimulationConfig config{GammaParams(2.0, 1.0), 10,  5, IndexSpec(4, 2, 3), 8,
                            0.096571180555555556,  {}};
    const SimulationReport report = run_simulation(config);
    CHECK(report.true_value == 0.096571180555555556);
}

TEST_CASE("simulation preconditions") {
    CHECK_THROWS_AS(run_simulation(SimulationConfig{GammaParams(2.0, 1.0), 3, 10,
                                                    IndexSpec(5, 2, 4), 1, std::nullopt, {}}),
                    invalid_input);
    CHECK_THROWS_AS(run_simulation(SimulationConfig{GammaParams(2.0, 1.0), 10, 0,
                                                    IndexSpec(5, 2, 4), 1, std::nullopt, {}}),
                    invalid_input);
    SplitMix64 rng(1);
    CHECK_THROWS_AS(gamma_sample(GammaParams(1.0, 1.0), 0, rng), invalid_input);
}

TEST_CASE("MSE shrinks with the sample size") {
    auto mse_at = [](int n) {
        SimulationConfig config{GammaParams(2.0, 1.0), n, 300, IndexSpec(4, 2, 3), 5150,
                                0.096571180555555556,  {}};
        return run_simulation(config).mse;
    };
    CHECK(mse_at(30) < mse_at(5));
}
