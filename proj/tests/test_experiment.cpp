#include <cmath>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "muxnet/error.hpp"
#include "muxnet/experiment.hpp"
#include "muxnet/matrix_io.hpp"
#include "muxnet/verify.hpp"

using namespace muxnet;

namespace {

std::string csv(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    write_rows_csv(out, rows);
    return out.str();
}

const char* kButterflyT2 = R"({
  "layout": {"q": 16, "m": 3, "n": 2, "T": 2, "k": [1, 1, 4]},
  "network": {"preset": "butterfly", "coding": "random"},
  "eavesdropper": {"kind": "traditional", "mu": 1},
  "seed": 7
})";

}  // namespace

TEST_CASE("config defaults") {
    const auto c = parse_config("{}");
    CHECK(c.q == 2);
    CHECK(c.m == 1);
    CHECK(c.n == 2);
    CHECK(c.T == 1);
    CHECK(c.layout().k() == std::vector<std::size_t>{1, 1});
    CHECK(c.eavesdropper.mu == 1);
    CHECK(c.network.preset == "butterfly");
}

TEST_CASE("config errors name the field") {
    auto message = [](const std::string& text) -> std::string {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return e.what();
        }
        return "";
    };
    CHECK(message(R"({"layout": {"q": 2, "colour": 1}})").find("layout.colour") != std::string::npos);
    CHECK(message(R"({"bogus": 1})").find("bogus") != std::string::npos);
    CHECK(message(R"({"layout": {"k": [1, "x"]}})").find("layout.k[1]") != std::string::npos);
    CHECK(message("{\n  \"seed\": ,\n}").find("line 2") != std::string::npos);
    CHECK(message(R"({"eavesdropper": {"mu": 3}})").find("mu") != std::string::npos);
    CHECK(message(R"({"field": {"q": 6}})") != "");
    CHECK(message(R"({"layout": {"k": [1, 2]}})") != "");  // sum exceeds mn = 2
    CHECK(message(R"({"network": {"preset": "ring"}})").find("ring") != std::string::npos);
}

TEST_CASE("config inline network with explicit coefficients") {
    const auto c = parse_config(R"({
      "field": {"q": 3},
      "layout": {"m": 1, "n": 1, "T": 1, "k": [1]},
      "network": {"nodes": ["s", "t"], "source": "s", "sinks": ["t"],
                  "links": [{"id": "a", "tail": "s", "head": "t"}],
                  "coding": {"a": {"src:0": 2}}},
      "eavesdropper": {"kind": "traditional", "links": ["a"]}
    })");
    const auto rows = run_simulate(c);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].rank_B == 1);
    CHECK(rows[0].leakage_nats == doctest::Approx(std::log(3.0)));
    CHECK(rows[0].decoded == std::optional<bool>(true));
}

TEST_CASE("simulate is deterministic in the seed") {
    const auto c = parse_config(kButterflyT2);
    CHECK(csv(run_simulate(c)) == csv(run_simulate(c)));
    // Over q = 2 the coding draw is visible in the report for some seed.
    auto small = c;
    small.q = 2;
    const std::string base = csv(run_simulate(small));
    bool differs = false;
    for (std::uint64_t s = 8; s < 40 && !differs; ++s) {
        small.seed = s;
        differs = csv(run_simulate(small)) != base;
    }
    CHECK(differs);
}

TEST_CASE("simulate reports one row per nonempty subset and block") {
    auto c = parse_config(kButterflyT2);
    auto rows = run_simulate(c);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].subset.label() == "1");
    CHECK(rows[1].subset.label() == "2");
    CHECK(rows[2].subset.label() == "1+2");
    for (const auto& r : rows) {
        CHECK(r.within_bounds());
        CHECK(r.floor_nats <= r.leakage_nats + 1e-12);
        CHECK(r.leakage_nats <= r.ceiling_nats + 1e-12);
        CHECK(r.rank_B <= 3);
        CHECK(r.decoded == std::optional<bool>(true));
    }
    c.blocks = 2;
    rows = run_simulate(c);
    CHECK(rows.size() == 6);
    CHECK(rows[5].block == 1);
}

TEST_CASE("default butterfly leaks at most one bit through one link") {
    const auto rows = run_simulate(parse_config("{}"));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].k_subset == 1);
    CHECK(rows[0].ceiling_nats == doctest::Approx(std::log(2.0)));
    CHECK(rows[0].worst_nats.has_value());
    CHECK(*rows[0].worst_nats <= std::log(2.0) + 1e-12);
}

TEST_CASE("sweep of one value equals simulate") {
    const auto c = parse_config(kButterflyT2);
    const auto swept = run_sweep(c, "rho", {1.0});
    CHECK(csv(swept) == csv(run_simulate(c)));
}

TEST_CASE("sweep output does not depend on parallelism or value order") {
    const auto c = parse_config(kButterflyT2);
    CHECK(csv(run_sweep(c, "rho", {0.25, 0.5, 1.0}, 1)) == csv(run_sweep(c, "rho", {1.0, 0.25, 0.5}, 3)));
    CHECK_THROWS_AS(run_sweep(c, "n", {1.0}), ConfigError);
}

TEST_CASE("C1 sweep moves only the bound columns") {
    const auto c = parse_config(kButterflyT2);
    const auto rows = run_sweep(c, "C1", {7.0, 50.0});
    REQUIRE(rows.size() == 6);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& a = rows[i];
        const auto& b = rows[i + 3];
        CHECK(a.C1 == 7.0);
        CHECK(b.C1 == 50.0);
        CHECK(a.leakage_nats == b.leakage_nats);
        CHECK(a.rank_B == b.rank_B);
        CHECK(a.mean_nats == b.mean_nats);
        CHECK(a.zero_fraction == b.zero_fraction);
        CHECK(a.ub5 < b.ub5);
    }
}

TEST_CASE("m sweep on the combination network decays below ub8") {
    const auto c = parse_config(R"({
      "layout": {"q": 16, "m": 1, "n": 3, "T": 1, "kappa": [1]},
      "network": {"preset": "combination"},
      "eavesdropper": {"kind": "traditional", "mu": 1}
    })");
    const auto rows = run_sweep(c, "m", {1, 2, 3, 4, 5}, 2);
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].m == i + 1);
        CHECK(rows[i].k_subset == i + 1);
        CHECK(rows[i].leakage_nats <= rows[i].ub8 + 1e-12);
        if (i) CHECK(rows[i].ub8 < rows[i - 1].ub8);
    }
}

TEST_CASE("capacity examples") {
    auto r = run_capacity({1.0, 1.0}, 2.0, 1.0);
    CHECK(r.member);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].floor == doctest::Approx(0.0));
    CHECK(r.rows[2].subset.label() == "1+2");
    CHECK(r.rows[2].floor == doctest::Approx(1.0));

    r = run_capacity({0.5, 0.4}, 2.0, 1.0);
    CHECK(r.member);
    for (const auto& row : r.rows) CHECK(row.floor == doctest::Approx(0.0));

    CHECK_FALSE(run_capacity({3.0}, 2.0, 1.0).member);
    CHECK_THROWS_AS(run_capacity({}, 2.0, 1.0), ConfigError);
}

TEST_CASE("value lists") {
    CHECK(parse_value_list("1,2.5,4") == std::vector<double>{1, 2.5, 4});
    CHECK(parse_value_list("1..4") == std::vector<double>{1, 2, 3, 4});
    CHECK(parse_value_list("0.5,2..3") == std::vector<double>{0.5, 2, 3});
    CHECK_THROWS_AS(parse_value_list(""), ConfigError);
    CHECK_THROWS_AS(parse_value_list("1,x"), ConfigError);
    CHECK_THROWS_AS(parse_value_list("3..1"), ConfigError);
    CHECK_THROWS_AS(parse_value_list("1.5..3"), ConfigError);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(std::log(2.0)) == "0.69314718056");
}

TEST_CASE("json report parses and matches csv row count") {
    const auto rows = run_simulate(parse_config(kButterflyT2));
    std::ostringstream out;
    write_rows_json(out, rows);
    const auto j = nlohmann::json::parse(out.str());
    REQUIRE(j.size() == rows.size());
    CHECK(j[2]["subset"] == "1+2");
    CHECK(j[2]["k_I"] == 2);
}

TEST_CASE("verify passes by default and fails with a tampered tolerance") {
    auto c = parse_config("{}");
    c.verify.joints = 50;
    for (const auto& s : summarize(run_verify(c))) {
        INFO(s.check);
        CHECK(s.failures == 0);
    }
    c.verify.tolerance = -5.0;
    std::size_t failures = 0;
    for (const auto& s : summarize(run_verify(c))) failures += s.failures;
    CHECK(failures > 0);
}

TEST_CASE("matrix json round trip") {
    Rng rng(4);
    for (std::uint32_t q : {2u, 9u, 256u, 65521u}) {
        const Field f = Field::of_size(q);
        const Matrix m = sample_full_rank(2, 3, f, rng);
        const std::string text = matrix_to_json(m);
        CHECK(matrix_from_json(text) == m);
    }
    CHECK(matrix_to_json(Matrix::from_rows(Field::of_size(3), {{1, 2}})) ==
          R"({"cols":2,"entries":[1,2],"q":3,"rows":1})");
    CHECK_THROWS_AS(matrix_from_json(R"({"rows":1,"cols":2,"q":3,"entries":[1]})"), ConfigError);
    CHECK_THROWS_AS(matrix_from_json(R"({"rows":1,"cols":1,"q":3,"entries":[3]})"), ConfigError);
    CHECK_THROWS_AS(matrix_from_json(R"({"rows":1,"cols":1,"q":6,"entries":[0]})"), ConfigError);
    CHECK_THROWS_AS(matrix_from_json("[1,"), ConfigError);
}
