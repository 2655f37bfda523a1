#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "mont/acceptance.hpp"

using namespace mont;

/// Runs the full criteria harness once and turns each row into an
/// assertion, printing the row first so a red run shows the measured
/// values, not just the failed CHECK.
TEST_CASE("all acceptance criteria pass") {
    auto results = acceptance::run_all();
    REQUIRE(results.size() == 11);
    for (const auto& r : results) {
        std::printf("[%2d] %s %-26s %s\n", r.id, r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.detail.c_str());
        std::fflush(stdout);
    }
    for (const auto& r : results) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.pass);
    }
    CHECK(acceptance::all_passed(results));
}
