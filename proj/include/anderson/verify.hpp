/**
 * @file verify.hpp
 * @brief The invariant suite run by `anderson verify`.
 *
 * Every check is deterministic given (seed, samples, threads): random test
 * points come from the seeded Philox streams and Monte-Carlo checks use the
 * chunked sampler, so two runs with the same inputs produce identical JSON.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace anderson::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;      ///< the measured discrepancy
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 20240601;
    std::uint64_t samples = 200000;
    int threads = 0;
    /// Test hook: "exponent" swaps the (6 - 2 alpha) exponent for (6 - 3 alpha)
    /// in the exponent-identity check, which must then fail.
    std::string fault;
};

std::vector<CheckResult> run_suite(const VerifyOptions& opts);

nlohmann::json to_json(const std::vector<CheckResult>& checks, const VerifyOptions& opts);
bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace anderson::verify
