/**
 * @file estimate.hpp
 * @brief Monte-Carlo estimates and the deterministic chunked sampling driver.
 *
 * Samples are drawn in fixed-size chunks; chunk k uses the Philox stream
 * (key, k) and produces its own Welford moments. Chunk moments are merged by
 * a pairwise tree in chunk order, so the result depends only on
 * (key, n_samples) and never on the number of workers.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "anderson/rng.hpp"

namespace anderson {

/// Running count/mean/M2 (Welford), mergeable with Chan's update.
struct Moments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) noexcept {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    static Moments merge(const Moments& a, const Moments& b) noexcept;

    double variance() const noexcept {
        return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
    }
};

struct MCEstimate {
    std::string target;
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    nlohmann::json params = nlohmann::json::object();
    /// Diagnostics such as "zero-variance" or "low-confidence".
    std::vector<std::string> flags;

    bool has_flag(const std::string& f) const;
};

MCEstimate make_estimate(std::string target, const Moments& m, std::uint64_t seed,
                         nlohmann::json params = nlohmann::json::object());

/// Exact (non-random) value packaged as an estimate with zero error.
MCEstimate exact_estimate(std::string target, double value, std::uint64_t seed,
                          nlohmann::json params = nlohmann::json::object());

nlohmann::json to_json(const MCEstimate& e);
MCEstimate estimate_from_json(const nlohmann::json& j);

inline constexpr std::uint64_t kChunkSize = 8192;

/// Worker count used when a caller passes threads <= 0.
int default_threads();

/// Pairwise (tree) reduction of chunk moments in index order.
Moments reduce_pairwise(const std::vector<Moments>& chunks);

/// Draw n_samples values of sample(rng) over Philox streams (key, chunk).
template <class SampleFn>
Moments sample_chunked(std::uint64_t n_samples, std::uint64_t key, int threads, SampleFn&& sample) {
    const std::uint64_t n_chunks = (n_samples + kChunkSize - 1) / kChunkSize;
    std::vector<Moments> chunks(n_chunks);
    const int workers = threads > 0 ? threads : default_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks); ++c) {
        const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunkSize;
        const std::uint64_t count = std::min(kChunkSize, n_samples - begin);
        rng::Philox4x32 gen(key, static_cast<std::uint64_t>(c));
        Moments m;
        for (std::uint64_t i = 0; i < count; ++i) m.add(sample(gen));
        chunks[static_cast<std::size_t>(c)] = m;
    }
    return reduce_pairwise(chunks);
}

}  // namespace anderson
