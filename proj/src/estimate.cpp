#include "anderson/estimate.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

namespace anderson {

Moments Moments::merge(const Moments& a, const Moments& b) noexcept {
    if (a.count == 0) return b;
    if (b.count == 0) return a;
    Moments out;
    out.count = a.count + b.count;
    const double na = static_cast<double>(a.count);
    const double nb = static_cast<double>(b.count);
    const double n = static_cast<double>(out.count);
    const double delta = b.mean - a.mean;
    out.mean = a.mean + delta * (nb / n);
    out.m2 = a.m2 + b.m2 + delta * delta * (na * nb / n);
    return out;
}

Moments reduce_pairwise(const std::vector<Moments>& chunks) {
    if (chunks.empty()) return {};
    std::vector<Moments> level = chunks;
    while (level.size() > 1) {
        std::vector<Moments> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < level.size(); i += 2)
            next.push_back(Moments::merge(level[i], level[i + 1]));
        if (level.size() % 2 == 1) next.push_back(level.back());
        level = std::move(next);
    }
    return level.front();
}

int default_threads() { return std::max(1, omp_get_num_procs()); }

bool MCEstimate::has_flag(const std::string& f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

MCEstimate make_estimate(std::string target, const Moments& m, std::uint64_t seed,
                         nlohmann::json params) {
    MCEstimate e;
    e.target = std::move(target);
    e.mean = m.mean;
    e.n_samples = m.count;
    e.std_error = m.count > 0 ? std::sqrt(m.variance() / static_cast<double>(m.count)) : 0.0;
    e.seed = seed;
    e.params = std::move(params);
    // Weights that are constant up to rounding carry no sampling information.
    if (e.std_error <= 1e-12 * std::abs(e.mean)) e.flags.emplace_back("zero-variance");
    return e;
}

MCEstimate exact_estimate(std::string target, double value, std::uint64_t seed,
                          nlohmann::json params) {
    MCEstimate e;
    e.target = std::move(target);
    e.mean = value;
    e.std_error = 0.0;
    e.n_samples = 1;
    e.seed = seed;
    e.params = std::move(params);
    e.flags.emplace_back("exact");
    return e;
}

nlohmann::json to_json(const MCEstimate& e) {
    nlohmann::json j;
    j["target"] = e.target;
    j["mean"] = e.mean;
    j["std_error"] = e.std_error;
    j["n_samples"] = e.n_samples;
    j["seed"] = e.seed;
    j["params"] = e.params;
    j["flags"] = e.flags;
    return j;
}

MCEstimate estimate_from_json(const nlohmann::json& j) {
    MCEstimate e;
    e.target = j.at("target").get<std::string>();
    e.mean = j.at("mean").get<double>();
    e.std_error = j.at("std_error").get<double>();
    e.n_samples = j.at("n_samples").get<std::uint64_t>();
    e.seed = j.at("seed").get<std::uint64_t>();
    e.params = j.value("params", nlohmann::json::object());
    e.flags = j.value("flags", std::vector<std::string>{});
    return e;
}

}  // namespace anderson
