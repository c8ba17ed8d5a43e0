#include <cmath>
#include <vector>

#include <doctest.h>

#include "anderson/estimate.hpp"
#include "anderson/json_io.hpp"
#include "anderson/rng.hpp"

using namespace anderson;

TEST_CASE("philox4x32-10 known answers") {
    using P = rng::Philox4x32;
    CHECK(P::generate({0u, 0u, 0u, 0u}, {0u, 0u}) ==
          P::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(P::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                      {0xffffffffu, 0xffffffffu}) ==
          P::Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(P::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                      {0xa4093822u, 0x299f31d0u}) ==
          P::Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("uniforms stay inside the open unit interval") {
    rng::Philox4x32 g(1, 2);
    double lo = 1.0, hi = 0.0, sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = g.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        sum += u;
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("sub-seeds depend on the label") {
    CHECK(rng::derive_seed(1, "a") != rng::derive_seed(1, "b"));
    CHECK(rng::derive_seed(1, "a") != rng::derive_seed(2, "a"));
    CHECK(rng::derive_seed(5, "x") == rng::derive_seed(5, "x"));
}

TEST_CASE("merged moments equal a single pass") {
    std::vector<double> xs;
    rng::Philox4x32 g(9, 0);
    for (int i = 0; i < 1000; ++i) xs.push_back(1e6 + g.uniform());
    Moments all, left, right;
    for (int i = 0; i < 1000; ++i) {
        all.add(xs[i]);
        (i < 377 ? left : right).add(xs[i]);
    }
    const Moments merged = Moments::merge(left, right);
    CHECK(merged.count == all.count);
    CHECK(merged.mean == doctest::Approx(all.mean).epsilon(1e-15));
    CHECK(merged.variance() == doctest::Approx(all.variance()).epsilon(1e-9));
    CHECK(all.variance() == doctest::Approx(1.0 / 12.0).epsilon(0.1));
}

TEST_CASE("chunked sampling ignores the worker count") {
    auto f = [](rng::Philox4x32& g) { return std::log(g.uniform()); };
    const Moments a = sample_chunked(50000, 77, 1, f);
    const Moments b = sample_chunked(50000, 77, 3, f);
    CHECK(a.mean == b.mean);
    CHECK(a.m2 == b.m2);
    CHECK(std::abs(a.mean + 1.0) < 0.02);
}

TEST_CASE("estimate records") {
    Moments m;
    for (double x : {1.0, 2.0, 3.0, 4.0}) m.add(x);
    const MCEstimate e = make_estimate("demo", m, 42);
    CHECK(e.mean == 2.5);
    CHECK(e.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    const auto j = to_json(e);
    for (const char* key : {"target", "mean", "std_error", "n_samples", "seed", "params"})
        CHECK(j.contains(key));
    const MCEstimate back = estimate_from_json(j);
    CHECK(back.mean == e.mean);
    CHECK(back.std_error == e.std_error);
    CHECK(back.seed == 42);

    Moments flat;
    for (int i = 0; i < 10; ++i) flat.add(0.5);
    CHECK(make_estimate("flat", flat, 1).has_flag("zero-variance"));
}

TEST_CASE("number formatting") {
    CHECK(json_io::format_double(0.1) == "0.10000000000000001");
    CHECK(json_io::format_double(1.0) == "1");
    CHECK(json_io::format_double(INFINITY) == "inf");
    CHECK(json_io::parse_double("2.5e-3") == 0.0025);
    CHECK(json_io::csv_field("a,b") == "\"a,b\"");
    CHECK(json_io::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(json_io::csv_row({"x", "1.5"}) == "x,1.5\r\n");
    CHECK(json_io::dump(nlohmann::json{{"v", 0.1}}, -1) == "{\"v\":0.10000000000000001}");
}
