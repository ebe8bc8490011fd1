#include <algorithm>
#include <cmath>
#include <set>

#include "../support/reference.hpp"
#include "doctest.h"
#include "hurstnn/errors.hpp"
#include "hurstnn/nn_forecast.hpp"
#include "hurstnn/synth.hpp"

using namespace hurstnn;
using namespace hurstnn::nn;

namespace {

std::vector<double> normals(std::size_t n, std::uint64_t seed) {
    synth::Rng rng(seed);
    std::vector<double> x(n);
    for (double& v : x) v = rng.normal();
    return x;
}

std::vector<double> iota_series(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i + 1);  // x_1 = 1, ...
    return x;
}

std::vector<NeighborMatch> successors(std::initializer_list<double> s) {
    std::vector<NeighborMatch> out;
    std::size_t a = 0;
    for (double v : s) out.push_back({a++, 0.0, v});
    return out;
}

}  // namespace

TEST_CASE("embed index arithmetic") {
    SUBCASE("T = 10, m = 3, tau = 1") {
        const auto x = iota_series(10);
        const auto pm = embed(x, 3, 1);
        REQUIRE(pm.size() == 8);
        CHECK(pm.anchors().front() == 2);  // n = 3 in 1-based terms
        const auto first = pm.pattern(0);
        CHECK(std::vector<double>(first.begin(), first.end()) == std::vector<double>{3, 2, 1});
    }
    SUBCASE("m = 1 gives one pattern per observation") {
        const auto x = iota_series(7);
        const auto pm = embed(x, 1, 1);
        REQUIRE(pm.size() == 7);
        for (std::size_t r = 0; r < 7; ++r) CHECK(pm.pattern(r)[0] == x[r]);
    }
    SUBCASE("T = 6, m = 2, tau = 2") {
        const auto x = iota_series(6);
        const auto pm = embed(x, 2, 2);
        REQUIRE(pm.size() == 4);
        CHECK(pm.anchors() == std::vector<std::size_t>{2, 3, 4, 5});  // anchors 3..6 in 1-based terms
        const auto v5 = pm.pattern(2);
        CHECK(std::vector<double>(v5.begin(), v5.end()) == std::vector<double>{5, 3});
    }
    CHECK_THROWS_AS(embed(iota_series(3), 3, 1), InsufficientHistory);
    CHECK_NOTHROW(embed(iota_series(4), 3, 1));
    CHECK_THROWS_AS(embed(iota_series(10), 0, 1), ParameterError);
}

TEST_CASE("squared_distance") {
    const std::vector<double> a{1, 2}, b{2, 4};
    CHECK(squared_distance(a, a) == 0.0);
    CHECK(squared_distance(a, b) == 5.0);
    CHECK_THROWS_AS(squared_distance(a, std::vector<double>{1, 2, 3}), ParameterError);
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto u = normals(6, s), v = normals(6, s + 1000);
        CHECK(squared_distance(u, v) == squared_distance(v, u));
    }
}

TEST_CASE("select_neighbors examples") {
    SUBCASE("exact duplicate ranks first with zero distance") {
        std::vector<double> x = normals(40, 5);
        // Copy the pattern ending at 39 to end at 20.
        x[20] = x[39];
        x[19] = x[38];
        x[18] = x[37];
        const auto pm = embed(x, 3, 1);
        const auto target = pattern_at(x, 39, 3, 1);
        NeighborSearch q{39, 3, 3, 0, x.size()};
        const auto m = select_neighbors(target, pm, x, q);
        CHECK(m[0].anchor_index == 20);
        CHECK(m[0].distance == 0.0);
        CHECK(m[0].successor_return == x[21]);
    }
    SUBCASE("order statistics of distinct distances") {
        // m = 1, anchors 0..4 as candidates (successor must exist), target value 0.
        const std::vector<double> x{5, -1, 3, 0.5, -2, 9};
        const auto pm = embed(x, 1, 1);
        const std::vector<double> target{0.0};
        NeighborSearch q{100, 3, 0, 0, x.size()};
        const auto m = select_neighbors(target, pm, x, q);
        REQUIRE(m.size() == 3);
        CHECK(m[0].anchor_index == 3);
        CHECK(m[1].anchor_index == 1);
        CHECK(m[2].anchor_index == 4);
        CHECK(m[0].distance == 0.25);
        CHECK(m[2].successor_return == 9);
    }
    SUBCASE("ties break by smaller anchor") {
        const std::vector<double> x{1, 1, 1, 1, 1, 1};
        const auto pm = embed(x, 2, 1);
        NeighborSearch q{5, 2, 0, 0, x.size()};
        const auto m = select_neighbors(std::vector<double>{1, 1}, pm, x, q);
        CHECK(m[0].anchor_index == 1);
        CHECK(m[1].anchor_index == 2);
    }
    SUBCASE("too few admissible candidates") {
        const auto x = normals(12, 3);
        const auto pm = embed(x, 3, 1);
        // Candidates with a successor: anchors 2..10; exclusion removes 7..10.
        NeighborSearch q{11, 5, 5, 0, x.size()};
        CHECK(select_neighbors(pattern_at(x, 11, 3, 1), pm, x, q).size() == 5);
        q.k = 6;
        try {
            select_neighbors(pattern_at(x, 11, 3, 1), pm, x, q);
            FAIL("expected throw");
        } catch (const InsufficientHistory& e) {
            CHECK(e.required() == 6);
            CHECK(e.available() == 5);
        }
    }
}

TEST_CASE("select_neighbors matches a full-sort oracle") {
    synth::Rng pick(31);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + static_cast<std::size_t>(pick.uniform() * 4);
        const std::size_t tau = 1 + static_cast<std::size_t>(pick.uniform() * 3);
        const std::size_t n = 40 + static_cast<std::size_t>(pick.uniform() * 60);
        auto x = normals(n, 100 + trial);
        // Quantize so distance ties actually occur.
        for (double& v : x) v = std::round(v * 2.0) / 2.0;
        const std::size_t target_anchor = n - 1;
        const std::size_t excl = static_cast<std::size_t>(pick.uniform() * 8);
        const auto pm = embed(x, m, tau);
        const auto target = pattern_at(x, target_anchor, m, tau);

        std::vector<NeighborMatch> all;
        for (std::size_t a = (m - 1) * tau; a + 1 < n; ++a) {
            const std::size_t gap = target_anchor - a;
            if (gap < excl) continue;
            double d = 0;
            for (std::size_t j = 0; j < m; ++j) d += std::pow(x[a - j * tau] - x[target_anchor - j * tau], 2);
            all.push_back({a, d, x[a + 1]});
        }
        std::sort(all.begin(), all.end(), [](const auto& u, const auto& v) {
            return u.distance < v.distance || (u.distance == v.distance && u.anchor_index < v.anchor_index);
        });
        all.resize(4);
        const auto got = select_neighbors(target, pm, x, {target_anchor, 4, excl, 0, n});
        REQUIRE(got.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(got[i].anchor_index == all[i].anchor_index);
            CHECK(std::abs(got[i].distance - all[i].distance) < 1e-12);
        }
    }
}

TEST_CASE("exclusion window prevents overlapping neighbours") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const std::size_t m = 2 + s % 4, tau = 1 + s % 3;
        const auto x = normals(300, s);
        const std::size_t target_anchor = 200;
        const std::size_t excl = (m - 1) * tau + 1;
        const auto pm = embed(x, m, tau);
        const auto got = select_neighbors(pattern_at(x, target_anchor, m, tau), pm, x,
                                          {target_anchor, 10, excl, 0, 260});
        std::set<std::size_t> target_idx;
        for (std::size_t j = 0; j < m; ++j) target_idx.insert(target_anchor - j * tau);
        for (const auto& g : got) {
            CHECK(g.anchor_index + 1 < 260);
            for (std::size_t j = 0; j < m; ++j) CHECK(target_idx.count(g.anchor_index - j * tau) == 0);
        }
    }
}

TEST_CASE("confirm_neighbors") {
    const auto x = normals(200, 77);
    const std::size_t m = 3, tau = 1, target = 199;
    const auto pm = embed(x, m, tau);
    const auto cands = select_neighbors(pattern_at(x, target, m, tau), pm, x, {target, 8, 3, 0, x.size()});

    SUBCASE("keep_fraction 1 keeps the whole set") {
        const auto c = confirm_neighbors(cands, x, m, tau, target, 1.0);
        CHECK(c.matches.size() == cands.size());
        std::set<std::size_t> a, b;
        for (const auto& v : cands) a.insert(v.anchor_index);
        for (const auto& v : c.matches) b.insert(v.anchor_index);
        CHECK(a == b);
        CHECK_FALSE(c.fell_back);
    }
    SUBCASE("K = 4, keep half") {
        const std::vector<NeighborMatch> four(cands.begin(), cands.begin() + 4);
        const auto c = confirm_neighbors(four, x, m, tau, target, 0.5);
        REQUIRE(c.matches.size() == 2);
        std::vector<std::pair<double, std::size_t>> brute;
        for (const auto& v : four) {
            double d = 0;
            for (std::size_t j = 0; j <= m; ++j) d += std::pow(x[target - j] - x[v.anchor_index - j], 2);
            brute.push_back({d, v.anchor_index});
        }
        std::sort(brute.begin(), brute.end());
        CHECK(c.matches[0].anchor_index == brute[0].second);
        CHECK(c.matches[1].anchor_index == brute[1].second);
        CHECK(std::abs(c.matches[0].distance - brute[0].first) < 1e-12);
    }
    SUBCASE("candidates without m+1 history are dropped, all dropped falls back") {
        std::vector<NeighborMatch> early{{2, 0.1, 0.5}, {50, 0.2, -0.5}};
        auto c = confirm_neighbors(early, x, m, tau, target, 1.0);
        CHECK(c.dropped == 1);
        REQUIRE(c.matches.size() == 1);
        CHECK(c.matches[0].anchor_index == 50);

        std::vector<NeighborMatch> none{{2, 0.1, 0.5}};
        c = confirm_neighbors(none, x, m, tau, target, 0.5);
        CHECK(c.fell_back);
        CHECK(c.matches == none);
    }
    CHECK_THROWS_AS(confirm_neighbors({}, x, m, tau, target, 0.5), ParameterError);
    CHECK_THROWS_AS(confirm_neighbors(cands, x, m, tau, target, 0.0), ParameterError);
    CHECK_THROWS_AS(confirm_neighbors(cands, x, m, tau, 2, 0.5), InsufficientHistory);
}

TEST_CASE("confirm_neighbors matches brute-force recomputation") {
    synth::Rng pick(8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 1 + static_cast<std::size_t>(pick.uniform() * 4);
        const std::size_t tau = 1 + static_cast<std::size_t>(pick.uniform() * 2);
        const auto x = normals(120, 300 + trial);
        const std::size_t target = 119;
        const auto pm = embed(x, m, tau);
        const std::size_t k = 3 + static_cast<std::size_t>(pick.uniform() * 10);
        const double keep = 0.1 + 0.9 * pick.uniform();
        const auto cands = select_neighbors(pattern_at(x, target, m, tau), pm, x, {target, k, 0, 0, x.size()});
        const auto got = confirm_neighbors(cands, x, m, tau, target, keep);

        std::vector<std::pair<double, std::size_t>> brute;
        for (const auto& c : cands) {
            if (c.anchor_index < m * tau) continue;
            double d = 0;
            for (std::size_t j = 0; j <= m; ++j) d += std::pow(x[target - j * tau] - x[c.anchor_index - j * tau], 2);
            brute.push_back({d, c.anchor_index});
        }
        std::sort(brute.begin(), brute.end());
        const std::size_t want = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(keep * k - 1e-12)));
        brute.resize(std::min(want, brute.size()));
        REQUIRE(got.matches.size() == brute.size());
        for (std::size_t i = 0; i < brute.size(); ++i) CHECK(got.matches[i].anchor_index == brute[i].second);
    }
}

TEST_CASE("forecast_direction rules") {
    auto f = forecast_direction(successors({0.01, 0.02, 0.005}));
    CHECK(f.direction == Direction::up);
    CHECK(f.up_votes == 3);
    CHECK(f.down_votes == 0);

    f = forecast_direction(successors({0.01, -0.02, -0.01}));
    CHECK(f.direction == Direction::down);
    CHECK(f.up_votes == 1);
    CHECK(f.down_votes == 2);

    f = forecast_direction(successors({0.03, -0.01}));
    CHECK(f.direction == Direction::up);
    CHECK(f.mean_successor == doctest::Approx(0.01));

    f = forecast_direction(successors({0.01, -0.03}));
    CHECK(f.direction == Direction::down);

    f = forecast_direction(successors({0.0, 0.01}));  // zero votes down, tie, mean > 0
    CHECK(f.down_votes == 1);
    CHECK(f.direction == Direction::up);

    f = forecast_direction(successors({0.0, 0.0}));
    CHECK(f.direction == Direction::down);

    f = forecast_direction(successors({0.02, -0.02}));  // tie, zero mean
    CHECK(f.direction == Direction::up);
    CHECK(f.up_votes + f.down_votes == f.confirmed_count);

    CHECK_THROWS_AS(forecast_direction({}), ParameterError);
}

TEST_CASE("hit_rate counting") {
    auto up = [] { DirectionForecast f; f.direction = Direction::up; return f; };
    auto down = [] { DirectionForecast f; f.direction = Direction::down; return f; };

    SUBCASE("perfect prediction") {
        const std::vector<DirectionForecast> f{up(), down(), up()};
        const auto r = hit_rate(f, std::vector<double>{0.1, -0.2, 0.3});
        CHECK(r.hit_rate == 1.0);
    }
    SUBCASE("zero-return days are not scored") {
        std::vector<DirectionForecast> f(10, up());
        // actual: two zeros, then 8 scored days of which 5 are up.
        const std::vector<double> a{0, 0, 1, 1, 1, 1, 1, -1, -1, -1};
        const auto r = hit_rate(f, a);
        CHECK(r.trading_days == 10);
        CHECK(r.scored_days == 8);
        CHECK(r.hits == 5);
        CHECK(*r.hit_rate == 0.625);
    }
    SUBCASE("nothing scored") {
        const auto r = hit_rate(std::vector<DirectionForecast>(3, up()), std::vector<double>(3, 0.0));
        CHECK_FALSE(r.hit_rate.has_value());
    }
    SUBCASE("independent forecasts score about one half") {
        synth::Rng rng(1234);
        std::vector<DirectionForecast> f;
        std::vector<double> a;
        for (int i = 0; i < 10000; ++i) {
            f.push_back(rng.uniform() < 0.5 ? up() : down());
            a.push_back(rng.normal());
        }
        CHECK(std::abs(*hit_rate(f, a).hit_rate - 0.5) < 0.02);
    }
    CHECK_THROWS_AS(hit_rate(std::vector<DirectionForecast>(2), std::vector<double>(3)), ParameterError);
}

TEST_CASE("predict_window examples") {
    EmbeddingConfig cfg;
    SUBCASE("single prediction day") {
        const auto x = normals(300, 9);
        const auto p = predict_window(std::span(x).first(299), std::span(x).last(1), cfg);
        CHECK(p.record.trading_days == 1);
        CHECK(p.forecasts.size() == 1);
        CHECK(p.neighbor_count == 17);  // floor(sqrt(299 - 3))
    }
    SUBCASE("periodic sign pattern is predicted perfectly") {
        // Period 5 pattern with distinct values; m = p so every pattern
        // fixes the phase and every neighbour successor repeats.
        const std::vector<double> cycle{0.3, -0.1, 0.2, -0.4, 0.15};
        std::vector<double> x;
        for (int i = 0; i < 100; ++i) x.push_back(cycle[i % 5]);
        EmbeddingConfig periodic;
        periodic.embedding_dim = 5;
        const auto p = predict_window(std::span(x).first(60), std::span(x).subspan(60), periodic);
        CHECK(*p.record.hit_rate == 1.0);
        CHECK(p.record.scored_days == 40);
    }
    SUBCASE("iid null stays near one half") {
        int inside = 0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto x = normals(1260 + 252, 4000 + seed);
            const auto p = predict_window(std::span(x).first(1260), std::span(x).last(252), cfg);
            if (*p.record.hit_rate >= 0.40 && *p.record.hit_rate <= 0.60) ++inside;
        }
        CHECK(inside >= 18);
    }
    SUBCASE("errors") {
        const auto x = normals(10, 1);
        CHECK_THROWS_AS(predict_window(std::span(x).first(5), std::span(x).last(5), cfg), InsufficientHistory);
        CHECK_THROWS_AS(predict_window(x, std::span<const double>{}, cfg), ParameterError);
        EmbeddingConfig bad = cfg;
        bad.keep_fraction = 1.5;
        CHECK_THROWS_AS(predict_window(x, x, bad), ParameterError);
    }
}

TEST_CASE("predict_window equals the from-scratch reference") {
    synth::Rng pick(99);
    for (int trial = 0; trial < 30; ++trial) {
        EmbeddingConfig cfg;
        cfg.embedding_dim = 1 + static_cast<std::size_t>(pick.uniform() * 5);
        cfg.time_delay = 1 + static_cast<std::size_t>(pick.uniform() * 2);
        cfg.neighbor_count = pick.uniform() < 0.5 ? 0 : 1 + static_cast<std::size_t>(pick.uniform() * 8);
        cfg.keep_fraction = 0.2 + 0.8 * pick.uniform();
        const std::size_t est = 60 + static_cast<std::size_t>(pick.uniform() * 80);
        const std::size_t pred = 1 + static_cast<std::size_t>(pick.uniform() * 50);
        auto x = normals(est + pred, 700 + trial);
        for (std::size_t i = 0; i < x.size(); i += 17) x[i] = 0.0;  // exercise zero returns
        const std::vector<double> e(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(est));
        const std::vector<double> p(x.begin() + static_cast<std::ptrdiff_t>(est), x.end());

        const auto got = predict_window(e, p, cfg);
        const auto want = reference::predict_window(e, p, cfg.embedding_dim, cfg.time_delay, cfg.neighbor_count,
                                                    cfg.keep_fraction, cfg.effective_exclusion());
        REQUIRE(got.forecasts.size() == want.forecasts.size());
        for (std::size_t d = 0; d < want.forecasts.size(); ++d) {
            CHECK((got.forecasts[d].direction == Direction::up) == want.forecasts[d].up);
            CHECK(got.forecasts[d].up_votes == want.forecasts[d].up_votes);
            CHECK(std::abs(got.forecasts[d].mean_successor - want.forecasts[d].mean_successor) < 1e-10);
        }
        CHECK(got.record.hits == want.hits);
        CHECK(got.record.scored_days == want.scored);
    }
}

TEST_CASE("ranking invariances: shift and positive scale") {
    synth::Rng pick(4242);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = normals(400, 50 + trial);
        const double shift = -5.0 + 10.0 * pick.uniform();
        const double scale = 0.01 + 20.0 * pick.uniform();
        std::vector<double> shifted(x), scaled(x);
        for (double& v : shifted) v += shift;
        for (double& v : scaled) v *= scale;

        const auto pm = embed(x, 4, 1), pm_shift = embed(shifted, 4, 1), pm_scale = embed(scaled, 4, 1);
        const NeighborSearch q{399, 12, 4, 0, 400};
        const auto a = select_neighbors(pattern_at(x, 399, 4, 1), pm, x, q);
        const auto b = select_neighbors(pattern_at(shifted, 399, 4, 1), pm_shift, shifted, q);
        const auto c = select_neighbors(pattern_at(scaled, 399, 4, 1), pm_scale, scaled, q);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].anchor_index == b[i].anchor_index);
            CHECK(a[i].anchor_index == c[i].anchor_index);
            CHECK(c[i].distance == doctest::Approx(a[i].distance * scale * scale).epsilon(1e-9));
        }

        const auto fa = predict_window(std::span(x).first(300), std::span(x).last(100), {});
        const auto fc = predict_window(std::span(scaled).first(300), std::span(scaled).last(100), {});
        for (std::size_t d = 0; d < 100; ++d) CHECK(fa.forecasts[d].direction == fc.forecasts[d].direction);
    }
}
