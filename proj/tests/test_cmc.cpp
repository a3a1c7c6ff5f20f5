#include "fixtures.hpp"
#include "oracle/brute_force.hpp"

#include "ricsim/grid_search.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace ricsim;
using fixtures::TwoGaussianWorld;

namespace
{
    /// Channel wrapper that drops every query to one xApp after `after` queries.
    class FlakyChannel : public Channel
    {
    public:
        FlakyChannel(Channel &inner, XAppId victim, std::size_t after) : inner_(inner), victim_(std::move(victim)), after_(after) {}

        std::optional<ChannelMessage> exchange(const XAppId &to, const ChannelMessage &q) override
        {
            if (to == victim_ && seen_++ >= after_)
                return std::nullopt;
            return inner_.exchange(to, q);
        }

    private:
        Channel &inner_;
        XAppId victim_;
        std::size_t after_;
        std::size_t seen_ = 0;
    };

    /// Replies with a stale correlation id.
    class MisroutingChannel : public Channel
    {
    public:
        explicit MisroutingChannel(Channel &inner) : inner_(inner) {}
        std::optional<ChannelMessage> exchange(const XAppId &to, const ChannelMessage &q) override
        {
            auto r = inner_.exchange(to, q);
            if (r)
                r->correlation_id += 1000;
            return r;
        }

    private:
        Channel &inner_;
    };

    /// Welfare of a two-Gaussian instance evaluated independently of the library.
    double oracle_welfare(const std::vector<fixtures::GaussianApp> &apps, oracle::Welfare w, double x)
    {
        std::vector<double> u, weights;
        for (const auto &a : apps)
        {
            u.push_back(oracle::Gaussian{a.amplitude, a.center, a.width}(x));
            weights.push_back(a.weight);
        }
        return oracle::combine(w, u, weights);
    }

    double utility_in_trace(const MitigationResult &r, std::size_t i, double x)
    {
        for (const auto &p : r.trace)
            if (p.x == x)
                return p.utilities[i];
        return -1.0;
    }
}

TEST_SUITE("grid_search")
{
    TEST_CASE("uniform grid hits both endpoints")
    {
        const auto xs = uniform_grid({-100, 100}, 2001);
        CHECK(xs.size() == 2001);
        CHECK(xs.front() == -100);
        CHECK(xs.back() == 100);
        CHECK(xs[1000] == 0.0);
    }

    TEST_CASE("finds the peak of a smooth function to refinement precision")
    {
        // coarse step 1, then 0.1, 0.01, 0.001
        const auto r = grid_search({-10, 10}, 21, 3, {}, [](double x) { return -(x - 1.2345) * (x - 1.2345); });
        CHECK(std::abs(r.x - 1.2345) <= 0.001);
        const auto coarse = grid_search({-10, 10}, 21, 0, {}, [](double x) { return -(x - 1.2345) * (x - 1.2345); });
        CHECK(coarse.x == 1.0);
    }

    TEST_CASE("ties go to the smallest x")
    {
        const auto r = grid_search({-5, 5}, 11, 2, {}, [](double) { return 1.0; });
        CHECK(r.x == -5);
    }

    TEST_CASE("injected points are evaluated")
    {
        const auto spike = 0.123;
        const std::vector<double> extra{spike, 500.0};
        const auto r = grid_search({-1, 1}, 5, 0, extra, [&](double x) { return x == spike ? 1.0 : 0.0; });
        CHECK(r.x == spike);
        CHECK(r.evaluations == 6); // out-of-range injected point skipped
    }

    TEST_CASE("each x is evaluated once")
    {
        std::map<double, int> calls;
        grid_search({0, 1}, 11, 3, std::vector<double>{0.5, 0.5}, [&](double x) {
            ++calls[x];
            return -std::abs(x - 0.5);
        });
        for (const auto &[x, n] : calls)
            CHECK(n == 1);
    }

    TEST_CASE("argument errors")
    {
        auto f = [](double) { return 0.0; };
        CHECK_THROWS_AS(grid_search({1, 0}, 11, 0, {}, f), Error);
        CHECK_THROWS_AS(grid_search({0, 1}, 2, 0, {}, f), Error);
        CHECK_THROWS_AS(grid_search({0, 1}, 11, -1, {}, f), Error);
    }
}

TEST_SUITE("mitigate")
{
    TEST_CASE("symmetric direct conflict settles at zero under NSWF")
    {
        TwoGaussianWorld w(fixtures::direct_pair(), -50);
        const auto r = w.solve(WelfareMethod::Nswf);
        const auto apps = fixtures::direct_pair();
        const auto ref = oracle::brute_force(-100, 100, oracle::million,
                                             [&](double x) { return oracle_welfare(apps, oracle::Welfare::Product, x); });
        CHECK(std::abs(ref.x) < 1e-3);
        CHECK(std::abs(r.suggested_value - 0.0) <= 0.1);
        CHECK(std::abs(r.suggested_value - ref.x) <= 1e-3);
        CHECK(r.welfare == doctest::Approx(ref.value).epsilon(1e-9));
        CHECK(r.optimal_range == Range{-100, 100});
        CHECK(r.evaluations <= r.query_budget);
    }

    TEST_CASE("EG favours the heavier xApp relative to NSWF")
    {
        TwoGaussianWorld w(fixtures::direct_pair(), -50);
        const auto n = w.solve(WelfareMethod::Nswf);
        const auto e = w.solve(WelfareMethod::Eg);
        CHECK(w.utility_of(e, "xApp2") > w.utility_of(n, "xApp2") + 1e-6);
        CHECK(e.weights == std::vector<double>{0.4, 0.6});
    }

    TEST_CASE("an unresponsive xApp aborts the mitigation")
    {
        TwoGaussianWorld w(fixtures::direct_pair(), -50);
        for (std::size_t after : {0u, 1u, 500u})
        {
            FlakyChannel flaky(w.channel, XAppId("xApp2"), after);
            MitigationController cmc(w.store);
            try
            {
                cmc.mitigate(w.report, SolverConfig{}, flaky);
                FAIL("expected UnresponsiveXApp");
            }
            catch (const Error &e)
            {
                CHECK(e.code() == Errc::UnresponsiveXApp);
            }
        }
    }

    TEST_CASE("mismatched correlation ids are a protocol violation")
    {
        TwoGaussianWorld w(fixtures::direct_pair(), -50);
        MisroutingChannel bad(w.channel);
        MitigationController cmc(w.store);
        try
        {
            cmc.mitigate(w.report, SolverConfig{}, bad);
            FAIL("expected ProtocolViolation");
        }
        catch (const Error &e)
        {
            CHECK(e.code() == Errc::ProtocolViolation);
        }
    }

    TEST_CASE("EG rejects weights that do not sum to one")
    {
        auto apps = fixtures::direct_pair();
        apps[1].weight = 0.5;
        TwoGaussianWorld w(apps, -50);
        try
        {
            w.solve(WelfareMethod::Eg);
            FAIL("expected WeightSumViolation");
        }
        catch (const Error &e)
        {
            CHECK(e.code() == Errc::WeightSumViolation);
        }
        CHECK_NOTHROW(w.solve(WelfareMethod::Nswf)); // weights are unused there
    }

    TEST_CASE("xApp ranges outside the parameter's admissible range")
    {
        TwoGaussianWorld w(fixtures::direct_pair(), -50, ConflictKind::Direct, Range{200, 300});
        try
        {
            w.solve(WelfareMethod::Nswf);
            FAIL("expected EmptyRange");
        }
        catch (const Error &e)
        {
            CHECK(e.code() == Errc::EmptyRange);
        }
    }

    TEST_CASE("solver configuration is validated")
    {
        TwoGaussianWorld w(fixtures::direct_pair(), -50);
        CHECK_THROWS_AS(w.solve(WelfareMethod::Nswf, 2), Error);
        CHECK_THROWS_AS(w.solve(WelfareMethod::Nswf, 11, -1), Error);
        CHECK_THROWS_AS(w.solve(WelfareMethod::Nswf, 11, 1, 0.0), Error);
    }

    TEST_CASE("queries stay inside each agent's range")
    {
        TwoGaussianWorld w(fixtures::direct_pair(), -50, ConflictKind::Direct, Range{-40, 60});
        w.channel.set_logging(true);
        const auto r = w.solve(WelfareMethod::Nswf, 201);
        CHECK(r.optimal_range == Range{-40, 60});
        // the opening round-trip asks at the degraded value (-50), which the
        // agent clamps; every sweep query must already lie inside the range
        std::map<XAppId, int> seen;
        for (const auto &[to, msg] : w.channel.log())
            if (const auto *q = std::get_if<QueryPayload>(&msg.payload))
            {
                if (seen[to]++ == 0)
                    CHECK(q->x == -50);
                else
                    CHECK((q->x >= -40 && q->x <= 60));
            }
        CHECK(r.baseline_utilities[0] == doctest::Approx(oracle::Gaussian{0.5, -50, 30}(-40)));
    }

    TEST_CASE("every second and later reply carries KPIs only")
    {
        TwoGaussianWorld w(fixtures::direct_pair(), -50);
        w.channel.set_logging(true);
        w.solve(WelfareMethod::Am, 11, 0);
        std::map<XAppId, int> replies;
        for (const auto &[to, msg] : w.channel.log())
        {
            const auto *rep = std::get_if<XAppReply>(&msg.payload);
            if (!rep)
                continue;
            const bool first = replies[to]++ == 0;
            CHECK(rep->param_range.has_value() == first);
            CHECK(rep->weight.has_value() == first);
            CHECK(rep->kpis.size() == 1);
        }
    }

    TEST_CASE("trace CSV lists one row per evaluated x, sorted")
    {
        TwoGaussianWorld w(fixtures::direct_pair(), -50);
        const auto r = w.solve(WelfareMethod::Nswf, 11, 1);
        std::ostringstream out;
        write_welfare_trace_csv(out, {{0, &r}});
        std::istringstream in(out.str());
        std::string line;
        std::getline(in, line);
        CHECK(line == "conflict,method,pass,x,welfare,xapp_1,utility_1,xapp_2,utility_2");
        std::size_t rows = 0;
        double prev = -1e300;
        while (std::getline(in, line))
        {
            ++rows;
            const auto c1 = line.find(',', line.find(',', line.find(',') + 1) + 1);
            const double x = std::stod(line.substr(c1 + 1));
            CHECK(x >= prev);
            prev = x;
        }
        CHECK(rows == r.trace.size());
    }
}

TEST_SUITE("solver invariants")
{
    std::vector<fixtures::GaussianApp> random_pair(std::mt19937 &rng)
    {
        std::uniform_real_distribution<double> amp(0.2, 1.0), ctr(-80, 80), wid(10, 60), wt(0.05, 0.95);
        const double w1 = wt(rng);
        return {{"a", amp(rng), ctr(rng), wid(rng), w1}, {"b", amp(rng), ctr(rng), wid(rng), 1.0 - w1}};
    }

    TEST_CASE("suggested value inside the optimal range and never worse than the status quo")
    {
        std::mt19937 rng(101);
        std::uniform_real_distribution<double> any(-100, 100);
        for (int i = 0; i < 15; ++i)
        {
            const auto apps = random_pair(rng);
            TwoGaussianWorld w(apps, any(rng));
            for (auto m : {WelfareMethod::Nswf, WelfareMethod::Eg, WelfareMethod::Am})
            {
                const auto r = w.solve(m, 201);
                CHECK(r.optimal_range.contains(r.suggested_value));
                CHECK(r.welfare >= r.baseline_welfare);
            }
        }
    }

    TEST_CASE("NSWF argmax unaffected by scaling one xApp's utility")
    {
        std::mt19937 rng(202);
        std::uniform_real_distribution<double> factor(0.1, 0.9);
        for (int i = 0; i < 10; ++i)
        {
            auto apps = random_pair(rng);
            TwoGaussianWorld base(apps, 0);
            apps[i % 2].amplitude *= factor(rng); // KPI range stays [0, 1], so utility scales too
            TwoGaussianWorld scaled(apps, 0);
            const auto a = base.solve(WelfareMethod::Nswf, 401);
            const auto b = scaled.solve(WelfareMethod::Nswf, 401);
            CHECK(a.suggested_value == b.suggested_value);
        }
    }

    TEST_CASE("EG with equal weights picks the AM argmax")
    {
        std::mt19937 rng(303);
        for (int i = 0; i < 10; ++i)
        {
            auto apps = random_pair(rng);
            apps[0].weight = apps[1].weight = 0.5;
            TwoGaussianWorld w(apps, 0);
            CHECK(w.solve(WelfareMethod::Eg, 401).suggested_value == w.solve(WelfareMethod::Am, 401).suggested_value);
        }
    }

    TEST_CASE("utility scale 10 and scale 1 give the same argmax")
    {
        std::mt19937 rng(404);
        for (int i = 0; i < 10; ++i)
        {
            TwoGaussianWorld w(random_pair(rng), 0);
            for (auto m : {WelfareMethod::Nswf, WelfareMethod::Eg, WelfareMethod::Am})
            {
                const auto one = w.solve(m, 401, 2, 1.0);
                const auto ten = w.solve(m, 401, 2, 10.0);
                CHECK(one.suggested_value == ten.suggested_value);
                CHECK(utility_in_trace(ten, 0, ten.suggested_value) ==
                      doctest::Approx(10.0 * utility_in_trace(one, 0, one.suggested_value)));
            }
        }
    }

    TEST_CASE("grid with refinement matches the brute-force argmax")
    {
        std::mt19937 rng(505);
        for (int i = 0; i < 4; ++i)
        {
            const auto apps = random_pair(rng);
            TwoGaussianWorld w(apps, 0);
            for (auto [m, o] : {std::pair{WelfareMethod::Nswf, oracle::Welfare::Product},
                                std::pair{WelfareMethod::Eg, oracle::Welfare::Weighted},
                                std::pair{WelfareMethod::Am, oracle::Welfare::Mean}})
            {
                const auto ref = oracle::brute_force(-100, 100, oracle::million,
                                                     [&](double x) { return oracle_welfare(apps, o, x); });
                const auto r = w.solve(m);
                CHECK(std::abs(r.suggested_value - ref.x) <= 1e-3);
            }
        }
    }
}
