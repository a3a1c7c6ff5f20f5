#include "ricsim/sdl_store.hpp"

#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

using namespace ricsim;

namespace
{
    const ParameterId p1("p1");
    const ParameterId p2("p2");
    const ParameterId p7("p7");
    const ParameterId p9("p9");
    const KpiId o2("o2");
    const XAppId x1("xApp1");
    const XAppId x2("xApp2");

    SdlStore basic_store()
    {
        SdlStore s;
        s.register_parameter(p1, {-100, 100}, 0);
        s.register_parameter(p2, {-100, 100}, 0);
        s.register_parameter(p7, {-1, 1}, -0.5);
        s.register_parameter(p9, {0, 10}, 5);
        s.register_kpi(o2, {0, 1});
        s.register_threshold({o2, 0.4, Direction::AtLeast});
        return s;
    }

    ParameterChangeRecord change(const ParameterId &p, const XAppId &x, double from, double to, Tick t)
    {
        return {p, x, from, to, t};
    }

    std::string log_of(const SdlStore &s)
    {
        std::ostringstream out;
        s.write_event_log(out);
        return out.str();
    }
}

TEST_SUITE("record_change")
{
    TEST_CASE("ungrouped parameter adds one RCP row and no RCPG row")
    {
        auto s = basic_store();
        s.record_change(change(p1, x1, 0, 50, 5));
        CHECK(s.rcp().size() == 1);
        CHECK(s.rcpg().empty());
    }

    TEST_CASE("grouped parameter adds a row to both RCP and RCPG")
    {
        auto s = basic_store();
        s.register_group({"handover-boundary", {p1, p7}, "cell-edge"});
        s.record_change(change(p1, x2, 50, 0, 6));
        REQUIRE(s.rcp().size() == 1);
        REQUIRE(s.rcpg().size() == 1);
        const auto row = s.rcpg().front();
        CHECK(row.group_id == "handover-boundary");
        CHECK(row.change == s.rcp().front());
        CHECK(row.co_members == std::vector<ParameterId>{p7});
    }

    TEST_CASE("value outside the parameter range is rejected")
    {
        auto s = basic_store();
        try
        {
            s.record_change(change(p1, x1, 0, 999, 7));
            FAIL("expected OutOfRange");
        }
        catch (const Error &e)
        {
            CHECK(e.code() == Errc::OutOfRange);
        }
        CHECK(s.rcp().empty());
    }

    TEST_CASE("timestamps must strictly increase per parameter")
    {
        auto s = basic_store();
        s.record_change(change(p1, x1, 0, 10, 5));
        CHECK_THROWS_AS(s.record_change(change(p1, x2, 10, 20, 5)), Error);
        CHECK_THROWS_AS(s.record_change(change(p1, x2, 10, 20, 4)), Error);
        // another parameter keeps its own clock
        CHECK_NOTHROW(s.record_change(change(p2, x2, 0, 20, 5)));
    }

    TEST_CASE("unknown parameter is rejected")
    {
        auto s = basic_store();
        try
        {
            s.record_change(change(ParameterId("nope"), x1, 0, 1, 1));
            FAIL("expected UnknownParameter");
        }
        catch (const Error &e)
        {
            CHECK(e.code() == Errc::UnknownParameter);
        }
    }
}

TEST_SUITE("latest_change")
{
    TEST_CASE("returns the newest record")
    {
        auto s = basic_store();
        s.record_change(change(p1, x1, 0, 1, 5));
        s.record_change(change(p2, x2, 0, 2, 9));
        const auto r = s.latest_change();
        CHECK(r.param == p2);
        CHECK(r.timestamp == 9);
    }

    TEST_CASE("empty history")
    {
        auto s = basic_store();
        try
        {
            s.latest_change();
            FAIL("expected EmptyHistory");
        }
        catch (const Error &e)
        {
            CHECK(e.code() == Errc::EmptyHistory);
        }
    }

    TEST_CASE("timestamp tie goes to the later insertion")
    {
        auto s = basic_store();
        s.record_change(change(p1, x1, 0, 1, 9));
        s.record_change(change(p2, x2, 0, 2, 9));
        CHECK(s.latest_change().param == p2);
    }

    TEST_CASE("latest_change_at ignores the future")
    {
        auto s = basic_store();
        s.record_change(change(p1, x1, 0, 1, 3));
        s.record_change(change(p2, x2, 0, 2, 9));
        CHECK(s.latest_change_at(5)->param == p1);
        CHECK_FALSE(s.latest_change_at(2).has_value());
    }
}

TEST_SUITE("changes_in_window")
{
    TEST_CASE("filters to the window, newest first")
    {
        auto s = basic_store();
        s.record_change(change(p1, x1, 0, 1, 1));
        s.record_change(change(p1, x1, 1, 5, 5));
        s.record_change(change(p1, x2, 5, 9, 9));
        const auto rows = s.changes_in_window(p1, 5, 9);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].timestamp == 9);
        CHECK(rows[1].timestamp == 5);
    }

    TEST_CASE("unknown parameter yields an empty list")
    {
        auto s = basic_store();
        CHECK(s.changes_in_window(ParameterId("ghost"), 5, 9).empty());
    }

    TEST_CASE("a wide window returns the whole history")
    {
        auto s = basic_store();
        for (Tick t : {1, 5, 9})
            s.record_change(change(p1, x1, 0, static_cast<double>(t), t));
        const auto rows = s.changes_in_window(p1, 1000, 9);
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].timestamp == 9);
        CHECK(rows[2].timestamp == 1);
    }

    TEST_CASE("non-positive window is an argument error")
    {
        auto s = basic_store();
        CHECK_THROWS_AS(s.changes_in_window(p1, 0, 9), Error);
    }
}

TEST_SUITE("group_of")
{
    TEST_CASE("single group")
    {
        auto s = basic_store();
        s.register_group({"handover-boundary", {p1, p7}, "cell-edge"});
        const auto g = s.group_of(p1);
        REQUIRE(g.size() == 1);
        CHECK(g[0].group_id == "handover-boundary");
    }

    TEST_CASE("ungrouped parameter")
    {
        auto s = basic_store();
        s.register_group({"handover-boundary", {p1, p7}, "cell-edge"});
        CHECK(s.group_of(p9).empty());
    }

    TEST_CASE("two groups come back in registration order")
    {
        auto s = basic_store();
        s.register_group({"zeta", {p1, p7}, "a"});
        s.register_group({"alpha", {p1, p2}, "b"});
        const auto g = s.group_of(p1);
        REQUIRE(g.size() == 2);
        CHECK(g[0].group_id == "zeta");
        CHECK(g[1].group_id == "alpha");
    }

    TEST_CASE("a change to a parameter in two groups writes two RCPG rows")
    {
        auto s = basic_store();
        s.register_group({"zeta", {p1, p7}, "a"});
        s.register_group({"alpha", {p1, p2}, "b"});
        s.record_change(change(p1, x1, 0, 3, 1));
        CHECK(s.rcpg().size() == 2);
    }
}

TEST_SUITE("record_degradation")
{
    TEST_CASE("suspect change is the latest change at that tick")
    {
        auto s = basic_store();
        s.record_change(change(p1, x1, 0, 50, 5));
        s.record_change(change(p1, x2, 50, -50, 10));
        s.record_change(change(p1, x1, -50, 0, 20));
        const auto ev = s.record_degradation({o2, 0.1, 12, std::nullopt});
        REQUIRE(ev.suspect_change.has_value());
        CHECK(ev.suspect_change->timestamp == 10);
        CHECK(ev.suspect_change->xapp == x2);
        CHECK(s.kdo().size() == 1);
    }

    TEST_CASE("a value that satisfies the threshold is not a degradation")
    {
        auto s = basic_store();
        try
        {
            s.record_degradation({o2, 0.4, 1, std::nullopt});
            FAIL("expected NotADegradation");
        }
        catch (const Error &e)
        {
            CHECK(e.code() == Errc::NotADegradation);
        }
        CHECK(s.kdo().empty());
    }
}

TEST_SUITE("bracketing_states")
{
    TEST_CASE("good state before, bad state at the degradation")
    {
        auto s = basic_store();
        s.record_change(change(p1, x1, 0, 50, 5));
        s.record_kpi_observation(o2, 0.9, 5);
        s.record_change(change(p1, x2, 50, 0, 6));
        s.record_kpi_observation(o2, 0.1, 6);
        const auto b = s.bracketing_states(p1, o2, 6);
        CHECK_FALSE(b.fallback);
        CHECK(b.good.param_value == 50);
        CHECK(b.good.kpi_value == 0.9);
        CHECK(b.good.timestamp == 5);
        CHECK(b.bad.param_value == 0);
        CHECK(b.bad.kpi_value == 0.1);
        CHECK(b.bad.timestamp == 6);
    }

    TEST_CASE("degradation at the first tick falls back to the registered default")
    {
        auto s = basic_store();
        s.record_change(change(p9, x1, 5, 9, 1));
        s.record_kpi_observation(o2, 0.1, 1);
        const auto b = s.bracketing_states(p9, o2, 1);
        CHECK(b.fallback);
        CHECK(b.good.param_value == 5);
        CHECK_FALSE(b.good.kpi_value.has_value());
        CHECK(b.bad.param_value == 9);
    }

    TEST_CASE("most recent good tick before the queried degradation")
    {
        auto s = basic_store();
        s.record_change(change(p1, x1, 0, 50, 1));
        s.record_kpi_observation(o2, 0.8, 1);
        s.record_change(change(p1, x2, 50, 0, 2));
        s.record_kpi_observation(o2, 0.1, 2); // first degradation
        s.record_change(change(p1, x1, 0, 40, 3));
        s.record_kpi_observation(o2, 0.7, 3);
        s.record_change(change(p1, x2, 40, -10, 4));
        s.record_kpi_observation(o2, 0.05, 4); // second degradation
        const auto b = s.bracketing_states(p1, o2, 4);
        CHECK(b.good.timestamp == 3);
        CHECK(b.good.param_value == 40);
        CHECK(b.bad.param_value == -10);
        const auto first = s.bracketing_states(p1, o2, 2);
        CHECK(first.good.timestamp == 1);
        CHECK(first.good.param_value == 50);
    }

    TEST_CASE("fallback prefers the second-last change over the default")
    {
        auto s = basic_store();
        s.record_change(change(p1, x1, 0, 30, 1));
        s.record_change(change(p1, x2, 30, -30, 2));
        s.record_kpi_observation(o2, 0.1, 2);
        const auto b = s.bracketing_states(p1, o2, 2);
        CHECK(b.fallback);
        CHECK(b.good.param_value == 30);
        CHECK(b.good.timestamp == 1);
    }

    TEST_CASE("no change before the tick")
    {
        auto s = basic_store();
        CHECK_THROWS_AS(s.bracketing_states(p1, o2, 3), Error);
    }
}

TEST_SUITE("persistence")
{
    // Random but valid mutation sequence over a small registry.
    SdlStore random_store(std::uint32_t seed)
    {
        std::mt19937 rng(seed);
        auto s = basic_store();
        s.register_group({"g", {p1, p7}, "edge"});
        s.register_group({"h", {p1, p2}, "core"});
        const std::vector<ParameterId> params{p1, p2, p7};
        const std::vector<XAppId> apps{x1, x2, XAppId("xApp3")};
        std::map<ParameterId, Tick> last;
        std::uniform_int_distribution<int> pick(0, 2);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Tick obs_tick = 0;
        for (int i = 0; i < 60; ++i)
        {
            const auto &p = params[static_cast<std::size_t>(pick(rng))];
            const auto range = s.parameter_range(p);
            const Tick t = last[p] + 1 + pick(rng);
            last[p] = t;
            const double v = range.min + unit(rng) * range.span();
            s.record_change({p, apps[static_cast<std::size_t>(pick(rng))], s.current_value(p), v, t});
            const double k = unit(rng);
            obs_tick = std::max(obs_tick + 1, t);
            s.record_kpi_observation(o2, k, obs_tick);
            if (k < 0.4)
                s.record_degradation({o2, k, obs_tick, std::nullopt});
        }
        return s;
    }

    TEST_CASE("replaying the event log reproduces the store")
    {
        for (std::uint32_t seed = 1; seed <= 10; ++seed)
        {
            const auto original = random_store(seed);
            std::istringstream in(log_of(original));
            const auto replayed = SdlStore::replay(in);
            CHECK(log_of(replayed) == log_of(original));
            CHECK(replayed.rcp() == original.rcp());
            CHECK(replayed.rcpg().size() == original.rcpg().size());
            CHECK(replayed.kdo().size() == original.kdo().size());
            CHECK(replayed.pgd() == original.pgd());
        }
    }

    TEST_CASE("every RCPG row corresponds to an RCP row of a group member")
    {
        for (std::uint32_t seed = 1; seed <= 10; ++seed)
        {
            const auto s = random_store(seed);
            const auto rcp = s.rcp();
            std::size_t grouped = 0;
            for (const auto &r : rcp)
                grouped += s.group_of(r.param).size();
            CHECK(s.rcpg().size() == grouped);
            for (const auto &row : s.rcpg())
            {
                CHECK(std::find(rcp.begin(), rcp.end(), row.change) != rcp.end());
                const auto groups = s.pgd();
                const auto g = std::find_if(groups.begin(), groups.end(),
                                            [&](const ParameterGroup &x) { return x.group_id == row.group_id; });
                REQUIRE(g != groups.end());
                CHECK(g->contains(row.change.param));
            }
        }
    }

    TEST_CASE("event log starts every line with the record type")
    {
        const auto s = random_store(3);
        std::istringstream in(log_of(s));
        std::string line;
        int n = 0;
        while (std::getline(in, line))
        {
            CHECK(line.rfind("{\"type\":", 0) == 0);
            ++n;
        }
        CHECK(n > 60);
    }

    TEST_CASE("replay rejects an unknown record type")
    {
        std::istringstream in("{\"type\":\"bogus\"}\n");
        CHECK_THROWS_AS(SdlStore::replay(in), Error);
    }

    TEST_CASE("CSV export writes every table with a header")
    {
        const auto s = random_store(5);
        const auto dir = std::filesystem::temp_directory_path() / "ricsim_store_export";
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
        s.export_csv(dir);
        for (const char *name : {"rcp.csv", "pgd.csv", "rcpg.csv", "pkr.csv", "dckd.csv", "kdo.csv"})
        {
            std::ifstream in(dir / name);
            REQUIRE(in.good());
            std::string header;
            std::getline(in, header);
            CHECK_FALSE(header.empty());
        }
        std::ifstream rcp(dir / "rcp.csv");
        std::string line;
        std::size_t rows = 0;
        while (std::getline(rcp, line))
            ++rows;
        CHECK(rows == s.rcp().size() + 1);
        std::filesystem::remove_all(dir);
    }
}

TEST_CASE("concurrent readers alongside one writer")
{
    auto s = basic_store();
    std::atomic<bool> done{false};
    std::atomic<long> reads{0};
    std::vector<std::thread> readers;
    for (int i = 0; i < 4; ++i)
        readers.emplace_back([&] {
            while (!done.load())
            {
                const auto rows = s.changes_in_window(p1, 1000000, 1000000);
                for (std::size_t k = 1; k < rows.size(); ++k)
                    if (rows[k - 1].timestamp <= rows[k].timestamp)
                        throw std::logic_error("window not newest-first");
                ++reads;
            }
        });
    for (Tick t = 1; t <= 2000; ++t)
        s.record_change(change(p1, x1, 0, static_cast<double>(t % 100), t));
    done = true;
    for (auto &r : readers)
        r.join();
    CHECK(s.rcp().size() == 2000);
    CHECK(reads.load() > 0);
}
