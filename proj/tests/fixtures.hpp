#pragma once

#include "ricsim/cdc.hpp"
#include "ricsim/cmc.hpp"
#include "ricsim/sdl_store.hpp"
#include "ricsim/xapp_agent.hpp"

#include <memory>
#include <string>
#include <vector>

namespace fixtures
{
    using namespace ricsim;

    struct GaussianApp
    {
        std::string id;
        double amplitude;
        double center;
        double width;
        double weight;
    };

    /// Minimal world for driving the mitigation controller directly: one
    /// parameter "p1" over [-100, 100], one KPI "k_<id>" per app with range
    /// [0, 1], agents attached to a local channel, and a conflict report whose
    /// bad state is `bad_value`.
    struct TwoGaussianWorld
    {
        SdlStore store;
        std::vector<std::unique_ptr<XAppAgent>> agents;
        LocalChannel channel;
        ConflictReport report;

        TwoGaussianWorld(const std::vector<GaussianApp> &apps, double bad_value = 0.0,
                         ConflictKind kind = ConflictKind::Direct, Range app_range = {-100, 100})
        {
            const ParameterId p1("p1");
            store.register_parameter(p1, {-100, 100}, 0.0);
            KpiModel model;
            for (const auto &a : apps)
            {
                const KpiId k("k_" + a.id);
                store.register_kpi(k, {0, 1});
                model.add(k, UtilityFunctionSpec{a.amplitude, a.center, a.width, p1, std::nullopt, std::nullopt});
            }
            const std::string tag(to_string(kind));
            for (const auto &a : apps)
            {
                const KpiId k("k_" + a.id);
                agents.push_back(std::make_unique<XAppAgent>(XAppId(a.id), std::vector<KpiId>{k}, model.closure({k}),
                                                             app_range, std::map<std::string, double>{{tag, a.weight}}));
                agents.back()->observe({{p1, bad_value}});
                channel.attach(*agents.back());
                report.involved_xapps.push_back(XAppId(a.id));
            }
            std::sort(report.involved_xapps.begin(), report.involved_xapps.end());
            report.kind = kind;
            report.parameter = p1;
            report.bad_state.param_value = bad_value;
            report.good_state.param_value = bad_value;
        }

        MitigationResult solve(WelfareMethod m, int samples = 2001, int passes = 2, double scale = 1.0)
        {
            MitigationController cmc(store);
            return cmc.mitigate(report, SolverConfig{m, samples, scale, passes}, channel);
        }

        double utility_of(const MitigationResult &r, const std::string &xapp) const
        {
            for (std::size_t i = 0; i < r.xapps.size(); ++i)
                if (r.xapps[i].str() == xapp)
                    return r.utilities[i];
            return -1.0;
        }
    };

    /// Canonical direct-conflict pair: o1 (0.5, -50) for xApp1 with weight
    /// 0.4 and o2 (1.0, +50) for xApp2 with weight 0.6, widths 30.
    inline std::vector<GaussianApp> direct_pair()
    {
        return {{"xApp1", 0.5, -50, 30, 0.4}, {"xApp2", 1.0, 50, 30, 0.6}};
    }
}
