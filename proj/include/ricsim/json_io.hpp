#pragma once

#include "ricsim/types.hpp"

#include <json.hpp>

namespace ricsim
{
    using ojson = nlohmann::ordered_json;

    ojson to_json(const ParameterChangeRecord &rec);
    ParameterChangeRecord change_from_json(const ojson &j);

    ojson to_json(const ParameterGroup &g);
    ParameterGroup group_from_json(const ojson &j);

    ojson to_json(const QoSThreshold &t);
    QoSThreshold threshold_from_json(const ojson &j);

    ojson to_json(const DegradationEvent &ev);
    DegradationEvent degradation_from_json(const ojson &j);

    ojson to_json(const Range &r);
    Range range_from_json(const ojson &j);
}
