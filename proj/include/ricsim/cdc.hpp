#pragma once

#include "ricsim/json_io.hpp"
#include "ricsim/pmon.hpp"
#include "ricsim/sdl_store.hpp"

#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

namespace ricsim
{
    /// Intra-component conflict kinds produced by the detector. Vertical and
    /// inter-component conflicts are part of the taxonomy but never detected.
    enum class ConflictKind
    {
        Direct,
        Indirect,
        Implicit,
    };

    std::string_view to_string(ConflictKind k) noexcept;
    ConflictKind conflict_kind_from_string(std::string_view s);

    struct ConflictReport
    {
        ConflictKind kind = ConflictKind::Implicit;
        ParameterId parameter;
        /// The conflicting set Z, sorted, at least two members.
        std::vector<XAppId> involved_xapps;
        StateSnapshot good_state;
        StateSnapshot bad_state;
        bool good_state_fallback = false;
        Trigger trigger;
        /// Change held responsible for the degradation.
        ParameterChangeRecord cause;
        std::optional<ParameterGroup> group;
        /// Latest non-CMC request each member of Z made for `parameter`.
        std::map<XAppId, double> demanded_values;
    };

    ojson to_json(const ConflictReport &r);

    /// Which ICPs each xApp controls. Used to decide whether a degraded KPI's
    /// owner shares a parameter group with the changed parameter.
    using ParameterOwnership = std::map<XAppId, std::set<ParameterId>>;

    class ConflictDetector
    {
    public:
        ConflictDetector(const SdlStore &store, ParameterOwnership ownership);

        /// Cascade on the change blamed for the trigger (the degradation's
        /// suspect, else the latest change): group affiliation with another
        /// xApp's parameters -> Indirect; otherwise any other recent change of
        /// the same parameter -> Direct; otherwise Implicit.
        ///
        /// Throws EmptyHistory when nothing has been changed yet and
        /// NoCounterparty when the conflicting set would have fewer than two
        /// members.
        ConflictReport classify_conflict(const Trigger &trigger) const;

    private:
        const SdlStore &store_;
        ParameterOwnership ownership_;
    };
}
