#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ricsim
{
    enum class Errc
    {
        OutOfRange,
        StaleTimestamp,
        EmptyHistory,
        UnknownParameter,
        UnknownKpi,
        UnknownXApp,
        NotADegradation,
        NoCounterparty,
        TooFewXApps,
        WeightSumViolation,
        DimensionMismatch,
        DegenerateRange,
        EmptyInput,
        EmptyRange,
        UnresponsiveXApp,
        UnknownState,
        MissingCoupledValue,
        ProtocolViolation,
        InvalidArgument,
        ParseError,
        ValidationError,
        Io,
    };

    std::string_view to_string(Errc code) noexcept;

    /// Exception carrying a machine-checkable error code. Every failure path
    /// in the library throws this type.
    class Error : public std::runtime_error
    {
    public:
        Error(Errc code, const std::string &what)
            : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

        Errc code() const noexcept { return code_; }

    private:
        Errc code_;
    };
}
