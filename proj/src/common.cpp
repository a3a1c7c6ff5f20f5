#include "ricsim/csv.hpp"
#include "ricsim/error.hpp"
#include "ricsim/types.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

namespace ricsim
{
    std::string_view to_string(Errc code) noexcept
    {
        switch (code)
        {
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::StaleTimestamp: return "StaleTimestamp";
        case Errc::EmptyHistory: return "EmptyHistory";
        case Errc::UnknownParameter: return "UnknownParameter";
        case Errc::UnknownKpi: return "UnknownKpi";
        case Errc::UnknownXApp: return "UnknownXApp";
        case Errc::NotADegradation: return "NotADegradation";
        case Errc::NoCounterparty: return "NoCounterparty";
        case Errc::TooFewXApps: return "TooFewXApps";
        case Errc::WeightSumViolation: return "WeightSumViolation";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::DegenerateRange: return "DegenerateRange";
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::EmptyRange: return "EmptyRange";
        case Errc::UnresponsiveXApp: return "UnresponsiveXApp";
        case Errc::UnknownState: return "UnknownState";
        case Errc::MissingCoupledValue: return "MissingCoupledValue";
        case Errc::ProtocolViolation: return "ProtocolViolation";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::ParseError: return "ParseError";
        case Errc::ValidationError: return "ValidationError";
        case Errc::Io: return "Io";
        }
        return "Unknown";
    }

    std::string_view to_string(Direction d) noexcept
    {
        return d == Direction::AtLeast ? "at_least" : "at_most";
    }

    Direction direction_from_string(std::string_view s)
    {
        if (s == "at_least")
            return Direction::AtLeast;
        if (s == "at_most")
            return Direction::AtMost;
        throw Error(Errc::ParseError, "unknown threshold direction '" + std::string(s) + "'");
    }

    std::string format_double(double v)
    {
        if (v == 0.0)
            return "0"; // folds -0
        if (!std::isfinite(v))
            return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
        std::array<char, 64> buf{};
        auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        return std::string(buf.data(), end);
    }
}

namespace ricsim::csv
{
    std::string escape(std::string_view field)
    {
        if (field.find_first_of(",\"\n\r") == std::string_view::npos)
            return std::string(field);
        std::string out = "\"";
        for (char c : field)
        {
            if (c == '"')
                out += '"';
            out += c;
        }
        out += '"';
        return out;
    }

    void write_row(std::ostream &out, const std::vector<std::string> &fields)
    {
        for (std::size_t i = 0; i < fields.size(); ++i)
        {
            if (i)
                out << ',';
            out << escape(fields[i]);
        }
        out << '\n';
    }

    void write_file(const std::filesystem::path &path,
                    const std::vector<std::string> &header,
                    const std::vector<std::vector<std::string>> &rows)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
        write_row(out, header);
        for (const auto &r : rows)
            write_row(out, r);
        out.flush();
        if (!out)
            throw Error(Errc::Io, "write failed for " + path.string());
    }
}
