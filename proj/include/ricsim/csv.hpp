#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ricsim::csv
{
    /// Quotes a field only when it contains a separator, quote or newline.
    std::string escape(std::string_view field);

    void write_row(std::ostream &out, const std::vector<std::string> &fields);

    /// Writes a whole table in one go; throws Error(Io) if the file cannot be
    /// opened or the write fails.
    void write_file(const std::filesystem::path &path,
                    const std::vector<std::string> &header,
                    const std::vector<std::vector<std::string>> &rows);
}
