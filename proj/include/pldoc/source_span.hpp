#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace pldoc {

/// Half-open byte range into a source file, plus the 1-based lines it touches.
struct SourceSpan {
    std::size_t byte_start = 0;
    std::size_t byte_end = 0;
    int line_start = 1;
    int line_end = 1;

    std::size_t size() const { return byte_end - byte_start; }
    bool operator==(const SourceSpan&) const = default;
};

enum class Severity { info, warning, error };

const char* to_string(Severity s);

struct Diagnostic {
    Severity severity = Severity::warning;
    std::string code;     // stable identifier, e.g. "BadDeterminism"
    std::string message;
    std::string file;     // relative path, empty when not file-bound
    SourceSpan span;
};

using Diagnostics = std::vector<Diagnostic>;

} // namespace pldoc
