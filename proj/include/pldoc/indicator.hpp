#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace pldoc {

/// Predicate indicator: name/arity, or name//arity for a grammar rule.
///
/// Ordering and equality compare the predicate the indicator denotes, so
/// `foo//1` and `foo/3` are the same key. The spelling is kept for display.
struct Indicator {
    std::string name;
    int arity = 0;
    bool dcg = false;

    int plain_arity() const { return dcg ? arity + 2 : arity; }

    /// "name/arity" or "name//arity"; the name is quoted when needed.
    std::string str() const;

    static std::optional<Indicator> parse(std::string_view s);

    friend bool operator==(const Indicator& a, const Indicator& b)
    {
        return a.name == b.name && a.plain_arity() == b.plain_arity();
    }
    friend std::strong_ordering operator<=>(const Indicator& a, const Indicator& b)
    {
        if (auto c = a.name <=> b.name; c != 0)
            return c;
        return a.plain_arity() <=> b.plain_arity();
    }
};

} // namespace pldoc
