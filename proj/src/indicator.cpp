#include "pldoc/indicator.hpp"

#include <charconv>

#include "pldoc/prolog_reader.hpp"

namespace pldoc {

std::string Indicator::str() const
{
    return quote_atom_if_needed(name) + (dcg ? "//" : "/") + std::to_string(arity);
}

std::optional<Indicator> Indicator::parse(std::string_view s)
{
    auto slash = s.rfind('/');
    if (slash == std::string_view::npos || slash == 0)
        return std::nullopt;
    std::string_view digits = s.substr(slash + 1);
    int arity = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), arity);
    if (digits.empty() || ec != std::errc() || p != digits.data() + digits.size() || arity < 0)
        return std::nullopt;
    bool dcg = slash >= 1 && s[slash - 1] == '/';
    std::string_view name = s.substr(0, dcg ? slash - 1 : slash);
    if (name.empty())
        return std::nullopt;
    if (name.size() >= 2 && name.front() == '\'' && name.back() == '\'')
        return Indicator{unquote(name), arity, dcg};
    return Indicator{std::string(name), arity, dcg};
}

} // namespace pldoc
