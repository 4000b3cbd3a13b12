#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pldoc::html {

/// Entity-escapes `& < > " '`.
std::string escape(std::string_view s);

/// Reverses escape() and the numeric entities it might meet.
std::string unescape(std::string_view s);

using Attrs = std::vector<std::pair<std::string, std::string>>;

/// Markup produced by a Writer. Only a Writer can create non-empty
/// fragments, so user text cannot reach the output without escaping.
class Fragment {
public:
    Fragment() = default;
    const std::string& str() const { return markup_; }
    bool empty() const { return markup_.empty(); }

private:
    friend class Writer;
    explicit Fragment(std::string m) : markup_(std::move(m)) {}
    std::string markup_;
};

/// Streaming element builder. Attribute values and text are always escaped,
/// and elements are closed in order, so the result is well formed.
class Writer {
public:
    Writer& open(std::string_view tag, const Attrs& attrs = {});
    Writer& close();
    /// A void element such as <img> or <meta>.
    Writer& empty(std::string_view tag, const Attrs& attrs = {});
    Writer& text(std::string_view s);
    Writer& element(std::string_view tag, const Attrs& attrs, std::string_view text);
    Writer& element(std::string_view tag, std::string_view text) { return element(tag, {}, text); }
    Writer& append(const Fragment& f);
    Writer& newline();

    std::size_t depth() const { return stack_.size(); }

    /// Closes whatever is still open and hands over the markup.
    Fragment finish();

private:
    void start_tag(std::string_view tag, const Attrs& attrs);

    std::string out_;
    std::vector<std::string> stack_;
};

} // namespace pldoc::html
