#include <gtest/gtest.h>

#include "pldoc/wiki.hpp"

using namespace pldoc;
using namespace pldoc::wiki;

using K = Inline::Kind;

TEST(Wiki, ParagraphsSplitOnBlankLines)
{
    WikiDoc d = parse_wiki("First para\ncontinues.\n\nSecond.");
    ASSERT_EQ(d.blocks.size(), 2u);
    EXPECT_EQ(d.blocks[0].kind, Block::Kind::paragraph);
    EXPECT_EQ(to_plain(d.blocks[1].inlines), "Second.");
}

TEST(Wiki, CodeBlockIsVerbatim)
{
    WikiDoc d = parse_wiki("Intro:\n\n==\n?- X = <b>*a*</b>.\n\n  indented & more\n==\nAfter.");
    ASSERT_EQ(d.blocks.size(), 3u);
    EXPECT_EQ(d.blocks[1].kind, Block::Kind::code);
    EXPECT_EQ(d.blocks[1].code, "?- X = <b>*a*</b>.\n\n  indented & more");
    EXPECT_TRUE(d.diagnostics.empty());
}

TEST(Wiki, UnclosedCodeBlock)
{
    WikiDoc d = parse_wiki("==\nopen code");
    ASSERT_EQ(d.blocks.size(), 1u);
    EXPECT_EQ(d.blocks[0].kind, Block::Kind::code);
    ASSERT_EQ(d.diagnostics.size(), 1u);
    EXPECT_EQ(d.diagnostics[0].code, "UnclosedCodeBlock");
}

TEST(Wiki, BulletedAndNestedLists)
{
    WikiDoc d = parse_wiki("  - one\n  - two\n    * inner\n  - three");
    ASSERT_EQ(d.blocks.size(), 1u);
    const Block& l = d.blocks[0];
    EXPECT_EQ(l.kind, Block::Kind::list);
    EXPECT_EQ(l.list_kind, ListKind::bulleted);
    ASSERT_EQ(l.items.size(), 3u);
    ASSERT_EQ(l.items[1].blocks.size(), 1u);
    EXPECT_EQ(l.items[1].blocks[0].items.size(), 1u);
}

TEST(Wiki, NumberedList)
{
    WikiDoc d = parse_wiki("1. first\n2. second");
    ASSERT_EQ(d.blocks.size(), 1u);
    EXPECT_EQ(d.blocks[0].list_kind, ListKind::numbered);
    EXPECT_EQ(d.blocks[0].items.size(), 2u);
}

TEST(Wiki, DescriptionList)
{
    WikiDoc d = parse_wiki("$ foo(X) : does foo\n$ bar : does bar");
    ASSERT_EQ(d.blocks.size(), 1u);
    const Block& l = d.blocks[0];
    EXPECT_EQ(l.list_kind, ListKind::description);
    ASSERT_EQ(l.items.size(), 2u);
    ASSERT_EQ(l.items[0].term.size(), 1u);
    EXPECT_EQ(l.items[0].term[0], Inline::make_code("foo(X)"));
    EXPECT_EQ(to_plain(l.items[0].inlines), "does foo");
}

TEST(Wiki, Emphasis)
{
    Inlines xs = parse_inlines("a *bold* and _it_ and =code= here");
    ASSERT_EQ(xs.size(), 7u);
    EXPECT_EQ(xs[1].kind, K::bold);
    EXPECT_EQ(xs[3].kind, K::italic);
    EXPECT_EQ(xs[5].kind, K::code);
    EXPECT_EQ(xs[5].text, "code");
}

TEST(Wiki, MultiWordEmphasis)
{
    Inlines xs = parse_inlines("*|two words|* and =|a + b|=");
    ASSERT_GE(xs.size(), 3u);
    EXPECT_EQ(xs[0].kind, K::bold);
    EXPECT_EQ(to_plain(xs[0].children), "two words");
    EXPECT_EQ(xs.back().kind, K::code);
    EXPECT_EQ(xs.back().text, "a + b");
}

TEST(Wiki, NoEmphasisInsideWords)
{
    Inlines xs = parse_inlines("2*3*4 and snake_case_name and a * b");
    for (const Inline& x : xs)
        EXPECT_EQ(x.kind, K::text);
}

TEST(Wiki, Autolinks)
{
    EXPECT_EQ(autolink("append/3").kind, K::pred_link);
    EXPECT_EQ(autolink("phrase//2").kind, K::pred_link);
    EXPECT_EQ(autolink("lists.pl").kind, K::file_link);
    EXPECT_EQ(autolink("lists.pl").file_kind, FileKind::prolog);
    EXPECT_EQ(autolink("notes.txt").file_kind, FileKind::wiki);
    EXPECT_EQ(autolink("img/a.png").kind, K::image);
    EXPECT_EQ(autolink("Foo/3").kind, K::text);
    EXPECT_EQ(autolink("a/b").kind, K::text);

    Inlines xs = parse_inlines("See append/3.");
    ASSERT_EQ(xs.size(), 3u);
    EXPECT_EQ(xs[1].kind, K::pred_link);
    EXPECT_EQ(xs[1].text, "append/3");
    EXPECT_EQ(xs[2].text, ".");
}

TEST(Wiki, InlineImage)
{
    Inlines xs = parse_inlines("[[figure.svg]]");
    ASSERT_EQ(xs.size(), 1u);
    EXPECT_EQ(xs[0].kind, K::image);
    EXPECT_TRUE(xs[0].inline_image);
    EXPECT_EQ(xs[0].text, "figure.svg");
}

TEST(Wiki, ArgumentReferences)
{
    Inlines xs = parse_inlines("List is sorted; Other is not.", {"List", "Sorted"});
    ASSERT_FALSE(xs.empty());
    EXPECT_EQ(xs[0].kind, K::arg_ref);
    EXPECT_EQ(xs[0].text, "List");
    for (std::size_t i = 1; i < xs.size(); ++i)
        EXPECT_NE(xs[i].kind, K::arg_ref);
}

TEST(Wiki, AmbiguousArgumentNameNotMarked)
{
    Inlines xs = parse_inlines("X twice", {"X", "X"});
    for (const Inline& x : xs)
        EXPECT_NE(x.kind, K::arg_ref);
}

TEST(Wiki, EmbeddedHtmlIsPlainText)
{
    Inlines xs = parse_inlines("<b>not bold</b> & <script>");
    EXPECT_EQ(to_plain(xs), "<b>not bold</b> & <script>");
    for (const Inline& x : xs)
        EXPECT_EQ(x.kind, K::text);
}

TEST(Wiki, TagSection)
{
    Block b = tag_section({{TagKeyword::param, "X the input"}, {TagKeyword::author, "Me"}}, {"X"});
    EXPECT_EQ(b.kind, Block::Kind::tags);
    ASSERT_EQ(b.tags.size(), 2u);
    EXPECT_EQ(b.tags[0].param, "X");
    EXPECT_EQ(to_plain(b.tags[0].value), "the input");
    EXPECT_EQ(b.tags[1].param, "");
}

TEST(Wiki, ImagePaths)
{
    EXPECT_TRUE(is_image_path("a.PNG"));
    EXPECT_TRUE(is_image_path("x/y.jpeg"));
    EXPECT_FALSE(is_image_path("a.pl"));
}

namespace {

std::string shape(const std::vector<Block>& bs);

std::string shape(const Block& b)
{
    switch (b.kind) {
    case Block::Kind::paragraph: return "P(" + to_plain(b.inlines) + ")";
    case Block::Kind::code: return "C(" + b.code + ")";
    case Block::Kind::tags: return "T";
    case Block::Kind::list: break;
    }
    std::string s = "L" + std::to_string(static_cast<int>(b.list_kind)) + "[";
    for (const ListItem& it : b.items)
        s += "I(" + to_plain(it.term) + "|" + to_plain(it.inlines) + "|" + shape(it.blocks) + ")";
    return s + "]";
}

std::string shape(const std::vector<Block>& bs)
{
    std::string s;
    for (const Block& b : bs)
        s += shape(b) + ";";
    return s;
}

} // namespace

// Property: to_plain output reparses to the same block structure.
TEST(WikiProperty, PlainRoundTrip)
{
    const char* pieces[] = {"word", "*bold*", "_it_", "=code=", "append/3", "x.pl", "<b>", "&amp;",
                            "a*b", "==", "Arg", "[[p.png]]", "*|two w|*", "1.5", "-", "$"};
    const char* line_starts[] = {"", "- ", "  - ", "1. ", "$ t : ", "    * "};
    unsigned seed = 99;
    auto rnd = [&](unsigned n) {
        seed = seed * 1664525u + 1013904223u;
        return (seed >> 8) % n;
    };
    for (int i = 0; i < 300; ++i) {
        std::string text;
        for (int l = 0, n = 1 + static_cast<int>(rnd(6)); l < n; ++l) {
            if (rnd(5) == 0) {
                text += "==\ncode <x> & y\n==\n";
                continue;
            }
            text += line_starts[rnd(6)];
            for (int w = 0, m = 1 + static_cast<int>(rnd(5)); w < m; ++w)
                text += std::string(w ? " " : "") + pieces[rnd(16)];
            text += rnd(4) == 0 ? "\n\n" : "\n";
        }
        WikiDoc d = parse_wiki(text, {"Arg"});
        std::string plain = to_plain(d);
        WikiDoc again = parse_wiki(plain, {"Arg"});
        EXPECT_EQ(shape(d.blocks), shape(again.blocks)) << "input:\n" << text << "\nplain:\n" << plain;
    }
}
