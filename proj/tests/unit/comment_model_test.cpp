#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "pldoc/comment_model.hpp"

using namespace pldoc;

namespace {

std::vector<StructuredComment> structured(const std::string& src, const CommentOptions& opts = {})
{
    auto r = read_source(src);
    std::vector<CommentRecord> all;
    for (auto& u : r.units)
        all.insert(all.end(), u.leading_comments.begin(), u.leading_comments.end());
    std::vector<StructuredComment> out;
    for (auto& c : group_comments(all, src, opts))
        if (auto sc = classify_comment(c, opts))
            out.push_back(*sc);
    return out;
}

} // namespace

TEST(CommentModel, PercentCommentSections)
{
    auto scs = structured("%!  foo(+X) is det.\n%\n%   Does foo. More text\n%   here.\n%\n"
                          "%   @param X  the input\n%   @see bar/1\nfoo(_).\n");
    ASSERT_EQ(scs.size(), 1u);
    const auto& sc = scs[0];
    EXPECT_EQ(sc.style, MarkerStyle::percent);
    EXPECT_EQ(sc.kind, CommentKind::predicate_doc);
    EXPECT_EQ(sc.header_text, "foo(+X) is det.");
    EXPECT_EQ(sc.body_text, "Does foo. More text\nhere.");
    ASSERT_EQ(sc.tags.size(), 2u);
    EXPECT_EQ(sc.tags[0], (Tag{TagKeyword::param, "X the input"}));
    EXPECT_EQ(sc.tags[1], (Tag{TagKeyword::see, "bar/1"}));
}

TEST(CommentModel, RawIsByteIdentical)
{
    std::string src = "x.\n\n%%  a(-Y)\n%   Body.\na(1).\n";
    auto scs = structured(src);
    ASSERT_EQ(scs.size(), 1u);
    EXPECT_EQ(scs[0].raw, "%%  a(-Y)\n%   Body.");
    EXPECT_EQ(src.substr(scs[0].span.byte_start, scs[0].span.size()), scs[0].raw);
    EXPECT_EQ(scs[0].span.line_start, 3);
    EXPECT_EQ(scs[0].span.line_end, 4);
}

TEST(CommentModel, StackedModeLinesStayTogether)
{
    auto scs = structured("%%  p(+A) is det.\n%%  p(-A) is nondet.\n%\n%   Body.\np(1).\n");
    ASSERT_EQ(scs.size(), 1u);
    EXPECT_EQ(scs[0].header_text, "p(+A) is det.\np(-A) is nondet.");
}

TEST(CommentModel, NewMarkerStartsNewComment)
{
    auto scs = structured("%%  p(+A) is det.\n%\n%   Body p.\n%%  q(+B) is det.\n%\n%   Body q.\nq(1).\n");
    ASSERT_EQ(scs.size(), 2u);
    EXPECT_EQ(scs[0].body_text, "Body p.");
    EXPECT_EQ(scs[1].header_text, "q(+B) is det.");
}

TEST(CommentModel, PercentHeaderIsTheMarkerLines)
{
    auto scs = structured("%%  p(+A) is det.\n%   Body starts here.\n%\n%   More.\np(1).\n");
    ASSERT_EQ(scs.size(), 1u);
    EXPECT_EQ(scs[0].header_text, "p(+A) is det.");
    EXPECT_EQ(scs[0].body_text, "Body starts here.\n\nMore.");
}

TEST(CommentModel, PercentHeaderContinuesWhileBracketsOpen)
{
    auto scs = structured("%!  p(+A,\n%      -B) is det.\n%   Body.\np(1, 2).\n");
    ASSERT_EQ(scs.size(), 1u);
    EXPECT_EQ(scs[0].header_text, "p(+A,\n-B) is det.");
    EXPECT_EQ(scs[0].body_text, "Body.");
}

TEST(CommentModel, PercentBangCanBeDisabled)
{
    CommentOptions opts;
    opts.accept_percent_bang = false;
    EXPECT_TRUE(structured("%! p.\np.\n", opts).empty());
    EXPECT_EQ(structured("%! p.\np.\n").size(), 1u);
}

TEST(CommentModel, PlainCommentsAreNotStructured)
{
    EXPECT_TRUE(structured("% just a note\np.\n").empty());
    EXPECT_TRUE(structured("/* ordinary */\np.\n").empty());
    EXPECT_TRUE(structured("%%% banner\np.\n").empty());
    EXPECT_TRUE(structured("p. %% trailing\n").empty());
}

TEST(CommentModel, SlashStarModule)
{
    auto scs = structured("/** <module> Title here\n\nBody line.\n*/\n:- module(m, []).\n");
    ASSERT_EQ(scs.size(), 1u);
    EXPECT_EQ(scs[0].style, MarkerStyle::slashstar);
    EXPECT_EQ(scs[0].kind, CommentKind::module_doc);
    EXPECT_EQ(scs[0].header_text, "<module> Title here");
    EXPECT_EQ(scs[0].body_text, "Body line.");
}

TEST(CommentModel, SlashStarStarMargin)
{
    auto scs = structured("/**\n * foo(+X) is det.\n *\n * Body.\n */\nfoo(1).\n");
    ASSERT_EQ(scs.size(), 1u);
    EXPECT_EQ(scs[0].header_text, "foo(+X) is det.");
    EXPECT_EQ(scs[0].body_text, "Body.");
}

TEST(CommentModel, EmptyHeaderDiagnosed)
{
    auto scs = structured("/**\n\n\n*/\nfoo.\n");
    ASSERT_EQ(scs.size(), 1u);
    ASSERT_FALSE(scs[0].diagnostics.empty());
    EXPECT_EQ(scs[0].diagnostics[0].code, "EmptyHeader");
}

TEST(CommentModel, ErrorTagBecomesThrows)
{
    TagParse tp = parse_tags({"@error type_error(integer, X) if X is not an integer"});
    ASSERT_EQ(tp.tags.size(), 1u);
    EXPECT_EQ(tp.tags[0].keyword, TagKeyword::throws);
    EXPECT_EQ(tp.tags[0].value, "error(type_error(integer, X), Context) if X is not an integer");
}

TEST(CommentModel, UnknownTagsStayInBody)
{
    TagParse tp = parse_tags({"@return the value", "@frobnicate x", "@author Me"});
    ASSERT_EQ(tp.tags.size(), 1u);
    EXPECT_EQ(tp.tags[0].keyword, TagKeyword::author);
    ASSERT_EQ(tp.diagnostics.size(), 2u);
    EXPECT_EQ(tp.diagnostics[0].code, "UnsupportedKeyword");
    EXPECT_EQ(tp.diagnostics[1].code, "UnknownKeyword");
    EXPECT_EQ(tp.body_lines.size(), 2u);
}

TEST(CommentModel, TagContinuationLines)
{
    TagParse tp = parse_tags({"@param X first", "       continued", "@tbd later"});
    ASSERT_EQ(tp.tags.size(), 2u);
    EXPECT_EQ(tp.tags[0].value, "X first continued");
}

TEST(CommentModel, SummaryIsFirstSentence)
{
    EXPECT_EQ(extract_summary("Does  foo.   Then bar.").text, "Does foo.");
    EXPECT_EQ(extract_summary("Version 1.5 is here. Next").text, "Version 1.5 is here.");
    EXPECT_EQ(extract_summary("No stop here\nsecond line").text, "No stop here");
    EXPECT_EQ(extract_summary("").text, "");
}

TEST(CommentModel, TagKeywordNames)
{
    for (auto k : {TagKeyword::param, TagKeyword::throws, TagKeyword::tbd, TagKeyword::author})
        EXPECT_EQ(parse_tag_keyword(to_string(k)), k);
    EXPECT_FALSE(parse_tag_keyword("return"));
}

TEST(CommentModel, Base64ModuleComment)
{
    std::string src = testsupport::read_file(testsupport::corpus_dir() / "base64.pl");
    auto scs = structured(src);
    ASSERT_EQ(scs.size(), 1u);
    EXPECT_EQ(scs[0].kind, CommentKind::module_doc);
    ASSERT_EQ(scs[0].tags.size(), 3u);
    EXPECT_EQ(scs[0].tags[0], (Tag{TagKeyword::tbd, "Stream I/O"}));
    EXPECT_EQ(scs[0].tags[1], (Tag{TagKeyword::tbd, "White-space introduction and parsing"}));
    EXPECT_EQ(scs[0].tags[2], (Tag{TagKeyword::author, "Jan Wielemaker"}));
}
