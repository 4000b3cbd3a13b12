#include <gtest/gtest.h>

#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "pldoc/cli.hpp"

using testsupport::TempDir;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    std::istringstream in;
    int code = pldoc::cli::run(args, out, err, in);
    return {code, out.str(), err.str()};
}

const std::string corpus = testsupport::corpus_dir().string();

} // namespace

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"lint", "/nonexistent/dir"}).code, 2);
    EXPECT_EQ(run({"lint", corpus, "--format", "xml"}).code, 2);
    CliResult help = run({"--help"});
    EXPECT_EQ(help.code, 0);
    EXPECT_NE(help.out.find("serve"), std::string::npos);
}

TEST(Cli, LintCleanCorpus)
{
    CliResult r = run({"lint", corpus});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out, "");
}

TEST(Cli, LintReportsUndocumentedExport)
{
    TempDir t;
    t.write("m.pl", ":- module(m, [a/1, b/1, c/1]).\n"
                    "%!  a(+X) is det.\n%   A.\na(_).\n"
                    "%!  b(+X) is det.\n%   B.\nb(_).\n"
                    "c(_).\n");
    CliResult r = run({"lint", t.path().string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.out, "m.pl: undocumented export c/1\n");

    CliResult j = run({"lint", t.path().string(), "--format", "json"});
    EXPECT_EQ(j.code, 1);
    auto arr = nlohmann::json::parse(j.out);
    ASSERT_EQ(arr.size(), 1u);
    EXPECT_EQ(arr[0]["code"], "UndocumentedExport");
    EXPECT_EQ(arr[0]["message"], "c/1");
}

TEST(Cli, LintReportsHeaderErrors)
{
    TempDir t;
    t.write("m.pl", "%!  p(+x) is det.\n%   Bad.\np(_).\n");
    CliResult r = run({"lint", t.path().string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.out.rfind("m.pl:1: warning: NonVariableArgName:", 0), 0u) << r.out;
}

TEST(Cli, Search)
{
    CliResult r = run({"search", "base64", corpus});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("4\tmodule\tbase64.pl\tbase64.pl:1\t", 0), 0u) << r.out;
    EXPECT_NE(r.out.find("\tbase64/2\t"), std::string::npos);
    EXPECT_EQ(run({"search", "base64", corpus}).out, r.out);

    CliResult priv = run({"search", "keys", corpus});
    EXPECT_NE(priv.out.find("keys/2 (private)"), std::string::npos);
    CliResult pub = run({"search", "keys", corpus, "--public"});
    EXPECT_EQ(pub.out.find("(private)"), std::string::npos);

    CliResult j = run({"search", "pairs", corpus, "--format", "json"});
    auto arr = nlohmann::json::parse(j.out);
    ASSERT_FALSE(arr.empty());
    EXPECT_EQ(arr[0]["target"], "pairs_keys_sorted/2");
}

TEST(Cli, Build)
{
    TempDir out;
    CliResult r = run({"build", corpus, "--out", (out / "site").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(std::filesystem::exists(out / "site/index.html"));
    EXPECT_TRUE(std::filesystem::exists(out / "site/lib/pairs_util.html"));
    std::string page = testsupport::read_file(out / "site/lib/pairs_util.html");
    EXPECT_EQ(page.find("id=\"keys/2\""), std::string::npos);

    CliResult priv = run({"build", corpus, "--out", (out / "all").string(), "--private"});
    EXPECT_EQ(priv.code, 0);
    EXPECT_NE(testsupport::read_file(out / "all/lib/pairs_util.html").find("id=\"keys/2\""), std::string::npos);
}

TEST(Cli, ServeAcceptsConsoleCommands)
{
    TempDir t;
    t.write("a.pl", "a.\n");
    std::ostringstream out, err;
    std::istringstream in("reload\nbogus\nquit\n");
    EXPECT_EQ(pldoc::cli::run({"serve", t.path().string(), "--port", "0"}, out, err, in), 0);
    EXPECT_NE(out.str().find("serving "), std::string::npos);
    EXPECT_NE(out.str().find("generation 2"), std::string::npos);
    EXPECT_NE(out.str().find("unknown command: bogus"), std::string::npos);
}

TEST(Cli, ConfigFileSuppliesCommandOptions)
{
    TempDir t;
    t.write("a.pl", ":- module(a, [a/0]).\na.\n");
    t.write("pldoc.conf", "[lint]\nformat=json\n");
    CliResult r = run({"--config", (t / "pldoc.conf").string(), "lint", t.path().string()});
    EXPECT_EQ(r.code, 1);
    auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j.size(), 1u);
    EXPECT_EQ(j[0]["code"], "UndocumentedExport");
    EXPECT_EQ(j[0]["message"], "a/0");
}
