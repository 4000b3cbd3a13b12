#include <gtest/gtest.h>

#include <httplib.h>
#include <json.hpp>

#include "fixtures.hpp"
#include "markup_check.hpp"
#include "pldoc/doc_server.hpp"

using namespace pldoc;
using nlohmann::json;

namespace {

struct Fixture : ::testing::Test {
    std::shared_ptr<DocHandle> docs = std::make_shared<DocHandle>(build_index(testsupport::corpus_dir()));
    DocServer server{ServerConfig{}, docs};

    Response get(const std::string& path, std::map<std::string, std::string> q = {},
                 const std::string& peer = "127.0.0.1")
    {
        Request r;
        r.path = path;
        r.query = std::move(q);
        r.peer = peer;
        return server.handle(r);
    }
    Response post(const std::string& path, std::map<std::string, std::string> q = {},
                  const std::string& peer = "127.0.0.1")
    {
        Request r;
        r.method = "POST";
        r.path = path;
        r.query = std::move(q);
        r.peer = peer;
        return server.handle(r);
    }
};

bool contains(std::string_view hay, std::string_view needle) { return hay.find(needle) != std::string_view::npos; }

} // namespace

using Server = Fixture;

TEST(ServerHelpers, Loopback)
{
    EXPECT_TRUE(is_loopback("127.0.0.1"));
    EXPECT_TRUE(is_loopback("127.1.2.3"));
    EXPECT_TRUE(is_loopback("::1"));
    EXPECT_TRUE(is_loopback("::ffff:127.0.0.1"));
    EXPECT_FALSE(is_loopback("10.0.0.1"));
}

TEST(ServerHelpers, PeerAllowed)
{
    std::vector<std::string> allow = {"127.0.0.1", "::1", "192.168.*"};
    EXPECT_TRUE(peer_allowed(allow, "127.0.0.1"));
    EXPECT_TRUE(peer_allowed(allow, "::ffff:192.168.4.5"));
    EXPECT_FALSE(peer_allowed(allow, "10.1.1.1"));
    EXPECT_TRUE(peer_allowed({"*"}, "8.8.8.8"));
}

TEST(ServerHelpers, EditorArgv)
{
    EXPECT_EQ(editor_argv("emacsclient -n +{line} {file}", "/a b/x.pl", 12),
              (std::vector<std::string>{"emacsclient", "-n", "+12", "/a b/x.pl"}));
    EXPECT_EQ(editor_argv("'my editor' --goto \"{file}:{line}\"", "f.pl", 3),
              (std::vector<std::string>{"my editor", "--goto", "f.pl:3"}));
}

TEST(ServerHelpers, DefaultEditorCommand)
{
    setenv("VISUAL", "myvis", 1);
    EXPECT_EQ(default_editor_command(), "myvis +{line} {file}");
    unsetenv("VISUAL");
    setenv("EDITOR", "ed", 1);
    EXPECT_EQ(default_editor_command(), "ed +{line} {file}");
    unsetenv("EDITOR");
    EXPECT_EQ(default_editor_command(), "vi +{line} {file}");
}

TEST(ServerHelpers, SpawnDetached)
{
    EXPECT_TRUE(spawn_detached({"true"}));
    EXPECT_FALSE(spawn_detached({"/nonexistent/pldoc-editor"}));
    EXPECT_FALSE(spawn_detached({}));
}

TEST_F(Server, RootRedirects)
{
    Response r = get("/");
    EXPECT_EQ(r.status, 302);
    EXPECT_EQ(r.headers["Location"], "/doc/");
}

TEST_F(Server, DocPages)
{
    Response d = get("/doc/");
    EXPECT_EQ(d.status, 200);
    EXPECT_EQ(d.content_type, "text/html; charset=utf-8");
    EXPECT_FALSE(testsupport::check_markup(d.body));
    EXPECT_EQ(get("/doc/lib/").status, 200);
    EXPECT_EQ(get("/doc/lib").status, 200);
    Response f = get("/doc/base64.pl");
    EXPECT_EQ(f.status, 200);
    EXPECT_TRUE(contains(f.body, "Base64 encoding and decoding"));
    EXPECT_TRUE(contains(f.body, "<script src=\"/assets/ui.js\" defer=\"defer\"></script>"));
    EXPECT_EQ(get("/doc/README.txt").status, 200);
    Response img = get("/doc/lib/diagram.png");
    EXPECT_EQ(img.status, 200);
    EXPECT_EQ(img.content_type, "image/png");
    EXPECT_EQ(get("/doc/missing.pl").status, 404);
    EXPECT_EQ(get("/doc/../../etc/passwd").status, 404);
}

TEST_F(Server, ZoomQuery)
{
    EXPECT_FALSE(contains(get("/doc/lib/pairs_util.pl").body, "id=\"keys/2\""));
    EXPECT_TRUE(contains(get("/doc/lib/pairs_util.pl", {{"public_only", "false"}}).body, "id=\"keys/2\""));
}

TEST_F(Server, SourcePage)
{
    Response r = get("/source/lib/pairs_util.pl");
    EXPECT_EQ(r.status, 200);
    EXPECT_TRUE(contains(r.body, "call_undefined"));
    EXPECT_EQ(get("/source/none.pl").status, 404);
}

TEST_F(Server, SearchPageAndApi)
{
    Response page = get("/search", {{"for", "base64"}});
    EXPECT_EQ(page.status, 200);
    EXPECT_TRUE(contains(page.body, "base64/2"));

    Response api = get("/api/search", {{"for", "base64"}});
    EXPECT_EQ(api.status, 200);
    EXPECT_EQ(api.content_type, "application/json");
    json j = json::parse(api.body);
    ASSERT_TRUE(j.is_array());
    ASSERT_GE(j.size(), 2u);
    EXPECT_EQ(j[0]["kind"], "module");
    EXPECT_EQ(j[0]["url"], "/doc/base64.pl");
    bool found = false;
    for (const auto& h : j) {
        for (const char* k : {"target", "kind", "summary", "public", "score", "url"})
            EXPECT_TRUE(h.contains(k)) << k;
        if (h["target"] == "base64/2") {
            found = true;
            EXPECT_EQ(h["url"], "/doc/base64.pl#base64/2");
        }
    }
    EXPECT_TRUE(found);

    json priv = json::parse(get("/api/search", {{"for", "keys"}}).body);
    json pub = json::parse(get("/api/search", {{"for", "keys"}, {"in", "public"}}).body);
    EXPECT_GT(priv.size(), pub.size());
}

TEST_F(Server, EditLaunchesEditor)
{
    std::vector<std::vector<std::string>> launched;
    server.set_spawner([&](const std::vector<std::string>& argv) {
        launched.push_back(argv);
        return true;
    });
    Response r = post("/edit", {{"pred", "pair_swap/2"}});
    EXPECT_EQ(r.status, 202);
    json j = json::parse(r.body);
    EXPECT_EQ(j["file"], "lib/pairs_util.pl");
    EXPECT_EQ(j["line"], 25);
    ASSERT_EQ(launched.size(), 1u);
    EXPECT_EQ(launched[0].back(), (testsupport::corpus_dir() / "lib/pairs_util.pl").string());

    EXPECT_EQ(post("/edit", {{"pred", "base64/2"}}).status, 202);
    EXPECT_EQ(post("/edit", {{"pred", "nothing/9"}}).status, 404);
    EXPECT_EQ(post("/edit", {{"pred", "pair_swap/2"}}, "::ffff:127.0.0.1").status, 202);
    EXPECT_EQ(launched.size(), 3u);
}

TEST_F(Server, EditSpawnFailure)
{
    server.set_spawner([](const std::vector<std::string>&) { return false; });
    EXPECT_EQ(post("/edit", {{"pred", "pair_swap/2"}}).status, 500);
}

TEST_F(Server, ReloadBumpsGeneration)
{
    Response r = post("/reload");
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(json::parse(r.body)["generation"], 2);
}

TEST(ServerAccess, RemotePeers)
{
    auto docs = std::make_shared<DocHandle>(build_index(testsupport::corpus_dir()));
    ServerConfig cfg;
    cfg.allow.push_back("10.0.*");
    DocServer server(cfg, docs);
    bool spawned = false;
    server.set_spawner([&](const std::vector<std::string>&) { return spawned = true; });

    Request get;
    get.path = "/doc/base64.pl";
    get.peer = "10.0.0.7";
    Response page = server.handle(get);
    EXPECT_EQ(page.status, 200);
    EXPECT_FALSE(contains(page.body, "/edit?pred"));
    EXPECT_FALSE(contains(page.body, "action=\"/reload\""));

    Request edit{"POST", "/edit", {{"pred", "base64/2"}}, "10.0.0.7"};
    EXPECT_EQ(server.handle(edit).status, 403);
    EXPECT_FALSE(spawned);
    Request reload{"POST", "/reload", {}, "10.0.0.7"};
    EXPECT_EQ(server.handle(reload).status, 403);
    EXPECT_EQ(docs->snapshot()->generation, 1u);

    get.peer = "172.16.0.1";
    EXPECT_EQ(server.handle(get).status, 403);
}

TEST_F(Server, Assets)
{
    Response css = get("/assets/pldoc.css");
    EXPECT_EQ(css.status, 200);
    EXPECT_EQ(css.content_type, "text/css");
    EXPECT_TRUE(contains(css.body, ".call_undefined"));
    EXPECT_EQ(get("/assets/ui.js").status, 404);
}

TEST(ServerAssets, ServesFromAssetsDir)
{
    testsupport::TempDir dir;
    dir.write("ui.js", "console.log(1);\n");
    ServerConfig cfg;
    cfg.assets_dir = dir.path();
    DocServer server(cfg, std::make_shared<DocHandle>(build_index(testsupport::corpus_dir())));
    Request r;
    r.path = "/assets/ui.js";
    Response js = server.handle(r);
    EXPECT_EQ(js.status, 200);
    EXPECT_EQ(js.content_type, "text/javascript");
    EXPECT_EQ(js.body, "console.log(1);\n");
    r.path = "/assets/../ui.js";
    EXPECT_EQ(server.handle(r).status, 404);
}

TEST_F(Server, MethodNotAllowed)
{
    Request r;
    r.method = "DELETE";
    r.path = "/doc/";
    EXPECT_EQ(server.handle(r).status, 405);
    EXPECT_EQ(post("/doc/").status, 405);
}

TEST(ServerHttp, ServesOverTcp)
{
    auto docs = std::make_shared<DocHandle>(build_index(testsupport::corpus_dir()));
    ServerConfig cfg;
    cfg.port = 0;
    DocServer server(cfg, docs);
    server.start();
    ASSERT_GT(server.port(), 0);
    EXPECT_EQ(server.host(), "127.0.0.1");

    httplib::Client cli("127.0.0.1", server.port());
    auto page = cli.Get("/doc/lib/pairs_util.pl");
    ASSERT_TRUE(page);
    EXPECT_EQ(page->status, 200);
    EXPECT_TRUE(contains(page->body, "pairs_keys_sorted"));

    auto api = cli.Get("/api/search?for=base64");
    ASSERT_TRUE(api);
    EXPECT_EQ(api->get_header_value("Content-Type"), "application/json");
    EXPECT_FALSE(json::parse(api->body).empty());

    auto reload = cli.Post("/reload");
    ASSERT_TRUE(reload);
    EXPECT_EQ(reload->status, 200);
    EXPECT_EQ(docs->snapshot()->generation, 2u);

    auto redirect = cli.Get("/");
    ASSERT_TRUE(redirect);
    EXPECT_EQ(redirect->status, 302);
    server.stop();
}

TEST(ServerHttp, PortInUseIsReported)
{
    auto docs = std::make_shared<DocHandle>(build_index(testsupport::corpus_dir()));
    ServerConfig cfg;
    cfg.port = 0;
    DocServer first(cfg, docs);
    first.start();
    ServerConfig clash;
    clash.port = first.port();
    DocServer second(clash, docs);
    try {
        second.start();
        FAIL() << "second bind succeeded";
    } catch (const ServerError& e) {
        EXPECT_EQ(e.code(), ServerError::Code::port_in_use);
    }
}
