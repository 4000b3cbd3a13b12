#include "pldoc/doc_server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "pldoc/assets.hpp"
#include "pldoc/html_backend.hpp"
#include "text_util.hpp"

extern char** environ;

namespace fs = std::filesystem;

namespace pldoc {

namespace {

Response html_response(int status, std::string body)
{
    Response r;
    r.status = status;
    r.body = std::move(body);
    return r;
}

Response error_response(int status, std::string_view message)
{
    RenderOptions opts;
    return html_response(status, render_error_page(status, message, opts).document);
}

Response json_response(int status, const nlohmann::json& j)
{
    Response r;
    r.status = status;
    r.content_type = "application/json";
    r.body = j.dump();
    return r;
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

std::string query_value(const Request& req, const std::string& key, std::string fallback = {})
{
    auto it = req.query.find(key);
    return it == req.query.end() ? fallback : it->second;
}

std::string mime_type(std::string_view path)
{
    std::string l = text::to_lower(path);
    auto ends = [&](std::string_view e) { return l.size() >= e.size() && l.substr(l.size() - e.size()) == e; };
    if (ends(".png")) return "image/png";
    if (ends(".gif")) return "image/gif";
    if (ends(".jpg") || ends(".jpeg")) return "image/jpeg";
    if (ends(".svg")) return "image/svg+xml";
    if (ends(".css")) return "text/css";
    if (ends(".js")) return "text/javascript";
    return "application/octet-stream";
}

bool slurp(const fs::path& p, std::string& out)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

// Reports why binding `host:port` fails, if it does.
void probe_bind(const std::string& host, int port)
{
    const bool v6 = host.find(':') != std::string::npos;
    int fd = ::socket(v6 ? AF_INET6 : AF_INET, SOCK_STREAM, 0);
    if (fd < 0)
        return;
    int yes = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    int rc;
    if (v6) {
        sockaddr_in6 a{};
        a.sin6_family = AF_INET6;
        a.sin6_port = htons(static_cast<uint16_t>(port));
        ::inet_pton(AF_INET6, host.c_str(), &a.sin6_addr);
        rc = ::bind(fd, reinterpret_cast<sockaddr*>(&a), sizeof a);
    } else {
        sockaddr_in a{};
        a.sin_family = AF_INET;
        a.sin_port = htons(static_cast<uint16_t>(port));
        ::inet_pton(AF_INET, host.c_str(), &a.sin_addr);
        rc = ::bind(fd, reinterpret_cast<sockaddr*>(&a), sizeof a);
    }
    int err = errno;
    ::close(fd);
    if (rc == 0)
        return;
    const std::string where = host + ":" + std::to_string(port);
    if (err == EADDRINUSE)
        throw ServerError(ServerError::Code::port_in_use, "port in use: " + where);
    if (err == EACCES || err == EPERM)
        throw ServerError(ServerError::Code::bind_denied, "permission denied binding " + where);
    throw ServerError(ServerError::Code::other, "cannot bind " + where + ": " + std::strerror(err));
}

} // namespace

bool is_loopback(std::string_view a)
{
    return starts_with(a, "127.") || a == "::1" || starts_with(a, "::ffff:127.") || a == "localhost";
}

bool peer_allowed(const std::vector<std::string>& allow, std::string_view peer)
{
    std::string_view p = peer;
    if (starts_with(p, "::ffff:") && p.find('.') != std::string_view::npos)
        p.remove_prefix(7);
    for (const auto& pat : allow) {
        if (pat == "*")
            return true;
        if (!pat.empty() && pat.back() == '*') {
            if (starts_with(p, std::string_view(pat).substr(0, pat.size() - 1)))
                return true;
        } else if (pat == p || pat == peer || (pat == "localhost" && is_loopback(peer))) {
            return true;
        }
    }
    return false;
}

std::string default_editor_command()
{
    for (const char* var : {"VISUAL", "EDITOR"})
        if (const char* v = std::getenv(var); v && *v)
            return std::string(v) + " +{line} {file}";
    return "vi +{line} {file}";
}

std::vector<std::string> editor_argv(std::string_view templ, const std::string& file, int line)
{
    std::vector<std::string> words;
    std::string cur;
    bool in_word = false;
    char quote = 0;
    for (char c : templ) {
        if (quote) {
            if (c == quote)
                quote = 0;
            else
                cur += c;
        } else if (c == '\'' || c == '"') {
            quote = c;
            in_word = true;
        } else if (text::is_layout(static_cast<unsigned char>(c))) {
            if (in_word)
                words.push_back(std::move(cur));
            cur.clear();
            in_word = false;
        } else {
            cur += c;
            in_word = true;
        }
    }
    if (in_word)
        words.push_back(std::move(cur));

    for (auto& w : words) {
        std::string out;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (w.compare(i, 6, "{file}") == 0) {
                out += file;
                i += 5;
            } else if (w.compare(i, 6, "{line}") == 0) {
                out += std::to_string(line);
                i += 5;
            } else {
                out += w[i];
            }
        }
        w = std::move(out);
    }
    return words;
}

bool spawn_detached(const std::vector<std::string>& argv)
{
    if (argv.empty())
        return false;
    std::vector<char*> args;
    for (const auto& a : argv)
        args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    pid_t pid;
    if (::posix_spawnp(&pid, args[0], nullptr, nullptr, args.data(), environ) != 0)
        return false;
    std::thread([pid] {
        int status;
        ::waitpid(pid, &status, 0);
    }).detach();
    return true;
}

DocServer::DocServer(ServerConfig config, std::shared_ptr<DocHandle> docs)
    : config_(std::move(config)), docs_(std::move(docs)), spawner_(spawn_detached)
{
    if (config_.editor_command.empty())
        config_.editor_command = default_editor_command();
}

DocServer::~DocServer() { stop(); }

Response DocServer::handle(const Request& req) const
{
    if (!peer_allowed(config_.allow, req.peer))
        return error_response(403, "access denied");

    const std::string& path = req.path;
    if (req.method == "POST") {
        if (path == "/edit")
            return edit(req);
        if (path == "/reload")
            return reload(req);
        return error_response(405, "method not allowed");
    }
    if (req.method != "GET" && req.method != "HEAD")
        return error_response(405, "method not allowed");

    if (path == "/" || path == "/doc") {
        Response r = html_response(302, "");
        r.headers["Location"] = "/doc/";
        return r;
    }
    if (starts_with(path, "/doc/"))
        return doc_page(req, std::string_view(path).substr(5));
    if (starts_with(path, "/source/"))
        return source_page(req, std::string_view(path).substr(8));
    if (path == "/search")
        return search_page(req);
    if (path == "/api/search")
        return api_search(req);
    if (starts_with(path, "/assets/"))
        return asset(std::string_view(path).substr(8));
    return error_response(404, "not found: " + path);
}

namespace {

RenderOptions options_for(const ServerConfig& config, const Request& req)
{
    RenderOptions o;
    o.links = LinkMode::live;
    o.public_only = config.public_only_default;
    auto it = req.query.find("public_only");
    if (it != req.query.end())
        o.public_only = it->second != "false";
    o.edit_enabled = is_loopback(req.peer);
    o.stamp_generation = config.stamp_generation;
    return o;
}

} // namespace

Response DocServer::doc_page(const Request& req, std::string_view rel_in) const
{
    auto snap = docs_->snapshot();
    const RenderOptions opts = options_for(config_, req);
    std::string rel(rel_in);
    try {
        if (rel.empty() || rel.back() == '/') {
            if (!rel.empty())
                rel.pop_back();
            return html_response(200, render_dir_index(rel, *snap, opts).document);
        }
        if (snap->file(rel))
            return html_response(200, render_file_page(rel, *snap, opts).document);
        if (snap->texts.count(rel))
            return html_response(200, render_text_page(rel, *snap, opts).document);
        if (std::find(snap->images.begin(), snap->images.end(), rel) != snap->images.end()) {
            Response r;
            if (!slurp(snap->root / rel, r.body))
                return error_response(404, "cannot read " + rel);
            r.content_type = mime_type(rel);
            return r;
        }
        if (snap->has_dir(rel))
            return html_response(200, render_dir_index(rel, *snap, opts).document);
    } catch (const UnknownDir&) {
    } catch (const UnknownFile&) {
    }
    return error_response(404, "no documentation for " + rel);
}

Response DocServer::source_page(const Request& req, std::string_view rel) const
{
    auto snap = docs_->snapshot();
    if (!snap->file(rel))
        return error_response(404, "no such source file: " + std::string(rel));
    return html_response(200, render_source_page(rel, *snap, options_for(config_, req)).document);
}

Response DocServer::search_page(const Request& req) const
{
    auto snap = docs_->snapshot();
    const std::string q = query_value(req, "for");
    const bool all = query_value(req, "in", "all") != "public";
    auto hits = search(*snap, q, all);
    return html_response(200, render_search_page(q, hits, *snap, options_for(config_, req)).document);
}

Response DocServer::api_search(const Request& req) const
{
    auto snap = docs_->snapshot();
    const std::string q = query_value(req, "for");
    const bool all = query_value(req, "in", "all") != "public";
    RenderOptions opts = options_for(config_, req);
    Linker links(opts, {Target::Kind::search, "", {}});
    nlohmann::json out = nlohmann::json::array();
    for (const SearchHit& h : search(*snap, q, all)) {
        Target t{Target::Kind::file_page, h.file, h.kind == SearchHit::Kind::module ? "" : h.target};
        out.push_back({{"target", h.target},
                       {"kind", to_string(h.kind)},
                       {"summary", h.summary},
                       {"public", h.is_public},
                       {"score", h.score},
                       {"url", links.href(t)}});
    }
    return json_response(200, out);
}

Response DocServer::edit(const Request& req) const
{
    if (!is_loopback(req.peer))
        return error_response(403, "edit is only available from the local host");
    auto snap = docs_->snapshot();
    const std::string spelled = query_value(req, "pred");
    auto pi = Indicator::parse(spelled);
    const PredDoc* pd = pi ? snap->find_pred(*pi) : nullptr;
    std::string file;
    int line = 1;
    if (pd) {
        file = pd->file;
        line = pd->line;
    } else if (const FileDoc* fd = pi ? snap->locate(*pi) : nullptr) {
        file = fd->path;
    } else {
        return error_response(404, "unknown predicate: " + spelled);
    }
    auto argv = editor_argv(config_.editor_command, (snap->root / file).string(), line);
    if (!spawner_ || !spawner_(argv))
        return error_response(500, "cannot start editor");
    return json_response(202, {{"file", file}, {"line", line}});
}

Response DocServer::reload(const Request& req) const
{
    if (!is_loopback(req.peer))
        return error_response(403, "reload is only available from the local host");
    auto snap = docs_->reload();
    return json_response(200, {{"generation", snap->generation}});
}

Response DocServer::asset(std::string_view name) const
{
    if (name == "pldoc.css") {
        Response r;
        r.content_type = "text/css";
        r.body = std::string(stylesheet());
        return r;
    }
    if (!config_.assets_dir.empty() && !name.empty() && name.find('/') == std::string_view::npos &&
        name.find("..") == std::string_view::npos) {
        Response r;
        if (slurp(config_.assets_dir / std::string(name), r.body)) {
            r.content_type = mime_type(name);
            return r;
        }
    }
    return error_response(404, "no such asset");
}

void DocServer::start()
{
    if (http_)
        return;
    host_ = config_.host;
    if (host_.empty()) {
        bool remote = false;
        for (const auto& a : config_.allow)
            remote = remote || !is_loopback(a);
        host_ = remote ? "0.0.0.0" : "127.0.0.1";
    }
    if (config_.port != 0)
        probe_bind(host_, config_.port);

    http_ = std::make_unique<httplib::Server>();
    auto adapt = [this](const httplib::Request& hreq, httplib::Response& hres) {
        Request req;
        req.method = hreq.method;
        req.path = hreq.path;
        for (const auto& [k, v] : hreq.params)
            req.query[k] = v;
        req.peer = hreq.remote_addr;
        Response r = handle(req);
        hres.status = r.status;
        for (const auto& [k, v] : r.headers)
            hres.set_header(k, v);
        hres.set_content(r.body, r.content_type);
    };
    http_->Get(".*", adapt);
    http_->Post(".*", adapt);

    if (config_.port == 0) {
        bound_port_ = http_->bind_to_any_port(host_);
        if (bound_port_ < 0) {
            http_.reset();
            throw ServerError(ServerError::Code::other, "cannot bind " + host_);
        }
    } else {
        if (!http_->bind_to_port(host_, config_.port)) {
            http_.reset();
            throw ServerError(ServerError::Code::port_in_use, "cannot bind " + host_ + ":" +
                                                                  std::to_string(config_.port));
        }
        bound_port_ = config_.port;
    }
    thread_ = std::thread([this] { http_->listen_after_bind(); });
    http_->wait_until_ready();
}

void DocServer::stop()
{
    if (!http_)
        return;
    http_->stop();
    if (thread_.joinable())
        thread_.join();
    http_.reset();
}

} // namespace pldoc
