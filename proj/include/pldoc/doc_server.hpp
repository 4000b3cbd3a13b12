#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "pldoc/doc_db.hpp"

namespace httplib {
class Server;
}

namespace pldoc {

struct ServerConfig {
    int port = 4000;                // 0 picks a free port
    std::string host;               // empty: loopback unless the allow list reaches further
    std::vector<std::string> allow = {"127.0.0.1", "::1"};
    std::string editor_command;     // empty: from VISUAL / EDITOR
    bool public_only_default = true;
    std::filesystem::path assets_dir; // optional extra files below /assets, e.g. ui.js
    bool stamp_generation = false;
};

struct Request {
    std::string method = "GET";
    std::string path;
    std::map<std::string, std::string> query;
    std::string peer = "127.0.0.1";
};

struct Response {
    int status = 200;
    std::string content_type = "text/html; charset=utf-8";
    std::string body;
    std::map<std::string, std::string> headers;
};

class ServerError : public std::runtime_error {
public:
    enum class Code { port_in_use, bind_denied, other };
    ServerError(Code code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    Code code() const { return code_; }

private:
    Code code_;
};

bool is_loopback(std::string_view address);

/// Patterns are exact addresses, a prefix ending in `*` ("192.168.*"), or "*".
bool peer_allowed(const std::vector<std::string>& allow, std::string_view peer);

/// "$VISUAL +{line} {file}", falling back to $EDITOR and then vi.
std::string default_editor_command();

/// Splits an editor template into argv, honouring single and double quotes,
/// and substitutes {file} and {line}.
std::vector<std::string> editor_argv(std::string_view templ, const std::string& file, int line);

/// Starts `argv` without waiting for it; false when it cannot be started.
bool spawn_detached(const std::vector<std::string>& argv);

class DocServer {
public:
    using Spawner = std::function<bool(const std::vector<std::string>& argv)>;

    DocServer(ServerConfig config, std::shared_ptr<DocHandle> docs);
    ~DocServer();

    DocServer(const DocServer&) = delete;
    DocServer& operator=(const DocServer&) = delete;

    /// Serves one request against the current snapshot. Thread-safe.
    Response handle(const Request& req) const;

    /// Binds and serves on a background thread. Throws ServerError.
    void start();
    void stop();
    int port() const { return bound_port_; }
    const std::string& host() const { return host_; }

    void set_spawner(Spawner s) { spawner_ = std::move(s); }
    DocHandle& docs() { return *docs_; }

private:
    Response doc_page(const Request& req, std::string_view rel) const;
    Response source_page(const Request& req, std::string_view rel) const;
    Response search_page(const Request& req) const;
    Response api_search(const Request& req) const;
    Response edit(const Request& req) const;
    Response reload(const Request& req) const;
    Response asset(std::string_view name) const;

    ServerConfig config_;
    std::shared_ptr<DocHandle> docs_;
    Spawner spawner_;
    std::unique_ptr<httplib::Server> http_;
    std::thread thread_;
    int bound_port_ = 0;
    std::string host_;
};

} // namespace pldoc
