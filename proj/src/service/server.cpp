#include "ecograde/service/server.hpp"

#include <httplib.h>

namespace ecograde {

HttpServer::HttpServer(const Api& api) : api_(api), server_(std::make_unique<httplib::Server>()) {
    // The library default adds SO_REUSEPORT, which would let a second server share a busy port.
    server_->set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    server_->Get(R"(/.*)", [this](const httplib::Request& req, httplib::Response& res) {
        Query query;
        for (const auto& [key, value] : req.params) {
            query[key] = value;
        }
        ApiResponse out = api_.handle("GET", req.path, query);
        res.status = out.status;
        res.set_content(out.body.dump(), out.content_type);
    });
}

HttpServer::~HttpServer() = default;

bool HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        port_ = server_->bind_to_any_port(host);
        return port_ > 0;
    }
    if (!server_->bind_to_port(host, port)) {
        return false;
    }
    port_ = port;
    return true;
}

void HttpServer::listen() {
    server_->listen_after_bind();
}

void HttpServer::stop() {
    server_->stop();
}

}  // namespace ecograde
