#pragma once

#include <memory>
#include <string>

#include "ecograde/service/api.hpp"

namespace httplib {
class Server;
}

namespace ecograde {

/// HTTP/1.1 front end that forwards GET requests to an Api.
class HttpServer {
public:
    explicit HttpServer(const Api& api);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds without serving. Port 0 picks a free port. Returns false when the port is busy.
    bool bind(const std::string& host, int port);
    int port() const noexcept { return port_; }

    /// Serves until stop() is called from another thread.
    void listen();
    void stop();

private:
    const Api& api_;
    std::unique_ptr<httplib::Server> server_;
    int port_ = 0;
};

}  // namespace ecograde
