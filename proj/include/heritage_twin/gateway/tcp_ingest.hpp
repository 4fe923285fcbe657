#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <list>
#include <mutex>
#include <string>
#include <thread>

#include "heritage_twin/gateway/gateway.hpp"

namespace htwin {

// Line-oriented TCP ingestion: one telemetry frame per line in, one ack line
// out (`{"accepted":..}` or `{"error":"CODE","detail":"..."}`).
class TcpIngestServer {
public:
    // port 0 binds an ephemeral port; see port().
    TcpIngestServer(Gateway& gw, std::uint16_t port, const std::string& bind_address = "127.0.0.1") : gw_(gw) {
        fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd_ < 0) throw IoError(std::string("socket: ") + std::strerror(errno));
        int one = 1;
        ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(port);
        if (::inet_pton(AF_INET, bind_address.c_str(), &addr.sin_addr) != 1) {
            ::close(fd_);
            throw ConfigError("bad bind address '" + bind_address + "'");
        }
        if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(fd_, 16) < 0) {
            const std::string err = std::strerror(errno);
            ::close(fd_);
            throw IoError("cannot listen on port " + std::to_string(port) + ": " + err);
        }
        socklen_t len = sizeof addr;
        ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
        port_ = ntohs(addr.sin_port);
    }

    TcpIngestServer(const TcpIngestServer&) = delete;
    TcpIngestServer& operator=(const TcpIngestServer&) = delete;

    ~TcpIngestServer() {
        stop();
        if (fd_ >= 0) ::close(fd_);
    }

    std::uint16_t port() const { return port_; }

    // Blocks until stop() is called (from another thread or a signal path).
    void serve() {
        while (!stopping_) {
            pollfd p{fd_, POLLIN, 0};
            if (::poll(&p, 1, 100) <= 0) continue;
            const int client = ::accept(fd_, nullptr, nullptr);
            if (client < 0) continue;
            std::lock_guard lock(mutex_);
            workers_.emplace_back([this, client] { serve_client(client); });
        }
        std::list<std::thread> workers;
        {
            std::lock_guard lock(mutex_);
            workers.swap(workers_);
        }
        for (auto& t : workers) t.join();
    }

    void stop() { stopping_ = true; }

private:
    void serve_client(int client) {
        std::string buffer;
        char chunk[4096];
        while (!stopping_) {
            pollfd p{client, POLLIN, 0};
            const int ready = ::poll(&p, 1, 100);
            if (ready == 0) continue;
            if (ready < 0) break;
            const auto n = ::recv(client, chunk, sizeof chunk, 0);
            if (n <= 0) break;
            buffer.append(chunk, static_cast<std::size_t>(n));
            std::size_t nl;
            while ((nl = buffer.find('\n')) != std::string::npos) {
                std::string line = buffer.substr(0, nl);
                buffer.erase(0, nl + 1);
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (line.empty()) continue;
                std::string reply = respond_line(gw_, line) + "\n";
                if (::send(client, reply.data(), reply.size(), MSG_NOSIGNAL) < 0) {
                    ::close(client);
                    return;
                }
            }
        }
        ::close(client);
    }

    Gateway& gw_;
    int fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> stopping_{false};
    std::mutex mutex_;
    std::list<std::thread> workers_;
};

} // namespace htwin
