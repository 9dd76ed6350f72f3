#include "r2usbl/publisher.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <netinet/in.h>
#include <ostream>
#include <sys/socket.h>
#include <unistd.h>

#include <fmt/format.h>

#include "r2usbl/error.hpp"

namespace r2usbl::io {

TcpPublisher::TcpPublisher(std::uint16_t port) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_NONBLOCK | SOCK_CLOEXEC, 0);
  if (listen_fd_ < 0) throw Error(Errc::IoError, fmt::format("socket: {}", std::strerror(errno)));
  const int yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listen_fd_, 8) < 0) {
    const std::string why = std::strerror(errno);
    ::close(listen_fd_);
    throw Error(Errc::IoError, fmt::format("cannot listen on port {}: {}", port, why));
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpPublisher::~TcpPublisher() {
  for (int fd : clients_) ::close(fd);
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void TcpPublisher::poll() {
  for (;;) {
    const int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_NONBLOCK | SOCK_CLOEXEC);
    if (fd < 0) break;
    clients_.push_back(fd);
  }
}

void TcpPublisher::publish(std::string_view sentence) {
  poll();
  std::vector<int> alive;
  for (int fd : clients_) {
    const ssize_t n = ::send(fd, sentence.data(), sentence.size(), MSG_DONTWAIT | MSG_NOSIGNAL);
    if (n == static_cast<ssize_t>(sentence.size())) {
      alive.push_back(fd);
    } else if (n >= 0 || errno == EAGAIN || errno == EWOULDBLOCK) {
      // slow consumer: this sentence is lost for it
      ++dropped_;
      alive.push_back(fd);
    } else {
      ::close(fd);
    }
  }
  clients_ = std::move(alive);
}

SerialPublisher::SerialPublisher(const std::string& path) {
  fd_ = ::open(path.c_str(), O_WRONLY | O_NONBLOCK | O_NOCTTY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) throw Error(Errc::IoError, fmt::format("cannot open '{}': {}", path, std::strerror(errno)));
}

SerialPublisher::~SerialPublisher() {
  if (fd_ >= 0) ::close(fd_);
}

void SerialPublisher::publish(std::string_view sentence) {
  const ssize_t n = ::write(fd_, sentence.data(), sentence.size());
  if (n != static_cast<ssize_t>(sentence.size())) ++dropped_;
}

void StreamPublisher::publish(std::string_view sentence) {
  out_ << sentence;
  out_.flush();
}

}  // namespace r2usbl::io
