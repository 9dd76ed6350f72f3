#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace r2usbl::io {

/// Sink for fix sentences. Publishing never blocks: a consumer that cannot
/// take a sentence right away misses it, since the next ping supersedes it.
class FixPublisher {
 public:
  virtual ~FixPublisher() = default;
  virtual void publish(std::string_view sentence) = 0;
  std::size_t dropped() const { return dropped_; }

 protected:
  std::size_t dropped_ = 0;
};

/// Newline-delimited sentences to every connected TCP client.
class TcpPublisher : public FixPublisher {
 public:
  /// Port 0 binds an ephemeral port; see port().
  explicit TcpPublisher(std::uint16_t port);
  ~TcpPublisher() override;
  TcpPublisher(const TcpPublisher&) = delete;
  TcpPublisher& operator=(const TcpPublisher&) = delete;

  void publish(std::string_view sentence) override;
  std::uint16_t port() const { return port_; }
  std::size_t client_count() const { return clients_.size(); }
  /// Accepts pending connections without publishing.
  void poll();

 private:
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::vector<int> clients_;
};

/// Writes to a character device or file opened non-blocking.
class SerialPublisher : public FixPublisher {
 public:
  explicit SerialPublisher(const std::string& path);
  ~SerialPublisher() override;
  SerialPublisher(const SerialPublisher&) = delete;
  SerialPublisher& operator=(const SerialPublisher&) = delete;

  void publish(std::string_view sentence) override;

 private:
  int fd_ = -1;
};

class StreamPublisher : public FixPublisher {
 public:
  explicit StreamPublisher(std::ostream& out) : out_(out) {}
  void publish(std::string_view sentence) override;

 private:
  std::ostream& out_;
};

}  // namespace r2usbl::io
