#include <doctest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "errc.hpp"
#include "r2usbl/publisher.hpp"
#include "r2usbl/sentence.hpp"

using namespace r2usbl;

namespace {

int connect_to(std::uint16_t port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
  return fd;
}

std::string read_some(int fd, std::size_t want) {
  std::string got;
  while (got.size() < want) {
    pollfd p{fd, POLLIN, 0};
    if (::poll(&p, 1, 2000) <= 0) break;
    char buf[512];
    const ssize_t n = ::recv(fd, buf, sizeof buf, 0);
    if (n <= 0) break;
    got.append(buf, static_cast<std::size_t>(n));
  }
  return got;
}

}  // namespace

TEST_CASE("tcp publisher: loopback clients receive every sentence") {
  io::TcpPublisher pub(0);
  REQUIRE(pub.port() != 0);
  const int a = connect_to(pub.port());
  const int b = connect_to(pub.port());
  for (int i = 0; i < 50 && pub.client_count() < 2; ++i) {
    pub.poll();
    ::usleep(2000);
  }
  REQUIRE(pub.client_count() == 2);

  fix::PositionFix f;
  f.slant_range = 75;
  const auto s1 = sentence::format_fix_sentence(f);
  f.slant_range = 76;
  const auto s2 = sentence::format_fix_sentence(f);
  pub.publish(s1);
  pub.publish(s2);
  CHECK(read_some(a, s1.size() + s2.size()) == s1 + s2);
  CHECK(read_some(b, s1.size() + s2.size()) == s1 + s2);
  CHECK(pub.dropped() == 0);

  // a client that goes away is forgotten
  ::close(a);
  for (int i = 0; i < 5; ++i) {
    pub.publish(s1);
    ::usleep(2000);
  }
  CHECK(pub.client_count() == 1);
  CHECK(sentence::parse_fix_sentence(read_some(b, s1.size()).substr(0, s1.size())).slant_range == 75);
  ::close(b);
}

TEST_CASE("tcp publisher: no clients is fine") {
  io::TcpPublisher pub(0);
  CHECK_NOTHROW(pub.publish("$R2UBL*00\r\n"));
  CHECK(pub.client_count() == 0);
}

TEST_CASE("tcp publisher: port already taken") {
  io::TcpPublisher first(0);
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = 0;
  REQUIRE(::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
  REQUIRE(::listen(fd, 1) == 0);
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  CHECK_ERRC(io::TcpPublisher(ntohs(addr.sin_port)), Errc::IoError);
  ::close(fd);
}

TEST_CASE("serial publisher: appends to a device path") {
  const auto path = std::filesystem::temp_directory_path() / "r2usbl_serial_test.txt";
  std::filesystem::remove(path);
  const auto s = sentence::format_fix_sentence({});
  {
    io::SerialPublisher pub(path.string());
    pub.publish(s);
    pub.publish(s);
    CHECK(pub.dropped() == 0);
  }
  std::ifstream in(path, std::ios::binary);
  std::stringstream got;
  got << in.rdbuf();
  CHECK(got.str() == s + s);
  std::filesystem::remove(path);
  CHECK_ERRC(io::SerialPublisher("/nonexistent-dir/tty"), Errc::IoError);
}

TEST_CASE("stream publisher") {
  std::ostringstream out;
  io::StreamPublisher pub(out);
  pub.publish("a");
  pub.publish("b");
  CHECK(out.str() == "ab");
}
