// Copyright 2026 The Projlang Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <netdb.h>
#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include "projlang/embedding.h"

namespace projlang {

namespace {

void WriteAll(int fd, const std::string& data) {
  size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw EmbeddingError(std::string("transport failure: ") +
                           std::strerror(errno));
    }
    sent += static_cast<size_t>(n);
  }
}

// Reads one '\n'-terminated line, keeping leftovers in `buffer`. Returns
// false on a clean EOF with nothing buffered.
bool ReadLine(int fd, std::string& buffer, std::string& line) {
  while (true) {
    size_t nl = buffer.find('\n');
    if (nl != std::string::npos) {
      line = buffer.substr(0, nl);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      buffer.erase(0, nl + 1);
      return true;
    }
    char chunk[4096];
    ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw EmbeddingError(std::string("transport failure: ") +
                           std::strerror(errno));
    }
    if (n == 0) {
      if (buffer.empty()) return false;
      throw EmbeddingError("transport failure: connection closed mid-line");
    }
    buffer.append(chunk, static_cast<size_t>(n));
  }
}

std::string FormatVector(const EmbeddingVector& v) {
  std::string out;
  char buf[32];
  for (double x : v) {
    auto r = std::to_chars(buf, buf + sizeof(buf), x);
    out.push_back(' ');
    out.append(buf, r.ptr);
  }
  return out;
}

int ConnectUnix(const std::string& path) {
  int fd = ::socket(AF_UNIX, SOCK_STREAM, 0);
  if (fd < 0) throw EmbeddingError("socket: " + std::string(std::strerror(errno)));
  sockaddr_un addr{};
  addr.sun_family = AF_UNIX;
  if (path.size() >= sizeof(addr.sun_path)) {
    ::close(fd);
    throw EmbeddingError("socket path too long: " + path);
  }
  std::memcpy(addr.sun_path, path.c_str(), path.size() + 1);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    int err = errno;
    ::close(fd);
    throw EmbeddingError("transport failure: connect " + path + ": " +
                         std::strerror(err));
  }
  return fd;
}

int ConnectTcp(const std::string& host, const std::string& port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &res); rc != 0) {
    throw EmbeddingError("transport failure: resolve " + host + ": " +
                         ::gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    throw EmbeddingError("transport failure: connect " + host + ":" + port);
  }
  return fd;
}

}  // namespace

ServiceEmbedder::ServiceEmbedder(int fd, std::string mask_token)
    : fd_(fd), mask_token_(std::move(mask_token)) {
  try {
    std::string reply = Request("HELLO");
    std::istringstream in(reply);
    std::string word;
    size_t d = 0;
    if (!(in >> word >> d) || word != "DIM" || d == 0) {
      throw EmbeddingError("bad handshake reply: " + reply);
    }
    dim_ = d;
  } catch (...) {
    ::close(fd_);
    throw;
  }
}

ServiceEmbedder::~ServiceEmbedder() { ::close(fd_); }

std::unique_ptr<ServiceEmbedder> ServiceEmbedder::Connect(
    const std::string& endpoint) {
  if (endpoint.rfind("unix:", 0) == 0) {
    return std::make_unique<ServiceEmbedder>(ConnectUnix(endpoint.substr(5)));
  }
  std::string hostport =
      endpoint.rfind("tcp:", 0) == 0 ? endpoint.substr(4) : endpoint;
  size_t colon = hostport.rfind(':');
  if (colon == std::string::npos) {
    throw EmbeddingError("bad service endpoint '" + endpoint + "'");
  }
  return std::make_unique<ServiceEmbedder>(
      ConnectTcp(hostport.substr(0, colon), hostport.substr(colon + 1)));
}

std::string ServiceEmbedder::Request(const std::string& line) const {
  std::lock_guard<std::mutex> lock(mu_);
  WriteAll(fd_, line + "\n");
  std::string reply;
  if (!ReadLine(fd_, buffer_, reply)) {
    throw EmbeddingError("transport failure: server closed the connection");
  }
  return reply;
}

EmbeddingVector ServiceEmbedder::Embed(
    std::span<const std::string> tokens) const {
  if (tokens.empty()) throw EmbeddingError("cannot embed an empty sequence");
  std::string reply = Request("EMBED " + JoinTokens(tokens));
  if (reply.rfind("ERR", 0) == 0) {
    throw EmbeddingError("service error: " +
                         (reply.size() > 4 ? reply.substr(4) : reply));
  }
  if (reply.rfind("OK", 0) != 0) {
    throw EmbeddingError("bad service reply: " + reply);
  }
  EmbeddingVector v;
  std::istringstream in(reply.substr(2));
  std::string word;
  while (in >> word) {
    double x = 0.0;
    auto r = std::from_chars(word.data(), word.data() + word.size(), x);
    if (r.ec != std::errc() || r.ptr != word.data() + word.size() ||
        !std::isfinite(x)) {
      throw EmbeddingError("bad number in service reply: " + word);
    }
    v.push_back(x);
  }
  if (v.size() != dim_) {
    throw EmbeddingError("dimension mismatch: service returned " +
                         std::to_string(v.size()) + " values, expected " +
                         std::to_string(dim_));
  }
  return v;
}

void ServeEmbeddingConnection(int fd, const EmbeddingProvider& provider) {
  std::string buffer, line;
  while (ReadLine(fd, buffer, line)) {
    std::string reply;
    if (line == "HELLO") {
      reply = "DIM " + std::to_string(provider.dim());
    } else if (line.rfind("EMBED ", 0) == 0) {
      std::istringstream in(line.substr(6));
      Tokens tokens;
      std::string t;
      while (in >> t) tokens.push_back(t);
      try {
        reply = "OK" + FormatVector(provider.Embed(tokens));
      } catch (const EmbeddingError& e) {
        reply = std::string("ERR ") + e.what();
      }
    } else {
      reply = "ERR unknown request";
    }
    WriteAll(fd, reply + "\n");
  }
}

}  // namespace projlang
