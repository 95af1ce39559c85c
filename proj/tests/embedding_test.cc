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

#include <sys/socket.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "projlang/embedding.h"
#include "projlang/random.h"
#include "test_util.h"

namespace projlang {
namespace {

using testing::DataPath;

EmbeddingVector Embed(const EmbeddingProvider& p, const std::string& text) {
  Tokens t = Tokenize(text);
  return p.Embed(t);
}

TEST_CASE("normal sampler is deterministic and roughly standard") {
  NormalSampler a(42), b(42), c(43);
  double sum = 0, sq = 0;
  const int n = 20000;
  bool differs = false;
  for (int i = 0; i < n; ++i) {
    double x = a.Next();
    CHECK(x == b.Next());
    if (x != c.Next()) differs = true;
    sum += x;
    sq += x * x;
  }
  CHECK(differs);
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("reference embedder is deterministic") {
  ReferenceEmbedder e(16, 1);
  CHECK(Embed(e, "red") == Embed(e, "red"));
  ReferenceEmbedder same(16, 1);
  CHECK(Embed(e, "red") == Embed(same, "red"));
  ReferenceEmbedder other(16, 2);
  CHECK(Embed(e, "red") != Embed(other, "red"));
  CHECK(Embed(e, "red") != Embed(e, "blue"));
  CHECK(Embed(e, "red").size() == 16);
}

TEST_CASE("synonyms share a class") {
  ReferenceEmbedder e(32, 0, {{"walk", "go"}});
  CHECK(Embed(e, "walk") == Embed(e, "go"));
  CHECK(Embed(e, "walk to the red ball") == Embed(e, "go to the red ball"));
  CHECK(e.ClassOf("walk") == "go");
  CHECK(e.ClassOf("run") == "run");
}

TEST_CASE("sentence vector is the token mean") {
  ReferenceEmbedder e(24, 5);
  auto a = Embed(e, "red"), b = Embed(e, "ball"), ab = Embed(e, "red ball");
  for (size_t i = 0; i < ab.size(); ++i) {
    CHECK(std::abs(ab[i] - (a[i] + b[i]) / 2) <= 1e-9);
  }
  // Order does not matter, bit for bit.
  CHECK(Embed(e, "go to the red ball") == Embed(e, "the ball red to go"));
}

TEST_CASE("mask tokens contribute zero vectors") {
  ReferenceEmbedder e(8, 0);
  auto go = Embed(e, "go");
  Tokens masked{"go", "[MASK]"};
  auto v = e.Embed(masked);
  for (size_t i = 0; i < v.size(); ++i) CHECK(v[i] == doctest::Approx(go[i] / 2));
  Tokens only{"[MASK]"};
  auto z = e.Embed(only);
  for (double x : z) CHECK(x == 0.0);
  Tokens none;
  CHECK_THROWS_AS(e.Embed(none), EmbeddingError);
}

TEST_CASE("cosine distance") {
  std::vector<double> x{1, 0}, y{0, 1};
  CHECK(CosineDistance(x, y) == doctest::Approx(1.0));
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> u(1 + rng() % 20);
    for (double& c : u) c = n(rng);
    std::vector<double> neg(u);
    for (double& c : neg) c = -c;
    CHECK(CosineDistance(u, u) == 0.0);
    CHECK(CosineDistance(u, neg) == 2.0);
    std::vector<double> v(u.size());
    for (double& c : v) c = n(rng);
    double d = CosineDistance(u, v);
    CHECK(d >= 0.0);
    CHECK(d <= 2.0);
    CHECK(d == CosineDistance(v, u));
  }
  std::vector<double> zero{0, 0};
  auto r = CosineDistanceChecked(zero, x);
  CHECK(r.zero_norm);
  CHECK(r.distance == 1.0);
  CHECK_FALSE(CosineDistanceChecked(x, y).zero_norm);
  std::vector<double> three{1, 2, 3};
  CHECK_THROWS_AS(CosineDistance(x, three), EmbeddingError);
}

TEST_CASE("file provider") {
  auto f = FileEmbedder::Parse(
      "dim 3\n"
      "red ball\t1 2 3\n"
      "go\t-1 0 0.5\n");
  CHECK(f->dim() == 3);
  CHECK(f->size() == 2);
  CHECK(Embed(*f, "red ball") == EmbeddingVector{1, 2, 3});
  CHECK(Embed(*f, "go") == EmbeddingVector{-1, 0, 0.5});
  try {
    Embed(*f, "blue ball");
    FAIL("expected a lookup error");
  } catch (const EmbeddingError& e) {
    CHECK(std::string(e.what()).find("no embedding for: blue ball") !=
          std::string::npos);
  }
  CHECK_THROWS_AS(FileEmbedder::Parse("dim 4\na\t1 2 3 4\nb\t1 2 3 4 5\n"),
                  EmbeddingError);
  CHECK_THROWS_AS(FileEmbedder::Parse("dim 2\na 1 2\n"), EmbeddingError);
  CHECK_THROWS_AS(FileEmbedder::Parse("dim 2\na\t1 x\n"), EmbeddingError);
  CHECK_THROWS_AS(FileEmbedder::Parse("a\t1 2\n"), EmbeddingError);
  CHECK_THROWS_AS(FileEmbedder::Load("/nonexistent/file"), EmbeddingError);
}

TEST_CASE("provider specs") {
  auto c = ParseProviderSpec("reference");
  CHECK(c.kind == EmbeddingProviderConfig::Kind::kReference);
  CHECK(c.dim == 64);
  c = ParseProviderSpec("reference:dim=8,seed=3,mask=<m>", 11);
  CHECK(c.dim == 8);
  CHECK(c.seed == 3);
  CHECK(c.mask_token == "<m>");
  CHECK(ParseProviderSpec("reference", 11).seed == 11);
  c = ParseProviderSpec("file:/tmp/x.emb");
  CHECK(c.kind == EmbeddingProviderConfig::Kind::kFile);
  CHECK(c.location == "/tmp/x.emb");
  CHECK_THROWS_AS(ParseProviderSpec("bert"), EmbeddingError);
  CHECK_THROWS_AS(ParseProviderSpec("reference:dim=0"), EmbeddingError);
  CHECK_THROWS_AS(ParseProviderSpec("reference:size=3"), EmbeddingError);

  auto p = MakeProvider(ParseProviderSpec(
      "reference:dim=16,synonyms=" + DataPath("g1.synonyms")));
  CHECK(p->dim() == 16);
  CHECK(Embed(*p, "walk to the red ball") == Embed(*p, "go to the red ball"));
}

TEST_CASE("service provider over a socket pair") {
  int fds[2];
  REQUIRE(socketpair(AF_UNIX, SOCK_STREAM, 0, fds) == 0);
  ReferenceEmbedder backend(12, 4);
  std::thread server([&] { ServeEmbeddingConnection(fds[1], backend); });
  {
    ServiceEmbedder client(fds[0]);
    CHECK(client.dim() == 12);
    CHECK(Embed(client, "go to the red ball") ==
          Embed(backend, "go to the red ball"));
    CHECK(Embed(client, "door") == Embed(backend, "door"));
    Tokens none;
    CHECK_THROWS_AS(client.Embed(none), EmbeddingError);
  }
  server.join();
}

TEST_CASE("service provider reports transport failure") {
  int fds[2];
  REQUIRE(socketpair(AF_UNIX, SOCK_STREAM, 0, fds) == 0);
  close(fds[1]);
  CHECK_THROWS_AS(ServiceEmbedder{fds[0]}, EmbeddingError);
  CHECK_THROWS_AS(ServiceEmbedder::Connect("unix:/nonexistent/sock"),
                  EmbeddingError);
}

}  // namespace
}  // namespace projlang
