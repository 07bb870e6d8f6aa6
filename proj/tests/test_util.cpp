// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "fixture.hpp"
#include "shotad/util.hpp"

using namespace shotad;

TEST_CASE("fnv1a matches published vectors") {
  // Offset basis and the standard single-byte test vector.
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("fnv1a chains like one concatenated pass") {
  const auto h1 = fnv1a("world", fnv1a("hello"));
  CHECK(h1 == fnv1a("helloworld"));
}

TEST_CASE("hex64 is zero padded") {
  CHECK(hex64(0) == "0000000000000000");
  CHECK(hex64(0xdeadbeefULL) == "00000000deadbeef");
  CHECK(hex64(~0ULL) == "ffffffffffffffff");
}

TEST_CASE("bounded_rand is deterministic and in range") {
  std::mt19937_64 rng1(42), rng2(42);
  for (int i = 0; i < 200; ++i) {
    const auto a = bounded_rand(rng1, 17);
    const auto b = bounded_rand(rng2, 17);
    CHECK(a == b);
    CHECK(a < 17);
  }
}

TEST_CASE("sample_without_replacement basics") {
  const std::vector<std::string> pool = {"a", "b", "c", "d", "e"};

  SUBCASE("k below pool size gives distinct elements") {
    const auto s = sample_without_replacement(pool, 3, 7);
    CHECK(s.size() == 3);
    const std::set<std::string> uniq(s.begin(), s.end());
    CHECK(uniq.size() == 3);
    for (const auto& v : s)
      CHECK(std::find(pool.begin(), pool.end(), v) != pool.end());
  }

  SUBCASE("k at or above pool size returns the pool in order") {
    CHECK(sample_without_replacement(pool, 5, 3) == pool);
    CHECK(sample_without_replacement(pool, 10, 99) == pool);
  }

  SUBCASE("same seed same draw") {
    CHECK(sample_without_replacement(pool, 3, 11) ==
          sample_without_replacement(pool, 3, 11));
  }
}

TEST_CASE("string helpers") {
  CHECK(lowercase("AbC 12!") == "abc 12!");
  CHECK(trim("  x  ") == "x");
  CHECK(trim("\t\n") == "");
  CHECK(split_whitespace("  a  b\tc\n") ==
        std::vector<std::string>{"a", "b", "c"});
  const std::vector<std::string> two = {"a", "b"};
  const std::vector<std::string> none;
  CHECK(join(two, ", ") == "a, b");
  CHECK(join(none, ",") == "");
}

TEST_CASE("contains_word honours word boundaries") {
  CHECK(contains_word("alice walks away", "alice"));
  CHECK_FALSE(contains_word("malice walks away", "alice"));
  CHECK(contains_word("so, bob!", "bob"));
  CHECK_FALSE(contains_word("bobby waves", "bob"));
}

TEST_CASE("base64 round trips reference strings") {
  CHECK(base64_encode("") == "");
  CHECK(base64_encode("f") == "Zg==");
  CHECK(base64_encode("fo") == "Zm8=");
  CHECK(base64_encode("foo") == "Zm9v");
  CHECK(base64_encode("foobar") == "Zm9vYmFy");
}

TEST_CASE("atomic_write_file leaves no temp droppings") {
  shotad::testfix::TempDir tmp("util");
  const auto p = tmp.path() / "x.txt";
  atomic_write_file(p, "one");
  atomic_write_file(p, "two");
  CHECK(read_text_file(p) == "two");
  int entries = 0;
  for (const auto& e : std::filesystem::directory_iterator(tmp.path())) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);
}
