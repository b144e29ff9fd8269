#include "walklift/f2.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <vector>

using namespace walklift;

namespace {

linear_code code_from_rows(std::initializer_list<const char*> rows,
                           std::size_t len) {
  std::vector<word> gens;
  for (const char* r : rows) gens.push_back(word::from_string(r));
  return linear_code(std::move(gens), len);
}

}  // namespace

TEST_CASE("word round-trips between representations") {
  word w = word::from_string("01101");
  CHECK(w.size() == 5);
  CHECK(w.to_string() == "01101");
  CHECK(w.weight() == 3);
  CHECK(!w.get(0));
  CHECK(w.get(1));
  CHECK(w.get(4));

  CHECK(word::from_index(w.to_index(), 5) == w);
  CHECK(word::from_index(0b10110, 5) == w);  // bit i of x = position i

  word c = w.complemented();
  CHECK(c.to_string() == "10010");
  CHECK((w ^ c).weight() == 5);

  word v = w;
  v.flip(0);
  CHECK(v.get(0));
  v.set(0, false);
  CHECK(v == w);

  CHECK(word::from_string("001").lex_less(word::from_string("010")));
  CHECK(!word::from_string("100").lex_less(word::from_string("011")));

  CHECK_THROWS_AS((void)word::from_string("01x"), error);
  CHECK_THROWS_AS((void)(word(3) ^ word(4)), error);
}

TEST_CASE("bias of a word is |n - 2 weight| / n") {
  CHECK(bias(word::from_string("0000")) == rational(1));
  CHECK(bias(word::from_string("0011")) == rational(0));
  CHECK(bias(word::from_string("0111")) == make_rational(1, 2));

  // Exhaustive against the closed form on every word of length up to 12.
  for (std::size_t n = 1; n <= 12; ++n)
    for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x) {
      word w = word::from_index(x, n);
      rational expected =
          abs(rational(1) - rational(2 * bigint(w.weight()), bigint(n)));
      CHECK(bias(w) == expected);
    }
}

TEST_CASE("relative distance counts disagreeing positions") {
  CHECK(relative_distance(word::from_string("0000"), word::from_string("0000")) ==
        rational(0));
  CHECK(relative_distance(word::from_string("0000"), word::from_string("1111")) ==
        rational(1));
  CHECK(relative_distance(word::from_string("1010"), word::from_string("1001")) ==
        make_rational(1, 2));
  CHECK_THROWS_AS((void)relative_distance(word(3), word(4)), error);
}

TEST_CASE("linear code enumeration and encoding") {
  linear_code c = code_from_rows({"1100", "0011"}, 4);
  CHECK(c.dimension() == 2);
  CHECK(c.block_length() == 4);
  CHECK(c.num_codewords() == 4);

  CHECK(c.encode(word::from_string("00")) == word::from_string("0000"));
  CHECK(c.encode(word::from_string("10")) == word::from_string("1100"));
  CHECK(c.encode(word::from_string("11")) == word::from_string("1111"));

  // Gray-order visitor covers every message exactly once and agrees with
  // direct encoding.
  std::vector<bool> seen(4, false);
  c.for_each_codeword([&](std::uint64_t m, const word& cw) {
    CHECK(!seen[m]);
    seen[m] = true;
    CHECK(cw == c.encode(word::from_index(m, 2)));
    CHECK(cw == c.codeword(m));
  });
  CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));

  CHECK_THROWS_AS((void)c.encode(word::from_string("101")), error);
  // Dependent generator rows are rejected at construction.
  CHECK_THROWS_AS(code_from_rows({"1100", "0011", "1111"}, 4), error);
}

TEST_CASE("code bias extremes") {
  CHECK(code_bias(code_from_rows({"011", "101"}, 3)) == make_rational(1, 3));
  CHECK(code_bias(code_from_rows({"0101", "0011"}, 4)) == rational(0));
  CHECK(code_bias(code_from_rows({"11"}, 2)) == rational(1));

  // code_bias is the max pairwise bias of distinct codewords.
  linear_code c = code_from_rows({"1100110011", "0111001100", "0010101010",
                                  "0001100110"},
                                 10);
  rational pairwise(0);
  for (std::uint64_t a = 0; a < c.num_codewords(); ++a)
    for (std::uint64_t b = a + 1; b < c.num_codewords(); ++b) {
      rational v = bias(c.codeword(a) ^ c.codeword(b));
      if (v > pairwise) pairwise = v;
    }
  CHECK(code_bias(c) == pairwise);

  linear_code wide = code_from_rows({"100", "010", "001"}, 3);
  CHECK_THROWS_AS((void)code_bias(wide, 2), error);  // enumeration cap
}

TEST_CASE("list decoding oracle returns exactly the ball") {
  linear_code rep3 = code_from_rows({"111"}, 3);
  auto hits = brute_force_list_decode(rep3, word::from_string("001"),
                                      make_rational(1, 3));
  REQUIRE(hits.size() == 1);
  CHECK(hits[0] == word::from_string("000"));

  hits = brute_force_list_decode(rep3, word::from_string("001"), rational(1));
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].lex_less(hits[1]));  // sorted output

  // 0100 sits at distance exactly 1/4 from three of the four codewords.
  linear_code c4 = code_from_rows({"0101", "0011"}, 4);
  hits = brute_force_list_decode(c4, word::from_string("0100"),
                                 make_rational(1, 4));
  REQUIRE(hits.size() == 3);
  CHECK(hits[0] == word::from_string("0000"));
  CHECK(hits[1] == word::from_string("0101"));
  CHECK(hits[2] == word::from_string("0110"));

  // A codeword with a radius below half the distance is its own unique hit.
  hits = brute_force_list_decode(c4, word::from_string("0011"),
                                 make_rational(1, 4));
  REQUIRE(hits.size() == 1);
  CHECK(hits[0] == word::from_string("0011"));

  // Monotone in the radius: smaller balls are contained in larger ones.
  for (std::uint64_t y = 0; y < 16; ++y) {
    word received = word::from_index(y, 4);
    auto small = brute_force_list_decode(c4, received, make_rational(1, 4));
    auto large = brute_force_list_decode(c4, received, make_rational(1, 2));
    for (const word& z : small)
      CHECK(std::find(large.begin(), large.end(), z) != large.end());
  }
}

TEST_CASE("unique decoding oracle with strict half-distance radius") {
  linear_code rep3 = code_from_rows({"111"}, 3);
  CHECK(brute_force_unique_decode(rep3, word::from_string("100")) ==
        word::from_string("000"));
  CHECK(brute_force_unique_decode(rep3, word::from_string("000")) ==
        word::from_string("000"));
  // Exact tie at the radius is a failure, not an arbitrary pick.
  linear_code rep4 = code_from_rows({"1111"}, 4);
  CHECK(!brute_force_unique_decode(rep4, word::from_string("1100")));

  // Anything strictly inside half the minimum distance decodes to the
  // planted codeword; exhaustive over all received words of length 7.
  linear_code rep7 = code_from_rows({"1111111"}, 7);
  for (std::uint64_t y = 0; y < 128; ++y) {
    word received = word::from_index(y, 7);
    std::size_t w = received.weight();
    if (w == 3 || w == 4) continue;  // outside the strict radius of both
    word expected = w < 3 ? word(7) : word(7).complemented();
    CHECK(brute_force_unique_decode(rep7, received) == expected);
  }
}

TEST_CASE("random balanced code search is seeded and certified") {
  // A 1-dimensional bias-0 code of length 2 exists (generator 01 or 10).
  linear_code c1 = random_balanced_code(1, 2, rational(0), 3);
  CHECK(c1.dimension() == 1);
  CHECK(code_bias(c1) == rational(0));

  linear_code c2 = random_balanced_code(2, 4, rational(0), 1);
  CHECK(code_bias(c2) == rational(0));

  linear_code c3 = random_balanced_code(4, 16, make_rational(1, 4), 7);
  CHECK(code_bias(c3) <= make_rational(1, 4));

  // Deterministic under the seed.
  linear_code again = random_balanced_code(4, 16, make_rational(1, 4), 7);
  CHECK(c3.generator() == again.generator());

  // A 2-dimensional length-2 code always contains the all-ones word.
  CHECK_THROWS_AS((void)random_balanced_code(2, 2, rational(0), 5, 64), error);
}
