#include <gtest/gtest.h>

#include "fbounds/errors.hpp"
#include "fbounds/parse.hpp"

using namespace fbounds;

TEST(Parse, BuiltinForm) {
  const auto f = parse_function("ksat:3");
  EXPECT_EQ(f.arity(), 3);
  EXPECT_EQ(f.popcount(), 7u);
  EXPECT_EQ(f.name(), "ksat:3");
  EXPECT_EQ(parse_function("tribes:2,4").arity(), 8);
}

TEST(Parse, ExpressionXor) {
  const auto f = parse_function("xor(x1,x2)");
  EXPECT_EQ(f.arity(), 2);
  EXPECT_FALSE(f[0]);
  EXPECT_TRUE(f[1]);
  EXPECT_TRUE(f[2]);
  EXPECT_FALSE(f[3]);
}

TEST(Parse, TableForm) {
  const auto f = parse_function("table:2:9");
  EXPECT_TRUE(f[0]);   // (-1,-1)
  EXPECT_FALSE(f[1]);  // (+1,-1)
  EXPECT_FALSE(f[2]);  // (-1,+1)
  EXPECT_TRUE(f[3]);   // (+1,+1)
  const auto dictator = parse_function("table:1:2");
  EXPECT_FALSE(dictator[0]);
  EXPECT_TRUE(dictator[1]);
  EXPECT_THROW(parse_function("table:2:1F"), ArgumentError);
  EXPECT_THROW(parse_function("table:2:G"), ArgumentError);
}

TEST(Parse, ExpressionOperators) {
  const auto f = parse_function("or(and(x1,not(x2)),maj(x1,x2,x3))");
  for (std::uint64_t i = 0; i < 8; ++i) {
    const bool x1 = i & 1, x2 = (i >> 1) & 1, x3 = (i >> 2) & 1;
    EXPECT_EQ(f[i], (x1 && !x2) || (x1 + x2 + x3 >= 2)) << i;
  }
  EXPECT_EQ(parse_function(" and ( x1 , x2 ) ").popcount(), 1u);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_function("nosuch:3"), ParseError);
  EXPECT_THROW(parse_function("and(x1,x3)"), ArgumentError);  // x2 missing
  EXPECT_THROW(parse_function("maj(x1,x2)"), ArgumentError);
  EXPECT_THROW(parse_function("not(x1,x2)"), ArgumentError);
  EXPECT_THROW(parse_function("and(x1,x25)"), CapacityError);
  EXPECT_THROW(parse_function(""), ParseError);
  try {
    parse_function("and(x1,,x2)");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 7u);
    EXPECT_FALSE(e.expected().empty());
  }
  EXPECT_THROW(parse_function("and(x1,x2"), ParseError);
  EXPECT_THROW(parse_function("and(x1,x2) x3"), ParseError);
}
