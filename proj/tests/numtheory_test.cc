/*
 * Copyright 2026 The ptes Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ptes/numtheory.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "ptes/error.h"

namespace ptes::numtheory {
namespace {

bool TrialDivisionPrime(unsigned long n, unsigned long limit = 10000) {
  if (n < 2) return false;
  for (unsigned long d = 2; d <= limit && d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

unsigned long NaiveModExp(unsigned long b, unsigned long e, unsigned long m) {
  unsigned long acc = 1 % m;
  for (unsigned long i = 0; i < e; ++i) acc = acc * b % m;
  return acc;
}

TEST(GenPrimeTest, ThreeBitPrimes) {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    BigNat p = GenPrime(3, rng);
    EXPECT_TRUE(p == 5 || p == 7) << p;
  }
}

TEST(GenPrimeTest, SixteenBitSeed42PassesTrialDivision) {
  Rng rng(42);
  BigNat p = GenPrime(16, rng);
  EXPECT_EQ(BitLength(p), 16u);
  EXPECT_TRUE(TrialDivisionPrime(p.get_ui()));
  Rng check(1);
  EXPECT_TRUE(IsProbablePrime(p, check, 64));
}

TEST(GenPrimeTest, DeterministicForSeed) {
  Rng a(99), b(99);
  EXPECT_EQ(GenPrime(256, a), GenPrime(256, b));
}

TEST(GenPrimeTest, ExactBitLength) {
  Rng rng(3);
  for (unsigned long bits : {3ul, 4ul, 5ul, 17ul, 64ul, 127ul, 512ul}) {
    EXPECT_EQ(BitLength(GenPrime(bits, rng)), bits);
  }
  EXPECT_THROW(GenPrime(2, rng), Error);
}

TEST(GenPrimeTest, ProductHasTwoBitsOrTwoBitsMinusOne) {
  Rng rng(11);
  for (unsigned long bits : {8ul, 33ul, 100ul, 256ul}) {
    for (int i = 0; i < 20; ++i) {
      const unsigned long len = BitLength(GenPrime(bits, rng) * GenPrime(bits, rng));
      EXPECT_TRUE(len == 2 * bits || len == 2 * bits - 1) << len;
    }
  }
}

TEST(IsProbablePrimeTest, MatchesTrialDivisionBelow20000) {
  Rng rng(5);
  for (unsigned long n = 0; n < 20000; ++n) {
    ASSERT_EQ(IsProbablePrime(n, rng), TrialDivisionPrime(n)) << n;
  }
}

TEST(IsProbablePrimeTest, RejectsCarmichaelNumbers) {
  Rng rng(5);
  for (unsigned long n : {561ul, 41041ul, 825265ul, 321197185ul}) {
    EXPECT_FALSE(IsProbablePrime(n, rng)) << n;
  }
  // 2^127 - 1 is prime; 2^128 + 1 is not.
  BigNat mersenne = (BigNat(1) << 127) - 1;
  EXPECT_TRUE(IsProbablePrime(mersenne, rng));
  EXPECT_FALSE(IsProbablePrime((BigNat(1) << 128) + 1, rng));
}

TEST(ModExpTest, Examples) {
  EXPECT_EQ(ModExp(2, 10, 1000), 24);
  EXPECT_EQ(ModExp(12345, 0, 97), 1);
  EXPECT_EQ(ModExp(2, 35, 1225), 18);
}

TEST(ModExpTest, ExhaustiveAgainstMultiplyLoop) {
  for (unsigned long m = 2; m < 100; ++m) {
    for (unsigned long b = 0; b < 50; ++b) {
      for (unsigned long e = 0; e < 50; ++e) {
        ASSERT_EQ(ModExp(b, e, m), NaiveModExp(b, e, m))
            << b << "^" << e << " mod " << m;
      }
    }
  }
}

TEST(ModExpTest, SmallModulusIsDomainError) {
  try {
    ModExp(3, 4, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomainError);
  }
}

TEST(ModInvTest, Examples) {
  EXPECT_EQ(ModInv(12, 35), 3);
  EXPECT_EQ(ModInv(1, 1000003), 1);
  try {
    ModInv(6, 9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoInverse);
  }
}

TEST(ModInvTest, RandomCoprimePairs) {
  Rng rng(17);
  int checked = 0;
  while (checked < 1000) {
    BigNat n = rng.Bits(200) + 2;
    BigNat a = rng.Below(n);
    if (Gcd(a, n) != 1) continue;
    BigNat x = ModInv(a, n);
    ASSERT_EQ(a * x % n, 1 % n);
    ++checked;
  }
}

TEST(GcdLcmTest, Examples) {
  EXPECT_EQ(Gcd(35, 24), 1);
  EXPECT_EQ(Lcm(4, 6), 12);
  EXPECT_EQ(Gcd(42, 0), 42);
  EXPECT_THROW(Lcm(0, 5), Error);
}

TEST(GcdLcmTest, ProductIdentity) {
  Rng rng(23);
  for (int i = 0; i < 500; ++i) {
    BigNat a = rng.Bits(90) + 1, b = rng.Bits(70) + 1;
    EXPECT_EQ(Gcd(a, b) * Lcm(a, b), a * b);
  }
}

TEST(SampleCoprimeTest, UnitsOfFour) {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    BigNat r = SampleCoprime(4, rng);
    EXPECT_TRUE(r == 1 || r == 3);
  }
}

TEST(SampleCoprimeTest, UniformOverUnitsOf35) {
  // Enumerate Z*_35 independently and compare empirical counts with the
  // binomial mean within three standard deviations.
  std::map<unsigned long, int> counts;
  for (unsigned long r = 1; r < 35; ++r) {
    if (std::gcd(r, 35ul) == 1) counts[r] = 0;
  }
  ASSERT_EQ(counts.size(), 24u);
  Rng rng(2024);
  constexpr int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) {
    BigNat r = SampleCoprime(35, rng);
    ASSERT_EQ(Gcd(r, 35), 1);
    ASSERT_TRUE(counts.count(r.get_ui())) << r;
    ++counts[r.get_ui()];
  }
  const double p = 1.0 / 24.0;
  const double mean = kDraws * p;
  const double sd = std::sqrt(kDraws * p * (1 - p));
  for (const auto& [unit, count] : counts) {
    EXPECT_LT(std::abs(count - mean), 3 * sd) << "unit " << unit;
  }
}

TEST(SampleCoprimeTest, AlwaysCoprime) {
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    BigNat n = rng.Bits(64) + 2;
    BigNat r = SampleCoprime(n, rng);
    ASSERT_GE(r, 1);
    ASSERT_LT(r, n);
    ASSERT_EQ(Gcd(r, n), 1);
  }
}

TEST(BigNatTest, DecimalParsing) {
  EXPECT_EQ(BigNatFromString("12345678901234567890"),
            BigNat("12345678901234567890"));
  EXPECT_THROW(BigNatFromString("-3"), Error);
  EXPECT_THROW(BigNatFromString(""), Error);
  EXPECT_THROW(BigNatFromString("12a"), Error);
}

TEST(RngTest, BelowStaysInRange) {
  Rng rng(9);
  EXPECT_EQ(rng.Below(1), 0);
  for (int i = 0; i < 500; ++i) {
    const BigNat bound = rng.Bits(100) + 1;
    const BigNat x = rng.Below(bound);
    ASSERT_GE(x, 0);
    ASSERT_LT(x, bound);
  }
  EXPECT_THROW(rng.Below(0), Error);
}

}  // namespace
}  // namespace ptes::numtheory
