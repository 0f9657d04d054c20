#include "semilab/spaces.hpp"
#include "test_util.hpp"

#include <numeric>

using namespace semilab;

namespace {

TruncVector vec(std::initializer_list<Complex> xs, SpaceTag tag = SpaceTag::C0) {
  CVector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (const auto& x : xs) v(i++) = x;
  return TruncVector(v, tag);
}

constexpr Complex I(0, 1);

}  // namespace

TEST_SUITE("spaces") {
  TEST_CASE("norm examples") {
    for (SpaceTag tag : {SpaceTag::C0, SpaceTag::L1, SpaceTag::L2}) CHECK(norm(TruncVector::basis(5, 0, tag)) == 1.0);
    CHECK(norm(vec({1, I, 0}, SpaceTag::C0)) == 1.0);
    CHECK(norm(vec({1, I, 0}, SpaceTag::L1)) == 2.0);
    CHECK(norm(vec({Complex(3, 0), Complex(0, 4)}, SpaceTag::L2)) == doctest::Approx(5.0));
  }

  TEST_CASE("norm axioms on random vectors") {
    test::Rng rng(11);
    for (SpaceTag tag : {SpaceTag::C0, SpaceTag::L1, SpaceTag::L2}) {
      for (int trial = 0; trial < 10000; ++trial) {
        const Index n = rng.index(1, 9);
        const CVector x = rng.cvector(n);
        const CVector y = rng.cvector(n);
        const Complex c(rng.uniform(-3, 3), rng.uniform(-3, 3));
        const Real nx = seq_norm(x, tag);
        const Real ny = seq_norm(y, tag);
        REQUIRE(seq_norm(x + y, tag) <= nx + ny + 1e-14);
        REQUIRE(std::abs(seq_norm(c * x, tag) - std::abs(c) * nx) <= 1e-13 * (1 + std::abs(c) * nx));
        REQUIRE(nx > 0);
      }
      CHECK(norm(TruncVector::zero(4, tag)) == 0.0);
    }
  }

  TEST_CASE("pairing is bilinear without conjugation") {
    const TruncVector e1 = TruncVector::basis(3, 0);
    CHECK(pairing(e1, DualityWitness::coordinate(3, 0)) == Complex(1));
    CHECK(pairing(vec({I, 0}), DualityWitness(CVector::Unit(2, 0) * -I, SpaceTag::C0)) == Complex(1));
    CHECK(pairing(TruncVector::basis(3, 1), DualityWitness::coordinate(3, 0)) == Complex(0));
    CHECK(pairing(vec({I, 0}), DualityWitness(CVector::Unit(2, 0) * I, SpaceTag::C0)) == Complex(-1));
    CHECK_THROWS_WITH_AS(pairing(e1, DualityWitness::coordinate(2, 0)), doctest::Contains("DimensionMismatch"), Error);
  }

  TEST_CASE("duality extreme points on c0") {
    SUBCASE("smooth point") {
      const auto j = duality_extreme_points(TruncVector::basis(4, 0));
      REQUIRE(j.size() == 1);
      CHECK(j[0].coeffs() == CVector::Unit(4, 0));
    }
    SUBCASE("two maximal coordinates") {
      const auto j = duality_extreme_points(vec({1, 1, 0, 0}));
      REQUIRE(j.size() == 2);
      CHECK(j[0].coeffs() == CVector::Unit(4, 0));
      CHECK(j[1].coeffs() == CVector::Unit(4, 1));
    }
    SUBCASE("conjugated phase and a coordinate below the max") {
      const auto j = duality_extreme_points(vec({1, I, 0.5, 0}));
      REQUIRE(j.size() == 2);
      CHECK(j[0].coeffs() == CVector::Unit(4, 0));
      CHECK(j[1].coeffs() == CVector(CVector::Unit(4, 1) * -I));
    }
    SUBCASE("non-unit input is rejected") {
      CHECK_THROWS_WITH_AS(duality_extreme_points(vec({2, 0})), doctest::Contains("NotUnitVector"), Error);
      CHECK_THROWS_WITH_AS(duality_extreme_points(vec({0.5, 0})), doctest::Contains("NotUnitVector"), Error);
    }
    SUBCASE("argmax tolerance decides near ties") {
      ToleranceConfig tol;
      const auto j = duality_extreme_points(vec({1, 1 - 1e-13, 1 - 1e-6}), tol);
      CHECK(j.size() == 2);
    }
    SUBCASE("l2 has the single functional conj(x)") {
      const auto j = duality_extreme_points(vec({Complex(0.6, 0), Complex(0, 0.8)}, SpaceTag::L2));
      REQUIRE(j.size() == 1);
      CHECK(std::abs(j[0].coeffs()(1) - Complex(0, -0.8)) < 1e-15);
    }
    SUBCASE("l1 is not supported") {
      CHECK_THROWS_AS(duality_extreme_points(TruncVector::basis(3, 0, SpaceTag::L1)), Error);
    }
  }

  TEST_CASE("basis vectors have exactly one norming functional") {
    for (Index n : {1, 2, 7, 32}) {
      for (Index k = 0; k < n; ++k) {
        const auto j = duality_extreme_points(TruncVector::basis(n, k));
        REQUIRE(j.size() == 1);
        CHECK(j[0].coeffs() == CVector::Unit(n, k));
      }
    }
  }

  TEST_CASE("witnesses norm unit vectors, and so do their convex combinations") {
    test::Rng rng(23);
    ToleranceConfig tol;
    for (int trial = 0; trial < 2000; ++trial) {
      const Index n = rng.index(1, 10);
      CVector x = CVector::Zero(n);
      for (Index i = 0; i < n; ++i) x(i) = rng.complex_unit_disk() * 0.99;
      // Force a random number of maximal coordinates with random phases.
      const Index ties = rng.index(1, n);
      for (Index t = 0; t < ties; ++t) x(rng.index(0, n - 1)) = std::polar(1.0, rng.uniform(0, 6.3));
      const TruncVector tx(x, SpaceTag::C0);
      const auto witnesses = duality_extreme_points(tx, tol);
      REQUIRE(!witnesses.empty());
      for (const auto& f : witnesses) {
        REQUIRE(std::abs(pairing(tx, f) - Complex(1)) <= tol.eq_tol);
        REQUIRE(std::abs(dual_norm(f) - 1.0) <= tol.eq_tol);
      }
      std::vector<Real> w(witnesses.size());
      Real total = 0;
      for (auto& wi : w) total += (wi = rng.uniform(0, 1));
      for (auto& wi : w) wi /= total;
      w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
      if (w.back() < 0) continue;
      const DualityWitness g = convex_combination(witnesses, w);
      REQUIRE(std::abs(pairing(tx, g) - Complex(1)) <= tol.eq_tol);
      REQUIRE(dual_norm(g) <= 1.0 + tol.eq_tol);
    }
  }

  TEST_CASE("disjointness") {
    CHECK(is_disjoint(TruncVector::basis(3, 0), TruncVector::basis(3, 1)));
    CHECK_FALSE(is_disjoint(vec({1, 0.5, 0}), vec({0, 0.5, 1})));
    CHECK(is_disjoint(vec({1, 0.5, 0.2}), TruncVector::zero(3)));
    CHECK_THROWS_AS(is_disjoint(TruncVector::basis(3, 0), TruncVector::basis(2, 0)), Error);
  }

  TEST_CASE("JSON round trip is exact at full precision") {
    test::Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      const Index n = rng.index(1, 6);
      CVector x = rng.cvector(n, std::pow(10.0, rng.uniform(-300, 300)));
      const TruncVector v(x, static_cast<SpaceTag>(trial % 3));
      const TruncVector back = vector_from_json(nlohmann::json::parse(to_json(v).dump()));
      REQUIRE(back.coords() == v.coords());
      REQUIRE(back.space() == v.space());
      const DualityWitness f(x.reverse(), v.space());
      const DualityWitness fb = witness_from_json(nlohmann::json::parse(to_json(f).dump()));
      REQUIRE(fb.coeffs() == f.coeffs());
    }
    CHECK(to_json(vec({1, I})).dump() == R"({"coords":[[1.0,0.0],[0.0,1.0]],"space":"C0"})");
  }

  TEST_CASE("tolerances must be positive") {
    CHECK_NOTHROW(ToleranceConfig{}.validate());
    CHECK_THROWS_AS((ToleranceConfig{0.0, 1e-12, 1e-8}.validate()), Error);
    CHECK_THROWS_AS((ToleranceConfig{1e-10, -1.0, 1e-8}.validate()), Error);
  }
}
