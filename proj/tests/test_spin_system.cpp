#include "doctest.h"

#include "spinlab/errors.hpp"
#include "spinlab/spin_system.hpp"

using namespace spinlab;

TEST_CASE("built-in bromotrifluoroethylene system") {
  const SpinSystem sys = SpinSystem::bromotrifluoroethylene();
  sys.validate();
  CHECK(sys.size() == 3);
  CHECK(sys.dim() == 8);
  CHECK(sys.labels == std::vector<std::string>{"A", "B", "C"});
  CHECK(sys.offset_hz[0] == 0.0);
  CHECK(sys.offset_hz[1] == -13200.0);
  CHECK(sys.offset_hz[2] == 9500.0);
  CHECK(sys.j_hz(0, 1) == -122.1);
  CHECK(sys.j_hz(0, 2) == 75.0);
  CHECK(sys.j_hz(1, 2) == 53.8);
  CHECK(sys.index_of("B") == 1);
  CHECK(sys.index_of("Q") == -1);
  CHECK_THROWS_AS(sys.require_spin("Q"), ParseError);
}

TEST_CASE("config parsing round trip") {
  const SpinSystem sys = SpinSystem::bromotrifluoroethylene();
  const SpinSystem back = SpinSystem::from_string(sys.to_config_string());
  CHECK(back.labels == sys.labels);
  CHECK(back.offset_hz == sys.offset_hz);
  CHECK(back.t2_s == sys.t2_s);
  CHECK(back.j_hz == sys.j_hz);
}

TEST_CASE("config parsing accepts comments and defaults T2") {
  const auto sys = SpinSystem::from_string(
      "# two coupled protons\n"
      "labels = a b\n"
      "offsets_hz = 0 100\n"
      "J_hz = a b 7.5\n");
  CHECK(sys.size() == 2);
  CHECK(sys.j_hz(0, 1) == 7.5);
  CHECK(sys.t2_s == std::vector<double>{6.0, 6.0});
}

TEST_CASE("config parsing rejects broken input") {
  CHECK_THROWS_AS(SpinSystem::from_string("offsets_hz = 0\n"), ParseError);
  CHECK_THROWS_AS(
      SpinSystem::from_string("labels = a a\noffsets_hz = 0 0\n"), ParseError);
  CHECK_THROWS_AS(
      SpinSystem::from_string("labels = a b\nJ_hz = a q 1\n"), ParseError);
  CHECK_THROWS_AS(
      SpinSystem::from_string("labels = a b\nT2_s = 1 -2\n"), ParseError);
  CHECK_THROWS_AS(
      SpinSystem::from_string("labels = a b\nbogus = 1\n"), ParseError);
  CHECK_THROWS_AS(
      SpinSystem::from_string("labels = a b\noffsets_hz = 0 x\n"), ParseError);
}

TEST_CASE("bit helpers follow the most-significant-first convention") {
  // |011> for three spins: spin 0 in |0>, spins 1 and 2 in |1>.
  CHECK(spin_bit(0b011, 0, 3) == 0);
  CHECK(spin_bit(0b011, 1, 3) == 1);
  CHECK(spin_bit(0b011, 2, 3) == 1);
  CHECK(spin_sign(0b011, 0, 3) == 1);
  CHECK(spin_sign(0b011, 1, 3) == -1);
  CHECK(with_spin_bit(0b011, 0, 1, 3) == 0b111);
  CHECK(with_spin_bit(0b011, 2, 0, 3) == 0b010);
}
