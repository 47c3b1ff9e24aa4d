#pragma once

#include "realnc/envelope.hpp"
#include "realnc/systems.hpp"

#include <string>
#include <vector>

namespace realnc {

struct NamedPoint {
  std::string name;
  NcPoint point;
  std::string provenance;
};

struct NamedFunction {
  std::string name;
  NcPolynomial f;
};

struct Fixture {
  std::string name;
  std::string provenance;
  OperatorSystem system;
  std::vector<NamedPoint> points;
  std::vector<NamedFunction> functions;

  const NcPoint& point(const std::string& key) const;
  const NcPolynomial& function(const std::string& key) const;
};

/// skew, quaternion, interval, segment3. Throws UnknownFixture.
Fixture load_fixture(const std::string& name);
std::vector<std::string> fixture_names();

/// Left multiplication by i, j, k on the quaternions in the basis (1, i, j, k).
MatrixList quaternion_units();
/// c(i) = [[0,-1],[1,0]].
Matrix rotation_generator();

}  // namespace realnc
