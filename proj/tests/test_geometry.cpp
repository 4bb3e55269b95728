// Copyright 2026 The Conjunction Authors
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


#include <cmath>
#include <random>

#include <Eigen/Geometry>

#include "conjunction/error.hpp"
#include "conjunction/geometry.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace conjunction;
using Eigen::Matrix3d;
using Eigen::Vector3d;

namespace {

Matrix3d RandomSpd(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = n(rng);
  return a * a.transpose() + 0.05 * Matrix3d::Identity();
}

Vector3d RandomVector(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return {n(rng), n(rng), n(rng)};
}

Matrix3d RandomRotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized().toRotationMatrix();
}

RelativeState ExampleState() {
  RelativeState rel;
  rel.mu = {4.0, 3.0, 0.0};
  rel.nu = {0.0, 0.0, 7.5};
  rel.covariance = PositionCovariance(Vector3d(2.25, 0.64, 9.0).asDiagonal());
  return rel;
}

}  // namespace

TEST_CASE("relative state subtracts states and adds covariances") {
  StateVector p, s;
  const PositionCovariance cp(Vector3d(1.0, 0.0, 0.0).asDiagonal());
  const PositionCovariance cs(Vector3d(0.0, 1.0, 0.0).asDiagonal());
  RelativeState same = relative_state(p, cp, p, cs);
  CHECK(same.mu == Vector3d::Zero());
  CHECK(same.nu == Vector3d::Zero());
  CHECK(same.covariance.matrix() == Matrix3d(Vector3d(1.0, 1.0, 0.0).asDiagonal()));

  s.position = {4.0, 3.0, 0.0};
  s.velocity = {0.0, 0.0, 7.5};
  RelativeState rel = relative_state(p, cp, s, cs);
  CHECK(rel.mu == Vector3d(4.0, 3.0, 0.0));
  CHECK(rel.nu == Vector3d(0.0, 0.0, 7.5));

  StateVector bad;
  bad.position.x() = std::nan("");
  CHECK_THROWS_AS(relative_state(bad, cp, s, cs), InvalidInput);
}

TEST_CASE("position covariance rejects asymmetric and indefinite input") {
  Matrix3d m = Matrix3d::Identity();
  m(0, 1) = 0.5;
  CHECK_THROWS_AS(PositionCovariance{m}, InvalidInput);
  CHECK_THROWS_AS(PositionCovariance(Vector3d(1.0, -0.1, 1.0).asDiagonal()),
                  InvalidInput);
  CHECK_NOTHROW(PositionCovariance(Vector3d(1.0, 0.0, 0.0).asDiagonal()));
  const auto lt = PositionCovariance::FromLowerTriangle(4, 1, 3, 0.5, 0.2, 2);
  CHECK(lt.matrix()(1, 0) == 1.0);
  CHECK(lt.matrix()(0, 1) == 1.0);
  CHECK(lt.matrix()(2, 1) == 0.2);
}

TEST_CASE("full state covariance exposes its position block") {
  Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Identity();
  m(0, 0) = 4.0;
  m(2, 1) = m(1, 2) = 0.25;
  FullStateCovariance full(m);
  CHECK(full.position_block().matrix()(0, 0) == 4.0);
  CHECK(full.position_block().matrix()(1, 2) == 0.25);
}

TEST_CASE("encounter basis is orthonormal and normal to the velocity") {
  for (const Vector3d& nu : {Vector3d(0, 0, 1), Vector3d(1, 0, 0),
                            Vector3d(0, 0, -3), Vector3d(1e-8, 0, 2)}) {
    const EncounterBasis b = encounter_basis(nu);
    CHECK(std::abs(b.e1.dot(nu)) < 1e-12 * nu.norm());
    CHECK(std::abs(b.e2.dot(nu)) < 1e-12 * nu.norm());
    CHECK(std::abs(b.e1.dot(b.e2)) < 1e-15);
    CHECK(b.e1.norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b.e2.norm() == doctest::Approx(1.0).epsilon(1e-15));
  }
  const EncounterBasis bx = encounter_basis({1, 0, 0});
  CHECK(bx.e1.x() == doctest::Approx(0.0));
  CHECK(bx.e2.x() == doctest::Approx(0.0));

  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const Vector3d nu = RandomVector(rng, 7.0);
    const EncounterBasis b = encounter_basis(nu);
    Matrix3d m;
    m << b.e1, b.e2, nu.normalized();
    const Matrix3d gram = m.transpose() * m;
    CHECK((gram - Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(encounter_basis({0, 0, 1e-13}), DegenerateGeometry);
}

TEST_CASE("projection reproduces the aligned example frame") {
  const EncounterFrame f = project_to_encounter_frame(ExampleState(), 1.0);
  CHECK(f.d1 == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(f.d2 == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(std::abs(f.x1) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(std::abs(f.x2) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(f.x1 >= 0.0);
  CHECK(f.hbr == 1.0);
}

TEST_CASE("isotropic covariance projects to equal axes and keeps the norm") {
  RelativeState rel;
  rel.mu = {1.0, -2.0, 0.5};
  rel.nu = {0.3, 7.0, -1.0};
  rel.covariance = PositionCovariance(0.09 * Matrix3d::Identity());
  const EncounterFrame f = project_to_encounter_frame(rel, 0.1);
  CHECK(f.d1 == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(f.d2 == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(f.observed_distance() ==
        doctest::Approx(geometric_miss_distance(rel.mu, rel.nu)).epsilon(1e-12));
}

TEST_CASE("projected variances match a characteristic polynomial") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    RelativeState rel;
    rel.mu = RandomVector(rng, 3.0);
    rel.nu = RandomVector(rng, 7.0);
    rel.covariance = PositionCovariance(RandomSpd(rng));
    const EncounterFrame f = project_to_encounter_frame(rel, 0.02);
    const EncounterBasis b = encounter_basis(rel.nu);
    Eigen::Matrix<double, 3, 2> B;
    B << b.e1, b.e2;
    const Eigen::Matrix2d c2 = B.transpose() * rel.covariance.matrix() * B;
    const auto [big, small] = oracle::Eigen2x2(c2(0, 0), c2(0, 1), c2(1, 1));
    CHECK(f.d1 * f.d1 == doctest::Approx(big).epsilon(1e-12));
    CHECK(f.d2 * f.d2 == doctest::Approx(small).epsilon(1e-10));
    CHECK(f.d1 >= f.d2);
    CHECK(f.d2 > 0.0);
    CHECK(f.x1 >= 0.0);

    // Mahalanobis norm of the in-plane offset is preserved.
    const Eigen::Vector2d m2 = B.transpose() * rel.mu;
    const double maha_plane = m2.dot(c2.inverse() * m2);
    const double maha_frame =
        std::pow(f.x1 / f.d1, 2) + std::pow(f.x2 / f.d2, 2);
    CHECK(maha_frame == doctest::Approx(maha_plane).epsilon(1e-9));
  }
}

TEST_CASE("frames are invariant under a joint rotation") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    RelativeState rel;
    rel.mu = RandomVector(rng, 2.0);
    rel.nu = RandomVector(rng, 5.0);
    rel.covariance = PositionCovariance(RandomSpd(rng));
    const Matrix3d R = RandomRotation(rng);
    RelativeState rot;
    rot.mu = R * rel.mu;
    rot.nu = R * rel.nu;
    const Matrix3d c = R * rel.covariance.matrix() * R.transpose();
    rot.covariance = PositionCovariance(0.5 * (c + c.transpose()));
    const EncounterFrame a = project_to_encounter_frame(rel, 1.0);
    const EncounterFrame b = project_to_encounter_frame(rot, 1.0);
    CHECK(b.observed_distance() == doctest::Approx(a.observed_distance()).epsilon(1e-9));
    CHECK(b.d1 == doctest::Approx(a.d1).epsilon(1e-9));
    CHECK(b.d2 == doctest::Approx(a.d2).epsilon(1e-9));
  }
}

TEST_CASE("singular projected covariance is rejected") {
  RelativeState rel = ExampleState();
  rel.covariance = PositionCovariance(Vector3d(1.0, 0.0, 1.0).asDiagonal());
  CHECK_THROWS_AS(project_to_encounter_frame(rel, 1.0), DegenerateCovariance);
  rel.nu = Vector3d::Zero();
  CHECK_THROWS_AS(project_to_encounter_frame(rel, 1.0), DegenerateGeometry);
}

TEST_CASE("geometric miss distance") {
  CHECK(geometric_miss_distance({4, 3, 0}, {0, 0, 7.5}) == doctest::Approx(5.0));
  CHECK(geometric_miss_distance({0, 0, 2}, {0, 0, 7.5}) == doctest::Approx(0.0));
  CHECK(geometric_miss_distance({3, 0, 0}, {0, 1, 0}) == doctest::Approx(3.0));
  CHECK_THROWS_AS(geometric_miss_distance({1, 0, 0}, {0, 0, 0}),
                  DegenerateGeometry);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 500; ++i) {
    const Vector3d mu = RandomVector(rng, 10.0), nu = RandomVector(rng);
    CHECK(geometric_miss_distance(mu, nu) <= mu.norm() * (1.0 + 1e-15));
  }
}

TEST_CASE("encounter frame validation") {
  EncounterFrame f{1.0, 2.0, 0.0, 1.0, 1.0};
  CHECK_THROWS_AS(f.validate(), InvalidInput);
  f = {1.0, 2.0, 1.0, 1.0, -1.0};
  CHECK_THROWS_AS(f.validate(), InvalidInput);
  f = {std::nan(""), 2.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(f.validate(), InvalidInput);
  f = {3.0, 4.0, 1.0, 1.0, 1.0};
  CHECK_NOTHROW(f.validate());
  CHECK(f.observed_distance() == 5.0);
}
