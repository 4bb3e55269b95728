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

#ifndef CONJUNCTION_GEOMETRY_HPP_
#define CONJUNCTION_GEOMETRY_HPP_

#include <Eigen/Dense>

namespace conjunction {

// Position (km) and velocity (km/s) of one object.
struct StateVector {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
};

// Symmetric positive semidefinite 3x3 position covariance, km^2.
//
// Construction validates symmetry (1e-9 relative) and semidefiniteness
// (eigenvalues >= -1e-12 * trace); the stored matrix is symmetrized.
class PositionCovariance {
 public:
  PositionCovariance() : matrix_(Eigen::Matrix3d::Zero()) {}
  explicit PositionCovariance(const Eigen::Matrix3d& matrix);

  // Builds from lower-triangular row order: xx, yx, yy, zx, zy, zz.
  static PositionCovariance FromLowerTriangle(double xx, double yx, double yy,
                                              double zx, double zy, double zz);

  const Eigen::Matrix3d& matrix() const { return matrix_; }

 private:
  Eigen::Matrix3d matrix_;
};

// Full 6x6 position/velocity covariance. Carried as data; velocity
// uncertainty is not propagated into the encounter plane.
class FullStateCovariance {
 public:
  FullStateCovariance() : matrix_(Eigen::Matrix<double, 6, 6>::Zero()) {}
  explicit FullStateCovariance(const Eigen::Matrix<double, 6, 6>& matrix);

  const Eigen::Matrix<double, 6, 6>& matrix() const { return matrix_; }
  PositionCovariance position_block() const;

 private:
  Eigen::Matrix<double, 6, 6> matrix_;
};

struct RelativeState {
  Eigen::Vector3d mu = Eigen::Vector3d::Zero();  // km
  Eigen::Vector3d nu = Eigen::Vector3d::Zero();  // km/s
  PositionCovariance covariance;
};

// Two-dimensional encounter-plane problem: observed position (x1, x2) along
// the principal axes of the projected covariance diag(d1^2, d2^2), and the
// combined hard-body radius.
struct EncounterFrame {
  double x1 = 0.0;
  double x2 = 0.0;
  double d1 = 1.0;
  double d2 = 1.0;
  double hbr = 1.0;

  Eigen::Vector2d position() const { return {x1, x2}; }
  double observed_distance() const;

  // Throws InvalidInput unless d1, d2, hbr > 0 and every field is finite.
  void validate() const;
};

struct EncounterBasis {
  Eigen::Vector3d e1;
  Eigen::Vector3d e2;
};

RelativeState relative_state(const StateVector& primary,
                             const PositionCovariance& primary_cov,
                             const StateVector& secondary,
                             const PositionCovariance& secondary_cov);

// Orthonormal basis of the plane normal to nu. e1 = unit(nu x k) with
// k = z-axis, or the x-axis when nu is within 1e-6 of parallel to z;
// e2 = unit(nu x e1).
EncounterBasis encounter_basis(const Eigen::Vector3d& nu);

// Projects mu and the combined covariance onto the encounter plane and
// rotates to principal axes with d1 >= d2 and x1 >= 0 (x2 >= 0 if x1 == 0).
// The second principal axis is the first rotated by +90 degrees.
EncounterFrame project_to_encounter_frame(const RelativeState& rel,
                                          double hbr);

// ||mu|| |sin(angle(mu, nu))| = ||mu x nu|| / ||nu||.
double geometric_miss_distance(const Eigen::Vector3d& mu,
                               const Eigen::Vector3d& nu);

}  // namespace conjunction

#endif  // CONJUNCTION_GEOMETRY_HPP_
