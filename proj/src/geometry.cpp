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

#include "conjunction/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "conjunction/error.hpp"

namespace conjunction {
namespace {

constexpr double kMinRelativeSpeed = 1e-12;    // km/s
constexpr double kMinProjectedVariance = 1e-18;  // km^2

template <int N>
Eigen::Matrix<double, N, N> CheckedSymmetricPsd(
    const Eigen::Matrix<double, N, N>& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidInput(std::string(what) + ": non-finite entry");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    throw InvalidInput(std::string(what) + ": matrix is not symmetric");
  }
  Eigen::Matrix<double, N, N> sym = 0.5 * (m + m.transpose());
  if (scale > 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>> eig(
        sym, Eigen::EigenvaluesOnly);
    const double trace = std::max(sym.trace(), 0.0);
    if (eig.eigenvalues().minCoeff() < -1e-12 * trace ||
        (trace == 0.0 && eig.eigenvalues().minCoeff() < 0.0)) {
      throw InvalidInput(std::string(what) +
                         ": matrix is not positive semidefinite");
    }
  }
  return sym;
}

void RequireFinite(const Eigen::Vector3d& v, const char* what) {
  if (!v.allFinite()) {
    throw InvalidInput(std::string(what) + " has a non-finite component");
  }
}

}  // namespace

PositionCovariance::PositionCovariance(const Eigen::Matrix3d& matrix)
    : matrix_(CheckedSymmetricPsd<3>(matrix, "position covariance")) {}

PositionCovariance PositionCovariance::FromLowerTriangle(double xx, double yx,
                                                         double yy, double zx,
                                                         double zy,
                                                         double zz) {
  Eigen::Matrix3d m;
  m << xx, yx, zx,  //
      yx, yy, zy,   //
      zx, zy, zz;
  return PositionCovariance(m);
}

FullStateCovariance::FullStateCovariance(
    const Eigen::Matrix<double, 6, 6>& matrix)
    : matrix_(CheckedSymmetricPsd<6>(matrix, "state covariance")) {}

PositionCovariance FullStateCovariance::position_block() const {
  return PositionCovariance(matrix_.topLeftCorner<3, 3>());
}

double EncounterFrame::observed_distance() const { return std::hypot(x1, x2); }

void EncounterFrame::validate() const {
  if (!std::isfinite(x1) || !std::isfinite(x2) || !std::isfinite(d1) ||
      !std::isfinite(d2) || !std::isfinite(hbr)) {
    throw InvalidInput("encounter frame has a non-finite field");
  }
  if (!(d1 > 0.0)) throw InvalidInput("encounter frame requires d1 > 0");
  if (!(d2 > 0.0)) throw InvalidInput("encounter frame requires d2 > 0");
  if (!(hbr > 0.0)) throw InvalidInput("encounter frame requires hbr > 0");
}

RelativeState relative_state(const StateVector& primary,
                             const PositionCovariance& primary_cov,
                             const StateVector& secondary,
                             const PositionCovariance& secondary_cov) {
  RequireFinite(primary.position, "primary position");
  RequireFinite(primary.velocity, "primary velocity");
  RequireFinite(secondary.position, "secondary position");
  RequireFinite(secondary.velocity, "secondary velocity");
  RelativeState rel;
  rel.mu = secondary.position - primary.position;
  rel.nu = secondary.velocity - primary.velocity;
  rel.covariance =
      PositionCovariance(primary_cov.matrix() + secondary_cov.matrix());
  return rel;
}

EncounterBasis encounter_basis(const Eigen::Vector3d& nu) {
  RequireFinite(nu, "relative velocity");
  const double speed = nu.norm();
  if (!(speed > kMinRelativeSpeed)) {
    throw DegenerateGeometry("relative velocity is too small (" +
                             std::to_string(speed) +
                             " km/s) to define an encounter plane");
  }
  Eigen::Vector3d k = Eigen::Vector3d::UnitZ();
  if (std::abs(nu.dot(k)) / speed > 1.0 - 1e-6) k = Eigen::Vector3d::UnitX();
  EncounterBasis basis;
  basis.e1 = nu.cross(k).normalized();
  basis.e2 = nu.cross(basis.e1).normalized();
  return basis;
}

EncounterFrame project_to_encounter_frame(const RelativeState& rel,
                                          double hbr) {
  RequireFinite(rel.mu, "relative position");
  if (!std::isfinite(hbr) || !(hbr > 0.0)) {
    throw InvalidInput("hard-body radius must be positive and finite");
  }
  const EncounterBasis basis = encounter_basis(rel.nu);
  Eigen::Matrix<double, 3, 2> b;
  b.col(0) = basis.e1;
  b.col(1) = basis.e2;

  Eigen::Matrix2d projected = b.transpose() * rel.covariance.matrix() * b;
  projected = 0.5 * (projected + projected.transpose());
  const Eigen::Vector2d in_plane = b.transpose() * rel.mu;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(projected);
  // Ascending order: index 1 holds the major axis.
  const double major = eig.eigenvalues()(1);
  const double minor = eig.eigenvalues()(0);
  if (!(minor > kMinProjectedVariance)) {
    throw DegenerateCovariance(
        "projected covariance is singular (smallest eigenvalue " +
        std::to_string(minor) + " km^2)");
  }

  Eigen::Vector2d axis1 = eig.eigenvectors().col(1).normalized();
  double x1 = axis1.dot(in_plane);
  Eigen::Vector2d axis2(-axis1.y(), axis1.x());
  double x2 = axis2.dot(in_plane);
  if (x1 < 0.0 || (x1 == 0.0 && x2 < 0.0)) {
    x1 = -x1;
    x2 = -x2;
  }
  if (x1 == 0.0) x1 = 0.0;  // drop negative zero

  EncounterFrame frame;
  frame.x1 = x1;
  frame.x2 = x2;
  frame.d1 = std::sqrt(major);
  frame.d2 = std::sqrt(minor);
  frame.hbr = hbr;
  return frame;
}

double geometric_miss_distance(const Eigen::Vector3d& mu,
                               const Eigen::Vector3d& nu) {
  RequireFinite(mu, "relative position");
  RequireFinite(nu, "relative velocity");
  const double speed = nu.norm();
  if (!(speed > 0.0)) {
    throw DegenerateGeometry("miss distance requires a non-zero velocity");
  }
  return std::min(mu.cross(nu).norm() / speed, mu.norm());
}

}  // namespace conjunction
