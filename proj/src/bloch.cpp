#include "qfid/bloch.hpp"

#include <algorithm>
#include <cmath>

#include "qfid/errors.hpp"

namespace qfid {

namespace {

constexpr Complex kI{0.0, 1.0};

SpinorState normalized(Complex a, Complex b) {
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  return {a / n, b / n};
}

void require_gap(const DVector& d, double gap_tolerance) {
  if (!d.is_finite()) throw DomainError("d-vector has non-finite components");
  if (d.norm() <= gap_tolerance) throw GapClosed("gap closed: |d| <= gap tolerance");
}

}  // namespace

double DVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

std::array<double, 3> DVector::unit() const {
  const double n = norm();
  return {x / n, y / n, z / n};
}

bool DVector::is_finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) && std::isfinite(d0);
}

double SpinorState::norm() const { return std::sqrt(std::norm(a) + std::norm(b)); }

Matrix2 Matrix2::adjoint() const {
  Matrix2 out;
  out(0, 0) = std::conj((*this)(0, 0));
  out(0, 1) = std::conj((*this)(1, 0));
  out(1, 0) = std::conj((*this)(0, 1));
  out(1, 1) = std::conj((*this)(1, 1));
  return out;
}

double Matrix2::max_abs_entry() const {
  double best = 0.0;
  for (const auto& z : m) best = std::max(best, std::abs(z));
  return best;
}

Matrix2 operator*(const Matrix2& lhs, const Matrix2& rhs) {
  Matrix2 out;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) out(r, c) = lhs(r, 0) * rhs(0, c) + lhs(r, 1) * rhs(1, c);
  }
  return out;
}

Matrix2 operator+(const Matrix2& lhs, const Matrix2& rhs) {
  Matrix2 out;
  for (int i = 0; i < 4; ++i) out.m[i] = lhs.m[i] + rhs.m[i];
  return out;
}

Matrix2 operator-(const Matrix2& lhs, const Matrix2& rhs) {
  Matrix2 out;
  for (int i = 0; i < 4; ++i) out.m[i] = lhs.m[i] - rhs.m[i];
  return out;
}

SpinorState operator*(const Matrix2& lhs, const SpinorState& rhs) {
  return {lhs(0, 0) * rhs.a + lhs(0, 1) * rhs.b, lhs(1, 0) * rhs.a + lhs(1, 1) * rhs.b};
}

HermitianMatrix2::HermitianMatrix2(const DVector& d) {
  m_(0, 0) = d.d0 + d.z;
  m_(0, 1) = Complex{d.x, -d.y};
  m_(1, 0) = Complex{d.x, d.y};
  m_(1, 1) = d.d0 - d.z;
}

double HermitianMatrix2::hermiticity_defect() const {
  return (m_ - m_.adjoint()).max_abs_entry();
}

HermitianMatrix2 build_matrix(const DVector& d) { return HermitianMatrix2(d); }

SpinorState canonical_phase(const SpinorState& s) {
  const bool pivot_first = std::abs(s.a) >= std::abs(s.b);
  const Complex pivot = pivot_first ? s.a : s.b;
  const double mag = std::abs(pivot);
  if (mag == 0.0) return s;
  const Complex rot = std::conj(pivot) / mag;
  SpinorState out{s.a * rot, s.b * rot};
  // Strip the rounding residue from the pivot so it is exactly real.
  if (pivot_first) {
    out.a = Complex{std::abs(out.a), 0.0};
  } else {
    out.b = Complex{std::abs(out.b), 0.0};
  }
  return out;
}

// For eigenvalue -n the null vector of (d.sigma + n) is read off either row;
// the row with the larger resulting norm is the numerically stable one.
SpinorState ground_state(const DVector& d, double gap_tolerance) {
  require_gap(d, gap_tolerance);
  const double n = d.norm();
  if (d.z >= 0.0) {
    return canonical_phase(normalized(Complex{d.x, -d.y}, -(d.z + n)));
  }
  return canonical_phase(normalized(n - d.z, -Complex{d.x, d.y}));
}

SpinorState excited_state(const DVector& d, double gap_tolerance) {
  require_gap(d, gap_tolerance);
  const double n = d.norm();
  if (d.z >= 0.0) {
    return canonical_phase(normalized(d.z + n, Complex{d.x, d.y}));
  }
  return canonical_phase(normalized(Complex{d.x, -d.y}, n - d.z));
}

Complex inner(const SpinorState& lhs, const SpinorState& rhs) {
  return std::conj(lhs.a) * rhs.a + std::conj(lhs.b) * rhs.b;
}

double overlap_modulus(const SpinorState& s1, const SpinorState& s2) {
  return std::clamp(std::abs(inner(s1, s2)), 0.0, 1.0);
}

Matrix2 propagator(const DVector& d, double t) {
  const Complex phase = std::exp(-kI * (d.d0 * t));
  const double n = d.norm();
  Matrix2 u;
  if (n == 0.0) {
    u(0, 0) = phase;
    u(1, 1) = phase;
    return u;
  }
  const double c = std::cos(n * t);
  const double s = std::sin(n * t);
  const auto [ux, uy, uz] = d.unit();
  // -i sin * (dhat.sigma)
  u(0, 0) = phase * Complex{c, -s * uz};
  u(1, 1) = phase * Complex{c, s * uz};
  u(0, 1) = phase * (-kI * s) * Complex{ux, -uy};
  u(1, 0) = phase * (-kI * s) * Complex{ux, uy};
  return u;
}

SpinorState evolve(const DVector& d, double t, const SpinorState& s) {
  return propagator(d, t) * s;
}

}  // namespace qfid
