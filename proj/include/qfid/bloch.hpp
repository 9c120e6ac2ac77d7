#pragma once

// Exact algebra of a single two-band k-mode, H = d.sigma + d0*I.

#include <array>
#include <complex>

namespace qfid {

using Complex = std::complex<double>;

/// Absolute gap below which a k-mode counts as gapless (energy units).
inline constexpr double kGapTolerance = 1e-12;

/// Bloch vector (x, y, z) of one k-mode plus the identity coefficient d0.
struct DVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double d0 = 0.0;

  /// |d|, excluding d0.
  double norm() const;
  /// d / |d|; undefined for |d| == 0.
  std::array<double, 3> unit() const;
  bool is_finite() const;
  bool is_gapless(double gap_tolerance = kGapTolerance) const { return norm() <= gap_tolerance; }
};

/// Normalized two-component state on the band basis.
struct SpinorState {
  Complex a;
  Complex b;

  double norm() const;
};

/// General 2x2 complex matrix, row-major.
struct Matrix2 {
  std::array<Complex, 4> m{};

  Complex& operator()(int r, int c) { return m[2 * r + c]; }
  Complex operator()(int r, int c) const { return m[2 * r + c]; }

  Matrix2 adjoint() const;
  double max_abs_entry() const;
  Complex trace() const { return m[0] + m[3]; }
};

Matrix2 operator*(const Matrix2& lhs, const Matrix2& rhs);
Matrix2 operator+(const Matrix2& lhs, const Matrix2& rhs);
Matrix2 operator-(const Matrix2& lhs, const Matrix2& rhs);
SpinorState operator*(const Matrix2& lhs, const SpinorState& rhs);

/// A 2x2 Hermitian matrix. Only constructible from a DVector so hermiticity
/// holds by construction.
class HermitianMatrix2 {
 public:
  explicit HermitianMatrix2(const DVector& d);

  const Matrix2& matrix() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }
  /// max |H - H^dagger| entry; zero up to rounding.
  double hermiticity_defect() const;

 private:
  Matrix2 m_;
};

HermitianMatrix2 build_matrix(const DVector& d);

/// Eigenvector of d.sigma with eigenvalue -|d|. Phase convention: the
/// largest-modulus amplitude is real and non-negative (ties go to `a`).
/// Throws GapClosed when |d| <= gap_tolerance.
SpinorState ground_state(const DVector& d, double gap_tolerance = kGapTolerance);

/// Eigenvector with eigenvalue +|d|, same phase convention as ground_state.
SpinorState excited_state(const DVector& d, double gap_tolerance = kGapTolerance);

/// <lhs|rhs>
Complex inner(const SpinorState& lhs, const SpinorState& rhs);

/// |<s1|s2>| clamped to [0, 1].
double overlap_modulus(const SpinorState& s1, const SpinorState& s2);

/// exp(-i H t)|s> from the closed Pauli form
/// e^{-i d0 t} [cos(|d| t) I - i sin(|d| t) dhat.sigma].
SpinorState evolve(const DVector& d, double t, const SpinorState& s);

/// exp(-i H t) as a matrix, same closed form as evolve.
Matrix2 propagator(const DVector& d, double t);

/// Rotates the global phase so the largest-modulus amplitude is real and
/// non-negative.
SpinorState canonical_phase(const SpinorState& s);

}  // namespace qfid
