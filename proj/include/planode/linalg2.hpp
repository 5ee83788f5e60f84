#pragma once

#include <cmath>
#include <complex>

#include "planode/errors.hpp"

namespace planode {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double c) const { return {c * x, c * y}; }
    Vec2 operator-() const { return {-x, -y}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double c, const Vec2& v) { return v * c; }

/// 2x2 real matrix, row-major entries.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
    double max_norm() const {
        return std::max(std::max(std::fabs(a11), std::fabs(a12)),
                        std::max(std::fabs(a21), std::fabs(a22)));
    }

    Vec2 apply(const Vec2& v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }

    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator-(const Mat2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    Mat2 operator*(double c) const { return {c * a11, c * a12, c * a21, c * a22}; }

    /// Inverse via the adjugate. DomainError when |det| <= tol.
    Mat2 inverse(double tol = 0.0) const;
};

enum class SpectrumStructure {
    DistinctReal,
    ComplexPair,
    RepeatedDiagonalizable,
    RepeatedDefective,
};

/// Eigenvalues of a 2x2 real matrix with their structural classification.
/// Complex values are stored as (re, im) pairs; no complex arithmetic is
/// performed anywhere in the library.
struct Spectrum {
    std::complex<double> lambda1;
    std::complex<double> lambda2;
    SpectrumStructure structure = SpectrumStructure::DistinctReal;

    bool repeated() const {
        return structure == SpectrumStructure::RepeatedDiagonalizable ||
               structure == SpectrumStructure::RepeatedDefective;
    }
};

/// Tolerance knobs for eigenvalue classification. Repeated roots are
/// declared when |tr^2 - 4 det| <= discriminant_tol * max(1, tr^2, |det|);
/// the defective/diagonalizable split tests J - lambda I against
/// rank_tol * max(1, max-norm of J).
struct EigenOptions {
    double discriminant_tol = 1e-10;
    double rank_tol = 1e-9;
};

/// Closed-form spectrum of the characteristic quadratic.
/// DistinctReal eigenvalues are ordered lambda1 < lambda2; the ComplexPair
/// member lambda1 carries the positive imaginary part.
Spectrum eigen(const Mat2& J, const EigenOptions& opt = {});

/// Unit kernel vector of J - lambda I for a real eigenvalue lambda.
Vec2 real_eigenvector(const Mat2& J, double lambda);

enum class NormalFormKind { Diagonal, ScaledJordan };

/// Change of basis P and normal form N with P^{-1} J P = N. The defective
/// case is scaled so that N = [[lambda, 0], [-lambda, lambda]] exactly.
struct NormalForm {
    Mat2 P;
    Mat2 N;
    NormalFormKind kind = NormalFormKind::Diagonal;
};

/// Normal form of a repeated-eigenvalue matrix.
/// Throws WrongStructure unless s is repeated, DegenerateSpectrum when
/// the eigenvalue is zero within tolerance.
NormalForm normal_form(const Mat2& J, const Spectrum& s, double tol = 1e-12);

}  // namespace planode
