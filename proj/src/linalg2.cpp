#include "planode/linalg2.hpp"

#include <algorithm>
#include <cmath>

namespace planode {

Mat2 Mat2::inverse(double tol) const {
    const double d = det();
    if (std::fabs(d) <= tol) {
        throw DomainError("Mat2::inverse: matrix is singular");
    }
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

Spectrum eigen(const Mat2& J, const EigenOptions& opt) {
    const double tr = J.trace();
    const double det = J.det();
    const double disc = tr * tr - 4.0 * det;
    const double disc_scale =
        std::max({1.0, tr * tr, std::fabs(det)});

    Spectrum s;
    if (std::fabs(disc) <= opt.discriminant_tol * disc_scale) {
        const double lambda = 0.5 * tr;
        s.lambda1 = s.lambda2 = {lambda, 0.0};
        // rank of J - lambda I decides the structure: 0 means scalar matrix.
        const Mat2 shifted = J - Mat2::identity() * lambda;
        const double rank_scale = std::max(1.0, J.max_norm());
        s.structure = shifted.max_norm() <= opt.rank_tol * rank_scale
                          ? SpectrumStructure::RepeatedDiagonalizable
                          : SpectrumStructure::RepeatedDefective;
    } else if (disc > 0.0) {
        const double root = std::sqrt(disc);
        s.lambda1 = {0.5 * (tr - root), 0.0};
        s.lambda2 = {0.5 * (tr + root), 0.0};
        s.structure = SpectrumStructure::DistinctReal;
    } else {
        const double omega = 0.5 * std::sqrt(-disc);
        s.lambda1 = {0.5 * tr, omega};
        s.lambda2 = {0.5 * tr, -omega};
        s.structure = SpectrumStructure::ComplexPair;
    }
    return s;
}

Vec2 real_eigenvector(const Mat2& J, double lambda) {
    const Mat2 A = J - Mat2::identity() * lambda;
    // The kernel is orthogonal to the rows; use the larger row.
    const Vec2 row1{A.a11, A.a12};
    const Vec2 row2{A.a21, A.a22};
    const Vec2 row = row1.norm() >= row2.norm() ? row1 : row2;
    const double n = row.norm();
    if (n == 0.0) {
        return {1.0, 0.0};  // A vanishes: every direction is an eigenvector
    }
    return {-row.y / n, row.x / n};
}

NormalForm normal_form(const Mat2& J, const Spectrum& s, double tol) {
    if (!s.repeated()) {
        throw WrongStructure("normal_form: spectrum is not repeated");
    }
    const double lambda = s.lambda1.real();
    if (std::fabs(lambda) <= tol * std::max(1.0, J.max_norm())) {
        throw DegenerateSpectrum("normal_form: repeated eigenvalue is zero");
    }

    NormalForm nf;
    if (s.structure == SpectrumStructure::RepeatedDiagonalizable) {
        nf.P = Mat2::identity();
        nf.N = {lambda, 0.0, 0.0, lambda};
        nf.kind = NormalFormKind::Diagonal;
        return nf;
    }

    // Defective case: columns (p1, p2) with (J - lambda I) p1 = eps p2,
    // J p2 = lambda p2, and the generalized vector scaled so eps = -lambda.
    const Mat2 A = J - Mat2::identity() * lambda;
    const Vec2 col1{A.a11, A.a21};
    const Vec2 col2{A.a12, A.a22};
    const bool use_e1 = col1.norm() >= col2.norm();
    const Vec2 p1 = use_e1 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    const Vec2 image = use_e1 ? col1 : col2;  // A p1, an eigenvector
    const double eps = -lambda;
    const Vec2 p2 = image * (1.0 / eps);

    nf.P = {p1.x, p2.x, p1.y, p2.y};
    nf.N = {lambda, 0.0, eps, lambda};
    nf.kind = NormalFormKind::ScaledJordan;
    return nf;
}

}  // namespace planode
