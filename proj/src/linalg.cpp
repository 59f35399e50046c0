#include "shadowlab/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace shadowlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroDirection: return "ZeroDirection";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NotContractive: return "NotContractive";
    case ErrorKind::SeedNotInvariant: return "SeedNotInvariant";
    case ErrorKind::SeedNotTight: return "SeedNotTight";
    case ErrorKind::LetterOutOfRange: return "LetterOutOfRange";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::TooManyComponents: return "TooManyComponents";
    case ErrorKind::InvalidWitness: return "InvalidWitness";
    case ErrorKind::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorKind::NoValidCornerCount: return "NoValidCornerCount";
    case ErrorKind::DegenerateSimplex: return "DegenerateSimplex";
    case ErrorKind::ImagesOverlap: return "ImagesOverlap";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::NotConvex: return "NotConvex";
    case ErrorKind::NonSummableEpsilons: return "NonSummableEpsilons";
    case ErrorKind::TooFewScales: return "TooFewScales";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

namespace {

// Eigenvalues of the 2x2 Gram matrix; the small one goes through the
// determinant so that it keeps full relative accuracy.
std::vector<double> singular_values_2x2(const Matrixd& m) {
  const double p = m(0, 0) * m(0, 0) + m(1, 0) * m(1, 0);
  const double r = m(0, 1) * m(0, 1) + m(1, 1) * m(1, 1);
  const double q = m(0, 0) * m(0, 1) + m(1, 0) * m(1, 1);
  const double half_trace = 0.5 * (p + r);
  const double disc = std::hypot(0.5 * (p - r), q);
  const double big = half_trace + disc;
  const double det = std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
  const double s1 = std::sqrt(big);
  const double s2 = big > 0.0 ? det / s1 : 0.0;
  return {s1, s2};
}

std::vector<double> singular_values_jacobi(Matrixd a) {
  const Eigen::Index n = a.cols();
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (Eigen::Index i = 0; i < n - 1; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double alpha = a.col(i).squaredNorm();
        const double beta = a.col(j).squaredNorm();
        const double gamma = a.col(i).dot(a.col(j));
        if (std::abs(gamma) <= 1e-13 * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index k = 0; k < a.rows(); ++k) {
          const double x = a(k, i);
          const double y = a(k, j);
          a(k, i) = c * x - s * y;
          a(k, j) = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) out.push_back(a.col(k).norm());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

std::vector<double> singular_values(const Matrixd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "singular values need a square matrix");
  if (m.rows() == 1) return {std::abs(m(0, 0))};
  if (m.rows() == 2) return singular_values_2x2(m);
  return singular_values_jacobi(m);
}

double operator_norm(const Matrixd& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m).front();
}

}  // namespace shadowlab
