#include "attain/numlab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "attain/errors.hpp"

namespace attain {

namespace {

bool exactly_symmetric(const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < m.rows(); ++i) {
      if (m(i, j) != m(j, i)) return false;
    }
  }
  return true;
}

bool off_diagonal_zero(const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != 0.0) return false;
    }
  }
  return true;
}

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) sum += 2.0 * a(i, j) * a(i, j);
  }
  return std::sqrt(sum);
}

// Mirror the upper triangle so that rounding cannot break exact symmetry.
Eigen::MatrixXd symmetrized(Eigen::MatrixXd m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < m.rows(); ++i) {
      const double mean = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = mean;
      m(j, i) = mean;
    }
  }
  return m;
}

}  // namespace

TruncatedMatrix::TruncatedMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) {
    throw Error(ErrorCode::InvalidSpec, "truncated matrix must be square");
  }
  if (!values_.allFinite()) throw Error(ErrorCode::InvalidSpec, "truncated matrix has non-finite entries");
  if (!exactly_symmetric(values_)) throw Error(ErrorCode::InvalidSpec, "truncated matrix must be symmetric");
  diagonal_ = off_diagonal_zero(values_);
}

TruncatedMatrix TruncatedMatrix::diagonal(const Eigen::VectorXd& diag) {
  return TruncatedMatrix(Eigen::MatrixXd(diag.asDiagonal()));
}

SubspaceBasis::SubspaceBasis(Eigen::MatrixXd vectors) : vectors_(std::move(vectors)) {
  if (vectors_.cols() > vectors_.rows()) {
    throw Error(ErrorCode::RankDeficient, "more basis vectors than the ambient dimension");
  }
  if (!vectors_.allFinite()) throw Error(ErrorCode::InvalidSpec, "basis has non-finite entries");
}

TruncatedMatrix truncate_diagonal(const SequenceSpec& seq, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidSpec, "truncation size must be at least 1");
  Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) diag(static_cast<Eigen::Index>(i)) = seq.entry(i + 1).to_double();
  return TruncatedMatrix::diagonal(diag);
}

ShiftTruncation truncate_shift(const WeightedShift& shift, std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidSpec, "shift truncation size must be at least 2");
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(size, size);
  // T e_k = w_k e_{k+1}.
  for (Eigen::Index k = 1; k < size; ++k) {
    t(k, k - 1) = shift.moduli().entry(static_cast<Index>(k)).to_double();
  }
  Eigen::MatrixXd gram = t.transpose() * t;
  return {std::move(t), TruncatedMatrix(symmetrized(std::move(gram)))};
}

TruncatedMatrix truncate_composite(const CompositeOperator& op, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidSpec, "truncation size must be at least 1");
  std::vector<Index> indices(n);
  std::iota(indices.begin(), indices.end(), Index{1});
  return composite_block(op, indices);
}

TruncatedMatrix composite_block(const CompositeOperator& op, const std::vector<Index>& indices) {
  const auto size = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  std::map<Index, Eigen::Index> position;
  for (Eigen::Index i = 0; i < size; ++i) {
    position[indices[static_cast<std::size_t>(i)]] = i;
    m(i, i) = (op.alpha() + op.k_diag().entry(indices[static_cast<std::size_t>(i)])).to_double();
  }
  for (const auto& term : op.f_terms()) {
    // Accumulate c u_i u_j exactly before rounding each entry once.
    std::vector<std::pair<Eigen::Index, Rational>> local;
    for (const auto& [index, value] : term.vector) {
      if (auto it = position.find(index); it != position.end()) local.emplace_back(it->second, value);
    }
    for (const auto& [i, ui] : local) {
      for (const auto& [j, uj] : local) m(i, j) += (term.coefficient * ui * uj).to_double();
    }
  }
  return TruncatedMatrix(symmetrized(std::move(m)));
}

SymmetricEigen jacobi_eigenvalues(const TruncatedMatrix& matrix) {
  const Eigen::Index n = matrix.size();
  Eigen::MatrixXd a = matrix.values();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  int sweep = 0;
  for (;; ++sweep) {
    if (off_diagonal_norm(a) < tolerance::kJacobiOffDiagonal) break;
    if (sweep == tolerance::kJacobiMaxSweeps) {
      throw Error(ErrorCode::NoConvergence,
                  "Jacobi did not converge in " + std::to_string(tolerance::kJacobiMaxSweeps) + " sweeps");
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double g = 100.0 * std::abs(apq);
        // Below the resolution of both diagonal entries: drop it.
        if (sweep > 3 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const double h = aqq - app;
        double t;
        if (std::abs(h) + g == std::abs(h)) {
          t = apq / h;
        } else {
          const double theta = 0.5 * h / apq;
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          const double new_kp = c * akp - s * akq;
          const double new_kq = s * akp + c * akq;
          a(k, p) = new_kp;
          a(p, k) = new_kp;
          a(k, q) = new_kq;
          a(q, k) = new_kq;
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });
  SymmetricEigen out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    out.eigenvalues(i) = a(src, src);
    out.eigenvectors.col(i) = v.col(src);
  }
  out.sweeps = sweep;
  return out;
}

TruncatedMatrix matrix_sqrt(const TruncatedMatrix& m, double tol) {
  const SymmetricEigen eig = jacobi_eigenvalues(m);
  Eigen::VectorXd roots(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    const double lambda = eig.eigenvalues(i);
    if (lambda < -tol) {
      throw Error(ErrorCode::NotPositiveSemidefinite,
                  "matrix_sqrt: eigenvalue " + std::to_string(lambda) + " below -tol");
    }
    roots(i) = std::sqrt(std::max(lambda, 0.0));
  }
  Eigen::MatrixXd root = eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.transpose();
  return TruncatedMatrix(symmetrized(std::move(root)));
}

Eigen::MatrixXd orthonormalize(const SubspaceBasis& basis, double pivot_tol) {
  Eigen::MatrixXd q = basis.vectors();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const double original = q.col(j).norm();
    for (Eigen::Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    const double residual = q.col(j).norm();
    if (original == 0.0 || residual <= pivot_tol * original) {
      throw Error(ErrorCode::RankDeficient,
                  "basis vector " + std::to_string(j) + " is dependent on its predecessors");
    }
    q.col(j) /= residual;
  }
  return q;
}

RestrictedNorm norm_on_subspace(const TruncatedMatrix& m, const SubspaceBasis& basis) {
  if (basis.ambient_dimension() != m.size()) {
    throw Error(ErrorCode::InvalidSpec, "basis dimension does not match the matrix");
  }
  const Eigen::MatrixXd q = orthonormalize(basis);
  const Eigen::MatrixXd image = m.is_diagonal()
                                    ? Eigen::MatrixXd(m.values().diagonal().asDiagonal() * q)
                                    : Eigen::MatrixXd(m.values() * q);
  // Q^T M^T M Q built from the upper triangle only, so it is exactly symmetric.
  const Eigen::Index k = q.cols();
  Eigen::MatrixXd gram(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      gram(i, j) = image.col(i).dot(image.col(j));
      gram(j, i) = gram(i, j);
    }
  }
  const SymmetricEigen eig = jacobi_eigenvalues(TruncatedMatrix(std::move(gram)));
  RestrictedNorm out;
  out.norm = std::sqrt(std::max(eig.eigenvalues(k - 1), 0.0));
  out.maximizer = q * eig.eigenvectors.col(k - 1);
  out.maximizer.normalize();
  return out;
}

WitnessCheck verify_witness_numeric(const SequenceSpec& seq, const Witness& witness,
                                    std::size_t m_max, std::size_t n, double tol,
                                    double escape_margin) {
  if (m_max == 0) throw Error(ErrorCode::InvalidSpec, "m_max must be at least 1");
  const Index extent = witness_extent(seq, witness, m_max);
  if (extent > n) {
    throw Error(ErrorCode::WitnessOutOfRange,
                "witness basis reaches index " + std::to_string(extent) +
                    " beyond truncation size " + std::to_string(n));
  }
  const TruncatedMatrix m = truncate_diagonal(seq, n);
  const auto size = static_cast<Eigen::Index>(n);
  const auto count = static_cast<Eigen::Index>(m_max);

  Eigen::MatrixXd vectors = Eigen::MatrixXd::Zero(size, count);
  if (const auto* c = std::get_if<CoordinateWitness>(&witness)) {
    const auto terms = coordinate_terms(seq, *c, m_max);
    for (Eigen::Index k = 0; k < count; ++k) {
      vectors(static_cast<Eigen::Index>(terms[static_cast<std::size_t>(k)].index) - 1, k) = 1.0;
    }
  } else {
    const auto terms = pair_terms(seq, std::get<MixedPairsWitness>(witness), m_max);
    for (Eigen::Index k = 0; k < count; ++k) {
      const PairTerm& term = terms[static_cast<std::size_t>(k)];
      vectors(static_cast<Eigen::Index>(term.a_index) - 1, k) = 1.0;
      vectors(static_cast<Eigen::Index>(term.b_index) - 1, k) = std::sqrt(term.t_squared.to_double());
    }
  }

  WitnessCheck check;
  check.sup = witness_sup(witness).to_double();
  for (const Rational& p : predicted_norms(seq, witness, m_max)) check.predicted.push_back(p.to_double());
  check.strictly_increasing = true;
  check.below_sup = true;
  for (Eigen::Index k = 1; k <= count; ++k) {
    const double nu = norm_on_subspace(m, SubspaceBasis(vectors.leftCols(k))).norm;
    const double predicted = check.predicted[static_cast<std::size_t>(k - 1)];
    const double deviation = std::abs(nu - predicted);
    check.max_deviation = std::max(check.max_deviation, deviation);
    if (deviation > tol) {
      throw Error(ErrorCode::PredictionMismatch,
                  "restricted norm " + std::to_string(nu) + " at m=" + std::to_string(k) +
                      " deviates from the predicted " + std::to_string(predicted));
    }
    if (!check.norms.empty() && nu <= check.norms.back()) check.strictly_increasing = false;
    if (nu >= check.sup - escape_margin) check.below_sup = false;
    check.norms.push_back(nu);
  }
  return check;
}

std::size_t spectral_count_below(const TruncatedMatrix& m, double threshold, double tol) {
  const SymmetricEigen eig = jacobi_eigenvalues(m);
  return static_cast<std::size_t>(
      std::count_if(eig.eigenvalues.begin(), eig.eigenvalues.end(),
                    [&](double lambda) { return lambda < threshold - tol; }));
}

}  // namespace attain
