#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Eigenvalues>

#include "attain/errors.hpp"
#include "attain/numlab.hpp"
#include "support/generators.hpp"

using namespace attain;
using attain::testing::SpecGenerator;

namespace {

Rational q(std::int64_t p, std::int64_t d = 1) { return Rational(p, d); }

TruncatedMatrix random_symmetric(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      m(i, j) = normal(rng);
      m(j, i) = m(i, j);
    }
  }
  return TruncatedMatrix(m);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an attain::Error");
  return ErrorCode::InvalidSpec;
}

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("truncated matrices must be square, finite and exactly symmetric") {
  CHECK(code_of([] { TruncatedMatrix(Eigen::MatrixXd::Zero(2, 3)); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { TruncatedMatrix(mat2(1, 2, 2.0000001, 1)); }) == ErrorCode::InvalidSpec);
  CHECK(code_of([] { TruncatedMatrix(mat2(NAN, 0, 0, 1)); }) == ErrorCode::InvalidSpec);
  CHECK(TruncatedMatrix(mat2(1, 0, 0, 2)).is_diagonal());
  CHECK_FALSE(TruncatedMatrix(mat2(1, 1, 1, 2)).is_diagonal());
}

TEST_CASE("truncate_diagonal examples") {
  const auto m1 = truncate_diagonal(SequenceSpec({Strand::exact(q(2))}), 3);
  CHECK(m1.values() == Eigen::Vector3d(2, 2, 2).asDiagonal().toDenseMatrix());

  const SequenceSpec geometric({Strand::above(q(1), q(1), q(1, 2))});
  const auto m2 = truncate_diagonal(geometric, 3);
  CHECK(m2.values() == Eigen::Vector3d(2, 1.5, 1.25).asDiagonal().toDenseMatrix());

  const auto m3 = truncate_diagonal(geometric.with_overrides({{2, q(10)}}), 3);
  CHECK(m3.values() == Eigen::Vector3d(2, 10, 1.25).asDiagonal().toDenseMatrix());
}

TEST_CASE("truncate_shift examples") {
  const WeightedShift ramp(SequenceSpec({Strand::exact(q(1))}, {{1, q(1)}, {2, q(2)}, {3, q(3)}}));
  const auto t4 = truncate_shift(ramp, 4);
  CHECK(t4.shift(1, 0) == 1.0);
  CHECK(t4.shift(2, 1) == 2.0);
  CHECK(t4.shift(3, 2) == 3.0);
  CHECK(t4.shift.sum() == 6.0);
  CHECK(t4.gram.values() == Eigen::Vector4d(1, 4, 9, 0).asDiagonal().toDenseMatrix());

  const auto t3 = truncate_shift(WeightedShift(SequenceSpec({Strand::exact(q(1))})), 3);
  CHECK(t3.gram.values() == Eigen::Vector3d(1, 1, 0).asDiagonal().toDenseMatrix());

  const WeightedShift zero_first(SequenceSpec({Strand::exact(q(1))}, {{1, q(0)}, {2, q(5)}}));
  CHECK(truncate_shift(zero_first, 3).gram.values() ==
        Eigen::Vector3d(0, 25, 0).asDiagonal().toDenseMatrix());
  CHECK_THROWS_AS(truncate_shift(zero_first, 1), Error);
}

TEST_CASE("jacobi examples") {
  const auto e1 = jacobi_eigenvalues(TruncatedMatrix::diagonal(Eigen::Vector3d(3, 1, 2)));
  CHECK(e1.eigenvalues == Eigen::Vector3d(1, 2, 3));
  CHECK(e1.sweeps == 0);

  // lambda^2 - 4 lambda + 3 = 0
  const auto e2 = jacobi_eigenvalues(TruncatedMatrix(mat2(2, 1, 1, 2)));
  CHECK(std::abs(e2.eigenvalues(0) - 1.0) <= 1e-12);
  CHECK(std::abs(e2.eigenvalues(1) - 3.0) <= 1e-12);

  const auto e3 = jacobi_eigenvalues(TruncatedMatrix::diagonal(Eigen::Vector3d(0.5, 1, 1)));
  CHECK(e3.eigenvalues == Eigen::Vector3d(0.5, 1, 1));
}

TEST_CASE("jacobi reconstructs random symmetric matrices and matches Eigen") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 1 + trial % 25;
    const TruncatedMatrix m = random_symmetric(rng, n);
    const auto eig = jacobi_eigenvalues(m);
    const Eigen::MatrixXd& v = eig.eigenvectors;
    const double scale = std::max(1.0, m.values().norm());
    CHECK((v * eig.eigenvalues.asDiagonal() * v.transpose() - m.values()).norm() <= 1e-10 * scale);
    CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(n, n)).norm() <= 1e-10);
    for (Eigen::Index i = 1; i < n; ++i) CHECK(eig.eigenvalues(i - 1) <= eig.eigenvalues(i));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> reference(m.values());
    CHECK((eig.eigenvalues - reference.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-10 * scale);
  }
}

TEST_CASE("matrix_sqrt examples") {
  const auto r1 = matrix_sqrt(TruncatedMatrix::diagonal(Eigen::Vector2d(4, 9)), 1e-12);
  CHECK(r1.values() == Eigen::Vector2d(2, 3).asDiagonal().toDenseMatrix());

  // V diag(1, sqrt 3) V^T with V the eigenvectors of [[2,1],[1,2]].
  const auto r2 = matrix_sqrt(TruncatedMatrix(mat2(2, 1, 1, 2)), 1e-12);
  const double s3 = std::sqrt(3.0);
  CHECK(std::abs(r2(0, 0) - (s3 + 1) / 2) <= 1e-12);
  CHECK(std::abs(r2(1, 1) - (s3 + 1) / 2) <= 1e-12);
  CHECK(std::abs(r2(0, 1) - (s3 - 1) / 2) <= 1e-12);
  CHECK(r2(0, 1) == r2(1, 0));

  const auto r3 = matrix_sqrt(TruncatedMatrix::diagonal(Eigen::Vector4d(1, 4, 9, 0)), 1e-12);
  CHECK(r3.values() == Eigen::Vector4d(1, 2, 3, 0).asDiagonal().toDenseMatrix());

  CHECK(code_of([] { matrix_sqrt(TruncatedMatrix::diagonal(Eigen::Vector2d(1, -1e-3)), 1e-8); }) ==
        ErrorCode::NotPositiveSemidefinite);
  // Roundoff-sized negatives are clamped.
  const auto clamped = matrix_sqrt(TruncatedMatrix::diagonal(Eigen::Vector2d(1, -1e-12)), 1e-8);
  CHECK(clamped(1, 1) == 0.0);
}

TEST_CASE("property: matrix_sqrt squares back to its input") {
  std::mt19937_64 rng(9);
  const double tol = 1e-8;
  for (int trial = 0; trial < 20; ++trial) {
    const TruncatedMatrix a = random_symmetric(rng, 12);
    const TruncatedMatrix gram(Eigen::MatrixXd(a.values() * a.values()));
    const auto root = matrix_sqrt(gram, tol);
    CHECK((root.values() * root.values() - gram.values()).cwiseAbs().maxCoeff() <= 10 * tol);
  }
}

TEST_CASE("norm_on_subspace examples") {
  const auto m = TruncatedMatrix::diagonal(Eigen::Vector3d(1, 2, 3));
  Eigen::MatrixXd e12 = Eigen::MatrixXd::Zero(3, 2);
  e12(0, 0) = 1;
  e12(1, 1) = 1;
  const auto r1 = norm_on_subspace(m, SubspaceBasis(e12));
  CHECK(r1.norm == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(std::abs(r1.maximizer(1)) - 1.0) <= 1e-14);

  const auto r2 = norm_on_subspace(m, SubspaceBasis(Eigen::Vector3d(0, 1, 1)));
  CHECK(std::abs(r2.norm - std::sqrt(13.0 / 2.0)) <= 1e-14);
  CHECK(std::abs(r2.norm - 2.5495097567963922) <= 1e-14);

  const auto pair = norm_on_subspace(TruncatedMatrix::diagonal(Eigen::Vector2d(1, 2)),
                                     SubspaceBasis(Eigen::Vector2d(1, std::sqrt(5.0 / 7.0))));
  CHECK(std::abs(pair.norm - 1.5) <= 1e-14);

  Eigen::MatrixXd dependent(3, 2);
  dependent << 1, 2, 1, 2, 0, 0;
  CHECK(code_of([&] { norm_on_subspace(m, SubspaceBasis(dependent)); }) == ErrorCode::RankDeficient);
}

TEST_CASE("property: full-space restricted norm equals the spectral radius") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const TruncatedMatrix m = random_symmetric(rng, 10);
    const auto eig = jacobi_eigenvalues(m);
    const double radius = std::max(std::abs(eig.eigenvalues(0)), std::abs(eig.eigenvalues(9)));
    const auto r = norm_on_subspace(m, SubspaceBasis(Eigen::MatrixXd::Identity(10, 10)));
    CHECK(std::abs(r.norm - radius) <= 1e-10);
    CHECK(std::abs((m.values() * r.maximizer).norm() - r.norm) <= 1e-10);
  }
}

TEST_CASE("verify_witness_numeric examples") {
  const SequenceSpec below({Strand::below(q(1), q(1, 2), q(1, 2))});
  const auto c = verify_witness_numeric(below, build_witness(below), 3, 10, 1e-8);
  REQUIRE(c.norms.size() == 3);
  CHECK(c.norms[0] == doctest::Approx(0.5));
  CHECK(c.norms[1] == doctest::Approx(0.75));
  CHECK(c.norms[2] == doctest::Approx(0.875));
  CHECK(c.passed());

  const SequenceSpec two({Strand::exact(q(1)), Strand::exact(q(2))});
  const auto p = verify_witness_numeric(two, build_witness(two), 1, 10, 1e-8);
  CHECK(std::abs(p.norms[0] - 1.5) <= 1e-12);
  CHECK(p.passed());

  CHECK(code_of([&] { verify_witness_numeric(below, build_witness(below), 20, 10, 1e-8); }) ==
        ErrorCode::WitnessOutOfRange);
  // A coordinate "witness" on a decreasing strand predicts the wrong norms.
  const SequenceSpec above({Strand::above(q(1), q(1), q(1, 2))});
  const Witness bogus = CoordinateWitness{0, {}, q(1)};
  CHECK(code_of([&] { verify_witness_numeric(above, bogus, 3, 10, 1e-8); }) ==
        ErrorCode::PredictionMismatch);
}

TEST_CASE("spectral_count_below examples") {
  CHECK(spectral_count_below(TruncatedMatrix::diagonal(Eigen::Vector3d(0.5, 1, 1)), 1.0, 1e-8) == 1);
  CHECK(spectral_count_below(TruncatedMatrix::diagonal(Eigen::Vector2d(2, 3)), 1.0, 1e-8) == 0);

  // Rank-one F: alpha I + K + F dominates alpha I + F at every size.
  const CompositeOperator op(q(1), SequenceSpec({Strand::above(q(0), q(1), q(1, 2))}),
                             {{q(-1, 2), {{1, q(1)}, {3, q(1)}}}});
  for (std::size_t n : {10, 50, 200}) {
    const auto m = truncate_composite(op, n);
    const auto count = spectral_count_below(m, 1.0, 1e-8);
    CHECK(count <= 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> reference(m.values());
    CHECK(count == static_cast<std::size_t>((reference.eigenvalues().array() < 1.0 - 1e-8).count()));
  }
}

TEST_CASE("property: |T| of a shift truncation is diag(|w_1|, ..., |w_{N-1}|, 0)") {
  SpecGenerator gen(4321);
  for (int trial = 0; trial < 15; ++trial) {
    const WeightedShift shift = gen.shift();
    const std::size_t n = 20 + static_cast<std::size_t>(gen.uniform(0, 180));
    const auto root = matrix_sqrt(truncate_shift(shift, n).gram, 1e-8);
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i + 1 < expected.size(); ++i) {
      expected(i) = shift.moduli().entry(static_cast<Index>(i) + 1).to_double();
    }
    CHECK((root.values() - Eigen::MatrixXd(expected.asDiagonal())).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("property: jacobi on diagonal truncations returns the sorted entries") {
  SpecGenerator gen(88);
  for (int trial = 0; trial < 20; ++trial) {
    const SequenceSpec seq = gen.sequence();
    const auto m = truncate_diagonal(seq, 60);
    std::vector<double> entries;
    for (Index n = 1; n <= 60; ++n) entries.push_back(seq.entry(n).to_double());
    std::sort(entries.begin(), entries.end());
    const auto eig = jacobi_eigenvalues(m);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      CHECK(std::abs(eig.eigenvalues(static_cast<Eigen::Index>(i)) - entries[i]) <= 1e-12);
    }
  }
}

TEST_CASE("property: witness subspaces escape their supremum") {
  testing::GeneratorConfig config;
  config.min_ratio = 0.75;
  SpecGenerator gen(2718, config);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 15; ++trial) {
    const SequenceSpec seq = gen.sequence();
    const ANVerdict verdict = classify_an(seq);
    if (is_an(verdict)) continue;
    const Witness& w = std::get<NotAN>(verdict).witness;
    if (witness_extent(seq, w, 20) > 200) continue;
    ++checked;
    const auto check = verify_witness_numeric(seq, w, 20, 200, 1e-8);
    CHECK(check.strictly_increasing);
    CHECK(check.below_sup);
  }
  CHECK(checked == 15);
}
