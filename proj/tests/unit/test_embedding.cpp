#include <doctest.h>

#include "stratforge/embedding.hpp"
#include "stratforge/error.hpp"

using namespace stratforge;

namespace {
Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}
} // namespace

TEST_CASE("cosine of a vector with itself is 1") {
    Eigen::VectorXd v = vec({3, -1, 2});
    CHECK(cosine_similarity(v, v) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("orthogonal vectors have similarity 0") {
    CHECK(cosine_similarity(vec({1, 0}), vec({0, 1})) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(cosine_similarity(vec({1, 1, 0}), vec({0, 0, 5})) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("the 45-degree example lands on 0.7071 within 1e-4") {
    double s = cosine_similarity(vec({1, 1}), vec({1, 0}));
    CHECK(std::abs(s - 0.7071) <= 1e-4);
}

TEST_CASE("scaling either argument does not change the similarity") {
    Eigen::VectorXd a = vec({2, 3, 5});
    Eigen::VectorXd b = vec({-1, 4, 0.5});
    double base = cosine_similarity(a, b);
    CHECK(cosine_similarity(10 * a, b) == doctest::Approx(base).epsilon(1e-12));
    CHECK(cosine_similarity(a, 0.001 * b) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("opposite vectors give -1; errors on zero or mismatched input") {
    CHECK(cosine_similarity(vec({1, 2}), vec({-1, -2})) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(cosine_similarity(vec({0, 0}), vec({1, 0})), Error);
    CHECK_THROWS_AS(cosine_similarity(vec({1, 0}), vec({1, 0, 0})), Error);
}

TEST_CASE("similarity matrix is symmetric with unit diagonal") {
    std::vector<Eigen::VectorXd> vs = {vec({1, 0, 0}), vec({1, 1, 0}), vec({0, 0.5, 2})};
    Eigen::MatrixXd m = build_similarity_matrix(vs);
    REQUIRE(m.rows() == 3);
    REQUIRE(m.cols() == 3);
    validate_similarity_matrix(m);  // must not throw
    for (int i = 0; i < 3; ++i) CHECK(m(i, i) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m(0, 1) == doctest::Approx(m(1, 0)).epsilon(1e-12));
    CHECK(m(0, 1) == doctest::Approx(cosine_similarity(vs[0], vs[1])));
}

TEST_CASE("matrix validation rejects broken matrices") {
    Eigen::MatrixXd bad_diag = Eigen::MatrixXd::Identity(2, 2);
    bad_diag(1, 1) = 0.5;
    CHECK_THROWS_AS(validate_similarity_matrix(bad_diag), Error);

    Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
    asym(0, 1) = 0.3;
    asym(1, 0) = 0.1;
    CHECK_THROWS_AS(validate_similarity_matrix(asym), Error);

    Eigen::MatrixXd range = Eigen::MatrixXd::Identity(2, 2);
    range(0, 1) = range(1, 0) = 1.5;
    CHECK_THROWS_AS(validate_similarity_matrix(range), Error);
}

TEST_CASE("normalized_or_throw returns a unit vector and rejects zero") {
    Eigen::VectorXd n = normalized_or_throw(vec({3, 4}));
    CHECK(n.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(n(0) == doctest::Approx(0.6));
    CHECK_THROWS_AS(normalized_or_throw(vec({0, 0, 0})), Error);
}
