#include "stratforge/embedding.hpp"

#include <cmath>

#include "stratforge/error.hpp"

namespace stratforge {

double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size())
        throw Error("cosine_similarity: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
    double na = a.norm();
    double nb = b.norm();
    if (na == 0.0 || nb == 0.0) throw Error("cosine_similarity: zero vector");
    double sim = a.dot(b) / (na * nb);
    // clamp float noise so downstream thresholds see a true cosine
    if (sim > 1.0) sim = 1.0;
    if (sim < -1.0) sim = -1.0;
    return sim;
}

Eigen::MatrixXd build_similarity_matrix(const std::vector<Eigen::VectorXd>& vectors) {
    const Eigen::Index n = static_cast<Eigen::Index>(vectors.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double s = cosine_similarity(vectors[static_cast<size_t>(i)],
                                         vectors[static_cast<size_t>(j)]);
            m(i, j) = s;
            m(j, i) = s;
        }
    }
    return m;
}

void validate_similarity_matrix(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw Error("similarity matrix not square");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (std::abs(m(i, i) - 1.0) > 1e-9)
            throw Error("similarity matrix diagonal not 1 at " + std::to_string(i));
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (std::abs(m(i, j) - m(j, i)) > 1e-9)
                throw Error("similarity matrix not symmetric");
            if (m(i, j) > 1.0 + 1e-9 || m(i, j) < -1.0 - 1e-9)
                throw Error("similarity entry out of [-1,1]");
        }
    }
}

Eigen::VectorXd normalized_or_throw(const Eigen::VectorXd& v) {
    double n = v.norm();
    if (n == 0.0) throw Error("cannot normalize zero vector");
    return v / n;
}

} // namespace stratforge
