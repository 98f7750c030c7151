#pragma once

#include <vector>

#include <Eigen/Core>

namespace stratforge {

// dot(a,b) / (|a||b|), in [-1, 1]. Throws on dimension mismatch or a zero vector.
double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Pairwise cosine similarity matrix: symmetric, unit diagonal.
Eigen::MatrixXd build_similarity_matrix(const std::vector<Eigen::VectorXd>& vectors);

// Checks symmetry (1e-9), unit diagonal (1e-9), and entries in [-1-1e-9, 1+1e-9].
void validate_similarity_matrix(const Eigen::MatrixXd& m);

// v / |v|, throwing on a zero vector.
Eigen::VectorXd normalized_or_throw(const Eigen::VectorXd& v);

} // namespace stratforge
