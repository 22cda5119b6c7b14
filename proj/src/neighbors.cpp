#include "senc/neighbors.hpp"

#include <cmath>

namespace senc {

double nc_distance(const Eigen::Ref<const Eigen::RowVectorXd>& a_cont,
                   const Eigen::Ref<const Eigen::RowVectorXi>& a_nom,
                   const Eigen::Ref<const Eigen::RowVectorXd>& b_cont,
                   const Eigen::Ref<const Eigen::RowVectorXi>& b_nom, double penalty) {
    if (a_cont.size() != b_cont.size() || a_nom.size() != b_nom.size())
        throw Error("nc_distance: row layouts differ");
    if (a_cont.size() < 1)
        throw Error("nc_distance: requires at least one continuous feature");
    if (!(penalty > 0)) throw Error("nc_distance: penalty must be positive");
    const double cont_sq = (a_cont - b_cont).squaredNorm();
    const auto differing = (a_nom.array() != b_nom.array()).count();
    return std::sqrt(cont_sq + penalty * penalty * static_cast<double>(differing));
}

std::vector<Eigen::Index> knn_minority(const Eigen::Ref<const Eigen::MatrixXd>& points,
                                       Eigen::Index query, Eigen::Index k) {
    return knn_among(points.rows(), query, k, [&](Eigen::Index i, Eigen::Index j) {
        return euclidean_distance(points.row(i), points.row(j));
    });
}

std::vector<Eigen::Index> knn_minority(const Eigen::Ref<const Eigen::MatrixXd>& cont,
                                       const Eigen::Ref<const Eigen::MatrixXi>& nom,
                                       double penalty, Eigen::Index query, Eigen::Index k) {
    if (cont.rows() != nom.rows()) throw Error("knn_minority: row counts differ");
    return knn_among(cont.rows(), query, k, [&](Eigen::Index i, Eigen::Index j) {
        return nc_distance(cont.row(i), nom.row(i), cont.row(j), nom.row(j), penalty);
    });
}

}  // namespace senc
