#include "prdim/local_dim.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "prdim/estimator.hpp"
#include "prdim/parallel.hpp"

namespace prdim {

namespace {

struct LocalInput {
    const Matrix* trial1;
    const Matrix* trial2;  // null for single matrix
    Matrix base;           // distance base: trial mean for pairs
};

// Per-center metric: squared distances from the center row to every row.
class CenterMetric {
  public:
    CenterMetric(const Matrix& base, const Vector& sq_norms, Index center, const BallSpec& ball) {
        euclid_sq_ = sq_norms;
        euclid_sq_.array() += sq_norms[center];
        euclid_sq_.noalias() -= 2.0 * (base * base.row(center).transpose());
        euclid_sq_ = euclid_sq_.cwiseMax(0.0);
        euclid_sq_[center] = 0.0;
        if (ball.metric == LocalMetric::euclidean) {
            dist_sq_ = euclid_sq_;
            return;
        }

        // local Mahalanobis: pseudoinverse of the covariance of the k
        // nearest Euclidean neighbors (center excluded)
        const Index p = base.rows();
        const Index k = ball.k_neighbors > 0 ? ball.k_neighbors
                                             : std::min<Index>(p - 1, 20);
        std::vector<Index> order(static_cast<std::size_t>(p));
        std::iota(order.begin(), order.end(), Index{0});
        std::nth_element(order.begin(), order.begin() + k, order.end(), [&](Index x, Index y) {
            if (x == center) return false;  // center sorts last among ties
            if (y == center) return true;
            return euclid_sq_[x] < euclid_sq_[y];
        });
        // nth_element puts k closest non-center rows first except that the
        // center itself (distance 0) may occupy one slot; filter it out
        std::vector<Index> nn;
        nn.reserve(static_cast<std::size_t>(k) + 1);
        for (Index i = 0; i < p && static_cast<Index>(nn.size()) < k; ++i) {
            const Index cand = order[static_cast<std::size_t>(i)];
            if (cand != center) nn.push_back(cand);
        }

        Matrix z(static_cast<Index>(nn.size()), base.cols());
        for (Index i = 0; i < z.rows(); ++i) z.row(i) = base.row(nn[static_cast<std::size_t>(i)]);
        const Eigen::RowVectorXd mean = z.colwise().mean();
        z.rowwise() -= mean;

        Eigen::JacobiSVD<Matrix> svd(z, Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        const double tol =
            static_cast<double>(std::max(z.rows(), z.cols())) *
            std::numeric_limits<double>::epsilon() * (sv.size() > 0 ? sv[0] : 0.0);
        Index rank = 0;
        while (rank < sv.size() && sv[rank] > tol) ++rank;
        if (rank == 0) {
            // all neighbors coincide; metric degenerates to zero => every
            // point is inside any ball
            dist_sq_ = Vector::Zero(p);
            return;
        }
        // Sigma = V S^2 V^T / (k-1); dist^2 = (k-1) |S^-1 V^T (x - x0)|^2
        const Matrix v = svd.matrixV().leftCols(rank);
        const Vector inv_s = sv.head(rank).cwiseInverse();
        const double scale = static_cast<double>(z.rows() - 1);
        Matrix proj = (base.rowwise() - base.row(center)) * v;
        proj = proj * inv_s.asDiagonal();
        dist_sq_ = scale * proj.rowwise().squaredNorm();
        dist_sq_[center] = 0.0;
    }

    const Vector& dist_sq() const { return dist_sq_; }

  private:
    Vector euclid_sq_;
    Vector dist_sq_;
};

DimEstimate estimate_ball(const LocalInput& in, const std::vector<Index>& members,
                          const EstimatorVariant& variant) {
    const Index m = static_cast<Index>(members.size());
    Matrix sub1(m, in.trial1->cols());
    for (Index i = 0; i < m; ++i) sub1.row(i) = in.trial1->row(members[static_cast<std::size_t>(i)]);
    if (in.trial2 == nullptr) {
        return estimate_dimensionality(SampleMatrix(std::move(sub1)), variant);
    }
    Matrix sub2(m, in.trial2->cols());
    for (Index i = 0; i < m; ++i) sub2.row(i) = in.trial2->row(members[static_cast<std::size_t>(i)]);
    return estimate_dimensionality(
        TrialPair(SampleMatrix(std::move(sub1)), SampleMatrix(std::move(sub2))), variant);
}

std::vector<LocalDimResult> sweep_impl(const LocalInput& in, const BallSpec& ball,
                                       const std::vector<double>& radii,
                                       const EstimatorVariant& variant, int threads) {
    const Index p = in.base.rows();
    if (p < 4) throw InsufficientRows("local dimensionality needs at least 4 rows");
    if (radii.empty()) throw PreconditionError("radius list is empty");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw PreconditionError("radii must be positive");
        if (i > 0 && radii[i] < radii[i - 1]) {
            throw PreconditionError("radii must be sorted ascending");
        }
    }
    ball.validate(p);

    const Vector sq_norms = in.base.rowwise().squaredNorm();

    // per center x radius estimates, reduced in center order afterwards
    const std::size_t n_radii = radii.size();
    std::vector<std::vector<LocalCenterEstimate>> cells(
        static_cast<std::size_t>(p), std::vector<LocalCenterEstimate>(n_radii));

    parallel_for(
        p,
        [&](std::ptrdiff_t center) {
            const CenterMetric metric(in.base, sq_norms, center, ball);
            const Vector& d2 = metric.dist_sq();
            for (std::size_t ri = 0; ri < n_radii; ++ri) {
                const double r2 = radii[ri] * radii[ri];
                std::vector<Index> members;
                for (Index j = 0; j < p; ++j) {
                    if (d2[j] <= r2) members.push_back(j);
                }
                LocalCenterEstimate& cell = cells[static_cast<std::size_t>(center)][ri];
                cell.center = center;
                cell.ball_size = static_cast<Index>(members.size());
                if (cell.ball_size < 4) {
                    cell.estimate.valid = false;
                    cell.estimate.variant = variant;
                    cell.estimate.diagnostics = "ball has fewer than 4 points";
                } else {
                    cell.estimate = estimate_ball(in, members, variant);
                }
            }
        },
        threads);

    std::vector<LocalDimResult> out(n_radii);
    for (std::size_t ri = 0; ri < n_radii; ++ri) {
        LocalDimResult& res = out[ri];
        res.radius = radii[ri];
        res.per_center.reserve(static_cast<std::size_t>(p));
        double acc = 0.0;
        for (Index c = 0; c < p; ++c) {
            const LocalCenterEstimate& cell = cells[static_cast<std::size_t>(c)][ri];
            res.per_center.push_back(cell);
            if (cell.estimate.valid) {
                acc += cell.estimate.value;
                ++res.valid_centers;
            } else {
                ++res.skipped_centers;
            }
        }
        res.mean_gamma = res.valid_centers > 0 ? acc / static_cast<double>(res.valid_centers)
                                               : std::numeric_limits<double>::quiet_NaN();
    }

    bool any_valid = false;
    for (const auto& res : out) any_valid = any_valid || res.valid_centers > 0;
    if (!any_valid) {
        throw AllBallsDegenerate("every ball was skipped at every radius");
    }
    return out;
}

LocalInput make_input(const SampleMatrix& phi) {
    return LocalInput{&phi.values(), nullptr, phi.values()};
}

LocalInput make_input(const TrialPair& pair) {
    return LocalInput{&pair.trial1().values(), &pair.trial2().values(),
                      0.5 * (pair.trial1().values() + pair.trial2().values())};
}

}  // namespace

void BallSpec::validate(Index p) const {
    if (!(radius > 0.0)) throw PreconditionError("ball radius must be positive");
    if (metric == LocalMetric::local_mahalanobis) {
        const Index k = k_neighbors > 0 ? k_neighbors : std::min<Index>(p - 1, 20);
        if (k < 2) throw PreconditionError("local metric needs k_neighbors >= 2");
        if (k > p - 1) throw PreconditionError("k_neighbors exceeds the available neighbors");
    }
}

LocalDimResult local_dimensionality(const SampleMatrix& phi, const BallSpec& ball,
                                    const EstimatorVariant& variant, int threads) {
    return sweep_impl(make_input(phi), ball, {ball.radius}, variant, threads).front();
}

LocalDimResult local_dimensionality(const TrialPair& pair, const BallSpec& ball,
                                    const EstimatorVariant& variant, int threads) {
    return sweep_impl(make_input(pair), ball, {ball.radius}, variant, threads).front();
}

std::vector<LocalDimResult> radius_sweep(const SampleMatrix& phi, const BallSpec& ball_template,
                                         const std::vector<double>& radii,
                                         const EstimatorVariant& variant, int threads) {
    return sweep_impl(make_input(phi), ball_template, radii, variant, threads);
}

std::vector<LocalDimResult> radius_sweep(const TrialPair& pair, const BallSpec& ball_template,
                                         const std::vector<double>& radii,
                                         const EstimatorVariant& variant, int threads) {
    return sweep_impl(make_input(pair), ball_template, radii, variant, threads);
}

double twonn(const SampleMatrix& phi) {
    const Matrix& x = phi.values();
    const Index p = x.rows();
    if (p < 3) throw InsufficientRows("TwoNN needs at least 3 points");

    const Vector sq_norms = x.rowwise().squaredNorm();
    double log_sum = 0.0;
    // row-chunked distance computation keeps memory at O(chunk * P)
    constexpr Index kChunk = 256;
    for (Index lo = 0; lo < p; lo += kChunk) {
        const Index hi = std::min(p, lo + kChunk);
        Matrix block = (-2.0 * x.middleRows(lo, hi - lo) * x.transpose());
        block.colwise() += sq_norms.segment(lo, hi - lo);
        block.rowwise() += sq_norms.transpose();
        for (Index i = lo; i < hi; ++i) {
            double best1 = std::numeric_limits<double>::infinity();
            double best2 = best1;
            for (Index j = 0; j < p; ++j) {
                if (j == i) continue;
                const double d2 = std::max(block(i - lo, j), 0.0);
                if (d2 < best1) {
                    best2 = best1;
                    best1 = d2;
                } else if (d2 < best2) {
                    best2 = d2;
                }
            }
            if (!(best1 > 0.0)) {
                throw DuplicatePoints("TwoNN found coincident rows (first neighbor at distance 0)");
            }
            log_sum += 0.5 * std::log(best2 / best1);
        }
    }
    if (!(log_sum > 0.0)) {
        throw NumericalError("TwoNN log-ratio sum is not positive");
    }
    return static_cast<double>(p) / log_sum;
}

}  // namespace prdim
