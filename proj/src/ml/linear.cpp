#include <numaopt/ml/models.hpp>

#include <Eigen/Dense>

#include <stdexcept>

namespace numaopt::ml {

namespace {
constexpr double kRidge = 1e-6;
}

double LinearModel::predict(const FeatureVector& f) const {
    double s = intercept;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        s += coefficients[i] * f[i];
    }
    return s;
}

LinearModel train_linear(std::span<const TrainingSample> train) {
    constexpr auto p = static_cast<Eigen::Index>(kFeatureCount + 1);
    if (train.size() < static_cast<std::size_t>(p)) {
        throw std::invalid_argument("train_linear: need at least 5 samples");
    }
    const auto n = static_cast<Eigen::Index>(train.size());
    Eigen::MatrixXd a(n, p);
    Eigen::VectorXd b(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& s = train[static_cast<std::size_t>(r)];
        s.validate();
        a(r, 0) = 1.0;
        for (Eigen::Index f = 0; f < p - 1; ++f) {
            a(r, f + 1) = s.features[static_cast<std::size_t>(f)];
        }
        b(r) = s.label;
    }

    LinearModel model;
    Eigen::VectorXd beta;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() == p) {
        beta = qr.solve(b);
    } else {
        // Penalize the slopes only; the intercept stays free.
        Eigen::MatrixXd gram = a.transpose() * a;
        for (Eigen::Index i = 1; i < p; ++i) {
            gram(i, i) += kRidge;
        }
        beta = gram.ldlt().solve(a.transpose() * b);
        model.ridge_fallback = true;
    }
    model.intercept = beta(0);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        model.coefficients[f] = beta(static_cast<Eigen::Index>(f) + 1);
    }
    return model;
}

} // namespace numaopt::ml
