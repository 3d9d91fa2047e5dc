#include "lambflux/errors.hpp"
#include "lambflux/model.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace lambflux;

TEST_CASE("eigenvalues agree with numeric diagonalization") {
    for (auto p : {model::SystemParams{3, 2, 0.5}, model::SystemParams{2.75, 2.25, 0.5},
                   model::SystemParams{2.5, 2.5, 0.5}, model::SystemParams{7, 0.3, 2.1}}) {
        const auto es = model::diagonalize(p);
        auto analytic = es.eigenvalues;
        std::sort(analytic.begin(), analytic.end());
        const auto numeric = oracle::numeric_eigenvalues(model::hamiltonian_matrix(p));
        for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(analytic[i] - numeric[i]) < 1e-12);
        CHECK(es.omega2 - es.omega1 == doctest::Approx(2 * es.alpha).epsilon(1e-14));
        CHECK(es.alpha <= es.beta);
        CHECK(es.omega1 > 0.0);
    }
}

TEST_CASE("reference parameters eps = (3, 2), g = 0.5") {
    const auto es = model::diagonalize({3, 2, 0.5});
    CHECK(es.alpha == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(es.beta == doctest::Approx(std::sqrt(6.5)).epsilon(1e-15));
    CHECK(es.omega1 == doctest::Approx(std::sqrt(6.5) - std::sqrt(0.5)).epsilon(1e-15));
    CHECK(es.phi_plus == doctest::Approx(0.5 * (es.theta + es.phi)));
    CHECK(es.phi_minus == doctest::Approx(0.5 * (es.theta - es.phi)));
}

TEST_CASE("eigenvectors diagonalize the product-basis Hamiltonian") {
    const model::SystemParams p{3, 2, 0.5};
    const auto es = model::diagonalize(p);
    const Eigen::Matrix4d U = es.vectors;
    CHECK((U.transpose() * U - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    const Eigen::Matrix4d D = U.transpose() * model::hamiltonian_matrix(p) * U;
    CHECK((D - es.hamiltonian()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("hamiltonian_matrix layout") {
    const Eigen::Matrix4d H = model::hamiltonian_matrix({3, 2, 0});
    CHECK(H(0, 0) == 2.5);
    CHECK(H(1, 1) == 0.5);
    CHECK(H(2, 2) == -0.5);
    CHECK(H(3, 3) == -2.5);
    CHECK(model::hamiltonian_matrix({2, 2, 0}).trace() == 0.0);
    CHECK_THROWS_AS(model::hamiltonian_matrix({NAN, 2, 1}), DomainError);
}

TEST_CASE("eigenoperators lower the energy by omega_mu") {
    const auto es = model::diagonalize({2.75, 2.25, 0.5});
    const auto ops = model::eigenoperators(es);
    const Eigen::Matrix4d H = es.hamiltonian();
    for (const auto& op : ops.ops) {
        const Eigen::Matrix4d V = op.matrix();
        CHECK((H * V - V * H + op.frequency * V).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("sigma_x reconstructs from eigenoperators") {
    const auto es = model::diagonalize({3, 2, 0.5});
    const auto ops = model::eigenoperators(es);
    for (int j = 1; j <= 2; ++j) {
        Eigen::Matrix4d sum = Eigen::Matrix4d::Zero();
        for (int mu = 1; mu <= 2; ++mu) {
            const Eigen::Matrix4d V = ops.at(j, mu).matrix();
            sum += V + V.transpose();
        }
        const Eigen::Matrix4d target = model::to_eigenbasis(es, model::sigma_x(j));
        CHECK((sum - target).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("domain errors") {
    auto code = [](model::SystemParams p) {
        try {
            model::diagonalize(p);
        } catch (const DomainError& e) {
            return e.code();
        }
        return std::string("none");
    };
    CHECK(code({2, 3, 0.5}) == "domain.epsilon_order");
    CHECK(code({3, 0, 0.5}) == "domain.epsilon_positive");
    CHECK(code({3, 2, 0}) == "domain.coupling_positive");
    CHECK(code({INFINITY, 2, 0.5}) == "domain.system_finite");
    CHECK(model::ordered({2, 3, 0.5}).epsilon1 == 3);
}
