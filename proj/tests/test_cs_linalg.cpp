#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "csb/cs_linalg.hpp"
#include "test_support.hpp"

using namespace csb;

namespace {

CsPair random_conic(std::mt19937_64& gen, int d) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double a1 = 0.1 + 4.0 * u(gen);
    const double lo = -a1 / (d - 1);
    const double a2 = lo + (a1 - lo) * (0.02 + 0.96 * u(gen));
    return {d, a1, a2};
}

} // namespace

TEST_CASE("cone membership") {
    CHECK(cone_contains(2, 1.0, 0.5));
    CHECK_FALSE(cone_contains(3, 1.0, -0.5)); // boundary -a1/(d-1), excluded
    CHECK(cone_contains(5, 2.0, 1.9999));
    CHECK_FALSE(cone_contains(5, 2.0, 2.0));
    CHECK_FALSE(cone_contains(3, -1.0, 0.0));
    CHECK_THROWS_AS(cone_contains(1, 1.0, 0.0), dimension_error);
}

TEST_CASE("determinant closed form") {
    CHECK(cs_determinant({3, 1.0, 0.0}) == doctest::Approx(1.0));
    CHECK(cs_determinant({3, 2.0, 1.0}) == doctest::Approx(4.0));
    CHECK(cs_determinant({2, 1.0, 1.0}) == doctest::Approx(0.0));
}

TEST_CASE("inverse closed form and involution") {
    const CsPair inv = cs_inverse({3, 1.0, 0.0});
    CHECK(inv.a1 == doctest::Approx(1.0));
    CHECK(inv.a2 == doctest::Approx(0.0));

    const CsPair inv2 = cs_inverse({3, 2.0, 1.0});
    CHECK(inv2.a1 == doctest::Approx(0.75));
    CHECK(inv2.a2 == doctest::Approx(-0.25));

    CHECK_THROWS_AS(cs_inverse({3, 1.0, 1.0}), singular_error);

    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 100; ++trial) {
        const CsPair m = random_conic(gen, 2 + static_cast<int>(gen() % 9));
        const CsPair round_trip = cs_inverse(cs_inverse(m));
        CHECK(round_trip.a1 == doctest::Approx(m.a1).epsilon(1e-12));
        CHECK(round_trip.a2 == doctest::Approx(m.a2).epsilon(1e-12));
        if (m.a2 != 0.0) CHECK(m.a2 * cs_inverse(m).a2 < 0.0);
    }
}

TEST_CASE("trace product against dense multiply") {
    CHECK(cs_trace_product({2, 1.0, 0.0}, {2, 5.0, 7.0}) == doctest::Approx(5.0));
    CHECK(cs_trace_product({2, 0.0, 1.0}, {2, 5.0, 7.0}) == doctest::Approx(2.0));
    CHECK_THROWS_AS(cs_trace_product({2, 1.0, 0.0}, {3, 1.0, 1.0}), dimension_error);

    std::mt19937_64 gen(11);
    std::normal_distribution<double> z;
    const int d = 4;
    for (int trial = 0; trial < 50; ++trial) {
        const CsPair a = random_conic(gen, d);
        oracle::Mat b(d, std::vector<double>(d));
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) b[i][j] = b[j][i] = z(gen);
        double tr = 0.0, gs = 0.0;
        for (int i = 0; i < d; ++i) {
            tr += b[i][i];
            for (int j = 0; j < d; ++j) gs += b[i][j];
        }
        const double dense = oracle::trace(oracle::matmul(oracle::cs_dense(d, a.a1, a.a2), b));
        CHECK(cs_trace_product(a, {d, tr, gs}) == doctest::Approx(dense).epsilon(1e-12));
    }
}

TEST_CASE("nearest CS projection") {
    const std::vector<double> diag{1.0, 0.0, 0.0, 3.0};
    const CsPair p = nearest_cs(diag, 2);
    CHECK(p.a1 == doctest::Approx(2.0));
    CHECK(p.a2 == doctest::Approx(0.0));

    const std::vector<double> tri{2, 1, 0, 1, 2, 1, 0, 1, 2};
    const CsPair q = nearest_cs(tri, 3);
    CHECK(q.a1 == doctest::Approx(2.0));
    CHECK(q.a2 == doctest::Approx(2.0 / 3.0));

    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 20; ++trial) {
        const CsPair m = random_conic(gen, 5);
        std::vector<double> dense(25);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) dense[i * 5 + j] = i == j ? m.a1 : m.a2;
        const CsPair back = nearest_cs(dense, 5);
        CHECK(back.a1 == doctest::Approx(m.a1).epsilon(1e-13));
        CHECK(back.a2 == doctest::Approx(m.a2).epsilon(1e-13));
    }

    CHECK_THROWS_AS(nearest_cs(std::vector<double>{1.0, 2.0, 3.0}, 2), dimension_error);
}

TEST_CASE("projection minimizes Frobenius distance") {
    std::mt19937_64 gen(19);
    std::normal_distribution<double> z;
    const int d = 4;
    for (int trial = 0; trial < 20; ++trial) {
        // random PD matrix A A^T + I
        oracle::Mat a(d, std::vector<double>(d));
        for (auto& row : a)
            for (auto& v : row) v = z(gen);
        oracle::Mat b(d, std::vector<double>(d, 0.0));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                for (int k = 0; k < d; ++k) b[i][j] += a[i][k] * a[j][k];
                if (i == j) b[i][j] += 1.0;
            }
        std::vector<double> flat;
        for (const auto& row : b) flat.insert(flat.end(), row.begin(), row.end());
        const CsPair h = nearest_cs(flat, d);
        CHECK(cone_contains(h));
        const double base = oracle::frobenius_sq(b, oracle::cs_dense(d, h.a1, h.a2));
        for (const double da : {-1e-3, 1e-3}) {
            CHECK(base <= oracle::frobenius_sq(b, oracle::cs_dense(d, h.a1 + da, h.a2)));
            CHECK(base <= oracle::frobenius_sq(b, oracle::cs_dense(d, h.a1, h.a2 + da)));
        }
    }
}

TEST_CASE("cone transform bijection") {
    const CsPair a = cone_transform(1.0, 1.0, 2);
    CHECK(a.a1 == doctest::Approx(2.0));
    CHECK(a.a2 == doctest::Approx(0.0));
    const CsPair b = cone_transform(1.0, 2.0, 3);
    CHECK(b.a1 == doctest::Approx(3.0));
    CHECK(b.a2 == doctest::Approx(0.0));
    CHECK_THROWS_AS(cone_transform(-1.0, 1.0, 3), domain_error);

    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u(1e-3, 10.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const int d = 2 + static_cast<int>(gen() % 9);
        const double y1 = u(gen), y2 = u(gen);
        const CsPair m = cone_transform(y1, y2, d);
        CHECK(cone_contains(m));
        const auto [b1, b2] = cone_transform_inverse(m);
        CHECK(b1 == doctest::Approx(y1).epsilon(1e-12));
        CHECK(b2 == doctest::Approx(y2).epsilon(1e-12));
        const CsPair again = cone_transform(b1, b2, d);
        CHECK(again.a1 == doctest::Approx(m.a1).epsilon(1e-12));
        CHECK(again.a2 == doctest::Approx(m.a2).epsilon(1e-12));
    }
}

TEST_CASE("quadratic form against dense") {
    CHECK(cs_quadratic_form({2, 1.0, 0.0}, std::vector<double>{3.0, 4.0}) ==
          doctest::Approx(25.0));
    CHECK(cs_quadratic_form({2, 1.0, 1.0}, std::vector<double>{1.0, -1.0}) ==
          doctest::Approx(0.0));
    CHECK_THROWS_AS(cs_quadratic_form({3, 1.0, 0.0}, std::vector<double>{1.0}),
                    dimension_error);

    std::mt19937_64 gen(5);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 50; ++trial) {
        const CsPair m = random_conic(gen, 6);
        std::vector<double> x(6);
        for (auto& v : x) v = z(gen);
        const double dense = oracle::quad_form(oracle::cs_dense(6, m.a1, m.a2), x);
        CHECK(cs_quadratic_form(m, x) == doctest::Approx(dense).epsilon(1e-12));
    }
}

TEST_CASE("dense agreement on random conic instances") {
    std::mt19937_64 gen(123);
    for (int trial = 0; trial < 1000; ++trial) {
        const int d = 2 + static_cast<int>(gen() % 9);
        const CsPair m = random_conic(gen, d);
        const oracle::Mat dense = oracle::cs_dense(d, m.a1, m.a2);
        CHECK(cs_determinant(m) ==
              doctest::Approx(oracle::det(dense)).epsilon(1e-10));
        CHECK(cs_determinant(m) > 0.0);
        const CsPair inv = cs_inverse(m);
        const oracle::Mat dinv = oracle::inverse(dense);
        CHECK(inv.a1 == doctest::Approx(dinv[0][0]).epsilon(1e-10));
        if (d >= 2) CHECK(inv.a2 == doctest::Approx(dinv[0][1]).epsilon(1e-10));
    }
}

TEST_CASE("summary of PD matrices satisfies the strict trace bounds") {
    std::mt19937_64 gen(321);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + static_cast<int>(gen() % 7);
        oracle::Mat a(d, std::vector<double>(d));
        for (auto& row : a)
            for (auto& v : row) v = z(gen);
        oracle::Mat b(d, std::vector<double>(d, 0.0));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                for (int k = 0; k < d; ++k) b[i][j] += a[i][k] * a[j][k];
                if (i == j) b[i][j] += 0.05;
            }
        std::vector<double> flat;
        for (const auto& row : b) flat.insert(flat.end(), row.begin(), row.end());
        const SymmetricSummary s = summarize_symmetric(flat, d);
        CHECK(s.grand_sum - s.trace > -s.trace);
        CHECK(s.grand_sum - s.trace < (d - 1) * s.trace);
    }
}
