// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <array>
#include <limits>
#include <mutex>
#include <vector>

#include "armt/tensor/kernels.hpp"
#include "armt/tensor/ops.hpp"
#include "armt/tensor/thread_pool.hpp"
#include "test_support.hpp"

using namespace armt;
using armt::testing::random_tensor;

namespace {

// Independent triple loop: c[i][j] = ((0 + a[i][0] b[0][j]) + a[i][1] b[1][j]) + ...
template <Real T>
Tensor<T> triple_loop(const Tensor<T>& a, const Tensor<T>& b) {
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    Tensor<T> c = Tensor<T>::matrix(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            T acc = 0;
            for (std::size_t t = 0; t < k; ++t) {
                const T prod = a.at(i, t) * b.at(t, j);
                acc = acc + prod;
            }
            c.at(i, j) = acc;
        }
    }
    return c;
}

std::vector<kernels::Isa> available_isas() {
    std::vector<kernels::Isa> out;
    for (auto isa : {kernels::Isa::Scalar, kernels::Isa::Avx2, kernels::Isa::Neon}) {
        if (kernels::isa_available(isa)) out.push_back(isa);
    }
    return out;
}

struct IsaGuard {
    kernels::Isa saved = kernels::active_isa();
    ~IsaGuard() { kernels::set_active_isa(saved); }
};

}  // namespace

TEST_CASE("tensor shape and element count agree", "[tensor]") {
    Tensor<float> t({2, 3, 4}, 1.5f);
    CHECK(t.numel() == 24);
    CHECK(shape_numel(t.shape()) == t.numel());
    CHECK(shape_string(t.shape()) == "[2x3x4]");
    CHECK_THROWS_AS(Tensor<double>({2, 2}, std::vector<double>{1, 2, 3}), DimensionError);
    CHECK_THROWS_AS(t.rows(), DimensionError);
    CHECK(t.slab(1).rows == 3);
    CHECK(t.slab(1).data == t.data().data() + 12);
    CHECK_THROWS_AS(t.slab(2), DimensionError);
}

TEST_CASE("grouped buffer slices are contiguous and disjoint", "[tensor]") {
    GroupedBuffer<double> buf(5, {3, 4});
    REQUIRE(buf.backing().size() == 60);
    for (std::size_t g = 0; g < 5; ++g) {
        CHECK(buf.offset(g) == g * 12);
        CHECK(buf.slice(g).data() == buf.backing().data() + g * 12);
        CHECK(buf.matrix(g).rows == 3);
        CHECK(buf.matrix(g).cols == 4);
    }
    for (std::size_t g = 0; g < 5; ++g) {
        for (auto& v : buf.slice(g)) v = static_cast<double>(g);
    }
    for (std::size_t i = 0; i < 60; ++i) {
        CHECK(buf.backing()[i] == static_cast<double>(i / 12));
    }
    CHECK_THROWS_AS(buf.slice(5), DimensionError);
}

TEST_CASE("gemm hand-checked cases", "[gemm]") {
    const auto eye = Tensor<double>::from_rows({{1, 0}, {0, 1}});
    const auto b = Tensor<double>::from_rows({{1, 2}, {3, 4}});
    CHECK(gemm(eye, b) == b);
    const auto row = Tensor<double>::from_rows({{1, 2}});
    const auto col = Tensor<double>::from_rows({{3}, {4}});
    const auto c = gemm(row, col);
    REQUIRE(c.shape() == Shape{1, 1});
    CHECK(c[0] == 11.0);
    CHECK_THROWS_AS(gemm(row, row), DimensionError);
}

TEMPLATE_TEST_CASE("gemm matches a triple-loop oracle bitwise", "[gemm]", float, double) {
    IsaGuard guard;
    for (auto isa : available_isas()) {
        kernels::set_active_isa(isa);
        for (auto [m, k, n] : std::vector<std::array<std::size_t, 3>>{
                 {8, 8, 8}, {1, 1, 1}, {5, 7, 3}, {13, 17, 19}, {4, 33, 40}, {9, 16, 31}}) {
            INFO("isa=" << kernels::isa_name(isa) << " m=" << m << " k=" << k << " n=" << n);
            const auto a = random_tensor<TestType>({m, k}, 11 * m + k);
            const auto b = random_tensor<TestType>({k, n}, 13 * n + k);
            CHECK(bitwise_equal(gemm(a, b), triple_loop(a, b)));
        }
    }
}

TEMPLATE_TEST_CASE("vector kernels equal the scalar reference bitwise", "[gemm][simd]", float,
                   double) {
    IsaGuard guard;
    const auto isas = available_isas();
    for (std::size_t n : {1u, 3u, 4u, 7u, 8u, 15u, 16u, 17u, 64u, 129u}) {
        const auto a = random_tensor<TestType>({6, n}, n);
        const auto b = random_tensor<TestType>({n, n + 3}, n + 1);
        const auto x = random_tensor<TestType>({n}, n + 2);
        const auto y0 = random_tensor<TestType>({n}, n + 3);

        kernels::set_active_isa(kernels::Isa::Scalar);
        const auto ref_gemm = gemm(a, b);
        auto ref_axpy = y0;
        kernels::axpy<TestType>(TestType(0.37), x.data(), ref_axpy.data());
        auto ref_add = y0;
        kernels::add_inplace<TestType>(x.data(), ref_add.data());

        for (auto isa : isas) {
            INFO("isa=" << kernels::isa_name(isa) << " n=" << n);
            kernels::set_active_isa(isa);
            CHECK(bitwise_equal(gemm(a, b), ref_gemm));
            auto y = y0;
            kernels::axpy<TestType>(TestType(0.37), x.data(), y.data());
            CHECK(bitwise_equal(y, ref_axpy));
            y = y0;
            kernels::add_inplace<TestType>(x.data(), y.data());
            CHECK(bitwise_equal(y, ref_add));
        }
    }
}

TEST_CASE("isa selection rejects unavailable targets", "[simd]") {
    IsaGuard guard;
    CHECK(kernels::isa_available(kernels::Isa::Scalar));
    CHECK(kernels::parse_isa("avx2") == kernels::Isa::Avx2);
    CHECK_FALSE(kernels::parse_isa("sse9").has_value());
    for (auto isa : {kernels::Isa::Avx2, kernels::Isa::Neon}) {
        if (!kernels::isa_available(isa)) {
            CHECK_THROWS(kernels::set_active_isa(isa));
        }
    }
}

TEMPLATE_TEST_CASE("grouped gemm equals looped gemm bitwise", "[grouped]", float, double) {
    ThreadPool pool(3);
    for (std::size_t G = 1; G <= 32; ++G) {
        std::vector<Tensor<TestType>> as, bs;
        for (std::size_t g = 0; g < G; ++g) {
            as.push_back(random_tensor<TestType>({5, 9}, 100 * G + g));
            bs.push_back(random_tensor<TestType>({9, 6}, 200 * G + g));
        }
        for (ThreadPool* p : {static_cast<ThreadPool*>(nullptr), &pool}) {
            auto out = grouped_gemm(as, bs, GroupedBuffer<TestType>(G, {5, 6}), p);
            for (std::size_t g = 0; g < G; ++g) {
                INFO("G=" << G << " g=" << g);
                const auto ref = gemm(as[g], bs[g]);
                CHECK(bitwise_equal<TestType>(out.slice(g), ref.data()));
            }
        }
    }
}

TEST_CASE("grouped gemm with identical members gives identical slices", "[grouped]") {
    const auto a = random_tensor<double>({4, 4}, 1);
    const auto b = random_tensor<double>({4, 4}, 2);
    auto out = grouped_gemm<double>({a, a, a, a}, {b, b, b, b}, GroupedBuffer<double>(4, {4, 4}));
    for (std::size_t g = 1; g < 4; ++g) {
        CHECK(bitwise_equal<double>(out.slice(g), out.slice(0)));
    }
}

TEST_CASE("grouped gemm validates shapes and group size", "[grouped]") {
    const auto a = random_tensor<double>({4, 3}, 1);
    const auto b = random_tensor<double>({3, 2}, 2);
    const auto bad = random_tensor<double>({4, 2}, 3);
    CHECK_THROWS_AS(grouped_gemm<double>({a, a}, {b, b}, GroupedBuffer<double>(3, {4, 2})),
                    DimensionError);
    CHECK_THROWS_AS(grouped_gemm<double>({a, a}, {b, bad}, GroupedBuffer<double>(2, {4, 2})),
                    DimensionError);
    CHECK_THROWS_AS(grouped_gemm<double>({a}, {b}, GroupedBuffer<double>(1, {4, 3})),
                    DimensionError);
}

TEST_CASE("gemm is reproducible across calls and pool sizes", "[gemm][threads]") {
    const auto a = random_tensor<float>({24, 40}, 5);
    const auto b = random_tensor<float>({40, 24}, 6);
    const auto first = gemm(a, b);
    CHECK(bitwise_equal(gemm(a, b), first));
    std::vector<Tensor<float>> as(8, a), bs(8, b);
    for (std::size_t workers : {1u, 2u, 4u, 8u}) {
        ThreadPool pool(workers);
        auto out = grouped_gemm(as, bs, GroupedBuffer<float>(8, {24, 24}), &pool);
        for (std::size_t g = 0; g < 8; ++g) {
            CHECK(bitwise_equal<float>(out.slice(g), first.data()));
        }
    }
}

TEST_CASE("rms norm of a constant row is sign-preserving unit rms", "[norm]") {
    for (double v : {3.0, -2.5, 1e-3}) {
        Tensor<double> x({1, 1, 6}, v);
        Tensor<double> gains({1, 6}, 1.0);
        const auto y = rms_norm_stacked(x, gains, 0.0);
        for (double e : y.data()) {
            CHECK(e == Catch::Approx(v / std::abs(v)).epsilon(1e-15));
        }
    }
}

TEST_CASE("rms norm follows the per-row formula with eps", "[norm]") {
    const auto x = Tensor<double>::from_rows({{1, 2, 3, 4}});
    const std::vector<double> gain{1, 2, 0.5, -1};
    Tensor<double> y = Tensor<double>::matrix(1, 4);
    const double eps = 1e-5;
    rms_norm_rows<double>(x.view(), gain, eps, y.view());
    const double inv = 1.0 / std::sqrt((1 + 4 + 9 + 16) / 4.0 + eps);
    for (std::size_t c = 0; c < 4; ++c) {
        CHECK(y.at(0, c) == Catch::Approx(x.at(0, c) * inv * gain[c]).epsilon(1e-15));
    }
}

TEST_CASE("stacked rms norm equals independent per-member norms", "[norm][grouped]") {
    const auto x = random_tensor<double>({2, 5, 8}, 9);
    const auto gains = random_tensor<double>({2, 8}, 10);
    const auto y = rms_norm_stacked(x, gains, 1e-5);
    for (std::size_t g = 0; g < 2; ++g) {
        Tensor<double> ref = Tensor<double>::matrix(5, 8);
        rms_norm_rows<double>(x.slab(g), std::span<const double>(gains.data().data() + g * 8, 8),
                              1e-5, ref.view());
        CHECK(bitwise_equal<double>(std::span<const double>(y.data().data() + g * 40, 40),
                                    ref.data()));
    }
    CHECK_THROWS_AS(rms_norm_stacked(x, random_tensor<double>({3, 8}, 1), 1e-5), DimensionError);
    CHECK_THROWS_AS(rms_norm_stacked(x, random_tensor<double>({2, 7}, 1), 1e-5), DimensionError);
}

TEMPLATE_TEST_CASE("rms norm of a zero row is zero", "[norm]", float, double) {
    Tensor<TestType> x({2, 3, 4}, TestType(0));
    Tensor<TestType> gains({2, 4}, TestType(1));
    const auto y = rms_norm_stacked(x, gains, TestType(1e-5));
    CHECK(all_finite<TestType>(y.data()));
    for (auto v : y.data()) CHECK(v == TestType(0));
}

TEST_CASE("softmax over a causal prefix", "[ops]") {
    auto m = Tensor<double>::from_rows({{1, 5, 7}, {2, 2, 9}, {0, 1, 2}});
    const std::vector<std::size_t> valid{1, 2, 3};
    softmax_prefix_rows<double>(m.view(), valid);
    CHECK(m.at(0, 0) == 1.0);
    CHECK(m.at(0, 1) == 0.0);
    CHECK(m.at(1, 0) == Catch::Approx(0.5));
    CHECK(m.at(1, 2) == 0.0);
    const double s = std::exp(-2.0) + std::exp(-1.0) + 1.0;
    CHECK(m.at(2, 2) == Catch::Approx(1.0 / s));
    CHECK(m.at(2, 0) + m.at(2, 1) + m.at(2, 2) == Catch::Approx(1.0));
}

TEST_CASE("ops keep finite inputs finite", "[ops][property]") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = random_tensor<float>({6, 10}, seed, 50.0);
        const auto b = random_tensor<float>({10, 6}, seed + 100, 50.0);
        CHECK(all_finite<float>(gemm(a, b).data()));
        auto sm = gemm(a, b);
        std::vector<std::size_t> valid(6, 6);
        softmax_prefix_rows<float>(sm.view(), valid);
        CHECK(all_finite<float>(sm.data()));
        Tensor<float> y = Tensor<float>::matrix(6, 10);
        std::vector<float> gain(10, 1.0f);
        rms_norm_rows<float>(a.view(), gain, 1e-5f, y.view());
        CHECK(all_finite<float>(y.data()));
    }
    CHECK(sigmoid(-1000.0f) == 0.0f);
    CHECK(sigmoid(1000.0f) == 1.0f);
    CHECK(std::isfinite(silu(-1000.0)));
}

TEST_CASE("thread pool runs every index once and propagates errors", "[threads]") {
    for (std::size_t workers : {0u, 1u, 3u, 8u}) {
        ThreadPool pool(workers);
        std::vector<int> hits(100, 0);
        pool.parallel_for(hits.size(), [&](std::size_t i, std::size_t w) {
            CHECK(w < pool.size());
            hits[i] += 1;
        });
        for (int h : hits) CHECK(h == 1);
        CHECK_THROWS_AS(pool.parallel_for(10,
                                          [](std::size_t i, std::size_t) {
                                              if (i == 7) throw std::runtime_error("boom");
                                          }),
                        std::runtime_error);
        int after = 0;
        pool.parallel_for(4, [&](std::size_t, std::size_t) {
            static std::mutex m;
            std::lock_guard lock(m);
            ++after;
        });
        CHECK(after == 4);
    }
}
