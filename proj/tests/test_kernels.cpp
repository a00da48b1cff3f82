/// @file  test_kernels.cpp
/// @brief Backend equivalence tests: every SIMD variant must agree with the
///        scalar reference.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ordembed/kernels.hpp>
#include <ordembed/rng.hpp>

#include <cmath>
#include <vector>

using namespace ordembed;

namespace {

std::vector<kernels::Backend> available_backends() {
    std::vector<kernels::Backend> v{kernels::Backend::Scalar};
    if (kernels::supported(kernels::Backend::Avx2)) v.push_back(kernels::Backend::Avx2);
    return v;
}

struct BackendGuard {
    kernels::Backend saved = kernels::active();
    ~BackendGuard() { kernels::select(saved); }
};

}  // namespace

TEST_CASE("scalar backend is always supported") {
    CHECK(kernels::supported(kernels::Backend::Scalar));
    CHECK(kernels::name(kernels::Backend::Scalar) == std::string("scalar"));
}

TEST_CASE("per-element kernels are bit-identical across backends") {
    BackendGuard guard;
    Rng rng(1234);
    for (const std::size_t count : {1ul, 3ul, 4ul, 7ul, 64ul, 129ul}) {
        for (const std::size_t dim : {1ul, 2ul, 3ul, 5ul}) {
            std::vector<double> point(dim), coords(count * dim);
            for (auto& v : point) v = rng.normal();
            for (auto& v : coords) v = rng.normal();

            kernels::select(kernels::Backend::Scalar);
            std::vector<double> d2_ref(count), dot_ref(count);
            kernels::squared_distance_row(point.data(), coords.data(), count, dim,
                                          d2_ref.data());
            kernels::dot_row(point.data(), coords.data(), count, dim, dot_ref.data());

            for (const kernels::Backend b : available_backends()) {
                kernels::select(b);
                std::vector<double> d2(count), dot(count);
                kernels::squared_distance_row(point.data(), coords.data(), count, dim,
                                              d2.data());
                kernels::dot_row(point.data(), coords.data(), count, dim, dot.data());
                for (std::size_t k = 0; k < count; ++k) {
                    CHECK(d2[k] == d2_ref[k]);
                    CHECK(dot[k] == dot_ref[k]);
                }
            }
        }
    }
}

TEST_CASE("count_ge is exact on every backend") {
    BackendGuard guard;
    Rng rng(99);
    const std::size_t values_n = 257;
    std::vector<double> values(values_n);
    for (auto& v : values) v = rng.uniform();
    values[10] = values[20];  // planted tie

    for (const std::size_t count : {0ul, 1ul, 5ul, 128ul, 1001ul}) {
        std::vector<std::int32_t> a(count), b(count);
        for (std::size_t t = 0; t < count; ++t) {
            a[t] = static_cast<std::int32_t>(rng.index(values_n));
            b[t] = static_cast<std::int32_t>(rng.index(values_n));
        }
        if (count > 2) {
            a[0] = 10;  // exercise the tie path
            b[0] = 20;
        }
        kernels::select(kernels::Backend::Scalar);
        const auto ref = kernels::count_ge(values.data(), a.data(), b.data(), count);
        for (const kernels::Backend back : available_backends()) {
            kernels::select(back);
            CHECK(kernels::count_ge(values.data(), a.data(), b.data(), count) == ref);
        }
    }
}

TEST_CASE("hinge_stats: exact active count, loss within reduction tolerance") {
    BackendGuard guard;
    Rng rng(7);
    const std::size_t values_n = 300;
    std::vector<double> values(values_n);
    for (auto& v : values) v = rng.normal();

    for (const std::size_t count : {0ul, 3ul, 4ul, 255ul, 4096ul}) {
        std::vector<std::int32_t> a(count), b(count);
        for (std::size_t t = 0; t < count; ++t) {
            a[t] = static_cast<std::int32_t>(rng.index(values_n));
            b[t] = static_cast<std::int32_t>(rng.index(values_n));
        }
        for (const double margin : {0.0, 0.01, 0.5}) {
            kernels::select(kernels::Backend::Scalar);
            const auto ref = kernels::hinge_stats(values.data(), a.data(), b.data(),
                                                  count, margin);
            for (const kernels::Backend back : available_backends()) {
                kernels::select(back);
                const auto got = kernels::hinge_stats(values.data(), a.data(), b.data(),
                                                      count, margin);
                CHECK(got.active == ref.active);
                CHECK(got.loss ==
                      doctest::Approx(ref.loss).epsilon(1e-13).scale(std::max(1.0, ref.loss)));
            }
        }
    }
}

TEST_CASE("hinge_stats semantics on a tiny hand case") {
    // values = [0, 1, 3]; pairs (0,1): margin+0-1, (2,1): margin+3-1.
    const std::vector<double> values{0.0, 1.0, 3.0};
    const std::vector<std::int32_t> a{0, 2};
    const std::vector<std::int32_t> b{1, 1};
    const auto s = kernels::hinge_stats(values.data(), a.data(), b.data(), 2, 0.5);
    CHECK(s.active == 1);
    CHECK(s.loss == doctest::Approx(2.5));
    const auto ge = kernels::count_ge(values.data(), a.data(), b.data(), 2);
    CHECK(ge == 1);
}

TEST_CASE("selecting an unsupported backend throws") {
    if (!kernels::supported(kernels::Backend::Avx2)) {
        CHECK_THROWS_AS(kernels::select(kernels::Backend::Avx2), std::invalid_argument);
    }
}
