// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <string>

#include "armt/tensor/kernels.hpp"

namespace armt::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(ARMT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa initial_isa() {
    if (const char* env = std::getenv("ARMT_ISA")) {
        if (auto isa = parse_isa(env); isa && isa_available(*isa)) {
            return *isa;
        }
    }
    if (isa_available(Isa::Avx2)) {
        return Isa::Avx2;
    }
    if (isa_available(Isa::Neon)) {
        return Isa::Neon;
    }
    return Isa::Scalar;
}

std::atomic<Isa>& active() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

void require_gemm_shapes(std::size_t ar, std::size_t ac, std::size_t br, std::size_t bc,
                         std::size_t cr, std::size_t cc) {
    if (ac != br || cr != ar || cc != bc) {
        throw DimensionError("gemm shape mismatch: [" + std::to_string(ar) + "x" +
                             std::to_string(ac) + "] * [" + std::to_string(br) + "x" +
                             std::to_string(bc) + "] -> [" + std::to_string(cr) + "x" +
                             std::to_string(cc) + "]");
    }
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) {
    if (name == "scalar") return Isa::Scalar;
    if (name == "avx2") return Isa::Avx2;
    if (name == "neon") return Isa::Neon;
    return std::nullopt;
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2: return cpu_has_avx2();
        case Isa::Neon:
#if defined(ARMT_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa detect_isa() { return initial_isa(); }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
    if (!isa_available(isa)) {
        throw std::invalid_argument("kernel variant '" + std::string(isa_name(isa)) +
                                    "' is not available on this host");
    }
    active().store(isa, std::memory_order_relaxed);
}

template <Real T>
void gemm(ConstMatrixView<T> a, ConstMatrixView<T> b, MatrixView<T> c) {
    require_gemm_shapes(a.rows, a.cols, b.rows, b.cols, c.rows, c.cols);
    switch (active_isa()) {
#if defined(ARMT_HAVE_AVX2)
        case Isa::Avx2: avx2::gemm(a.data, b.data, c.data, a.rows, a.cols, b.cols); return;
#endif
#if defined(ARMT_HAVE_NEON)
        case Isa::Neon: neon::gemm(a.data, b.data, c.data, a.rows, a.cols, b.cols); return;
#endif
        default: scalar::gemm<T>(a.data, b.data, c.data, a.rows, a.cols, b.cols); return;
    }
}

template <Real T>
void axpy(T alpha, std::span<const T> x, std::span<T> y) {
    if (x.size() != y.size()) {
        throw DimensionError("axpy length mismatch");
    }
    switch (active_isa()) {
#if defined(ARMT_HAVE_AVX2)
        case Isa::Avx2: avx2::axpy(alpha, x.data(), y.data(), x.size()); return;
#endif
#if defined(ARMT_HAVE_NEON)
        case Isa::Neon: neon::axpy(alpha, x.data(), y.data(), x.size()); return;
#endif
        default: scalar::axpy<T>(alpha, x.data(), y.data(), x.size()); return;
    }
}

template <Real T>
void add_inplace(std::span<const T> x, std::span<T> y) {
    if (x.size() != y.size()) {
        throw DimensionError("add length mismatch");
    }
    switch (active_isa()) {
#if defined(ARMT_HAVE_AVX2)
        case Isa::Avx2: avx2::add_inplace(x.data(), y.data(), x.size()); return;
#endif
#if defined(ARMT_HAVE_NEON)
        case Isa::Neon: neon::add_inplace(x.data(), y.data(), x.size()); return;
#endif
        default: scalar::add_inplace<T>(x.data(), y.data(), x.size()); return;
    }
}

template void gemm<float>(ConstMatrixView<float>, ConstMatrixView<float>, MatrixView<float>);
template void gemm<double>(ConstMatrixView<double>, ConstMatrixView<double>, MatrixView<double>);
template void axpy<float>(float, std::span<const float>, std::span<float>);
template void axpy<double>(double, std::span<const double>, std::span<double>);
template void add_inplace<float>(std::span<const float>, std::span<float>);
template void add_inplace<double>(std::span<const double>, std::span<double>);

}  // namespace armt::kernels
