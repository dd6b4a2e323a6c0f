#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "ite/simd/legendre_series.hpp"

namespace ite::simd {
namespace {

// -1: no override, otherwise static_cast<int>(Isa).
std::atomic<int> g_override{-1};

bool cpu_has_avx2() {
#if (defined(__GNUC__) || defined(__clang__)) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool env_forces_scalar() {
    const char* v = std::getenv("ITE_SIMD");
    return v != nullptr && std::string(v) == "scalar";
}

}  // namespace

Isa detected_isa() {
    static const Isa isa = (detail::avx2_compiled() && cpu_has_avx2()) ? Isa::Avx2 : Isa::Scalar;
    return isa;
}

Isa active_isa() {
    const int o = g_override.load(std::memory_order_relaxed);
    if (o >= 0) return static_cast<Isa>(o);
    static const bool forced = env_forces_scalar();
    return forced ? Isa::Scalar : detected_isa();
}

void set_isa_override(std::optional<Isa> isa) {
    if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) {
        throw std::runtime_error("AVX2 kernels are not available on this CPU/build");
    }
    g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void legendre_series(Isa isa, std::span<const std::complex<double>> coeffs, std::span<const double> t,
                     std::span<std::complex<double>> out) {
    if (out.size() != t.size()) throw std::invalid_argument("legendre_series: output size mismatch");
    if (coeffs.empty()) {
        for (auto& v : out) v = 0.0;
        return;
    }
    const int n_coeffs = static_cast<int>(coeffs.size());
    std::vector<double> a(static_cast<std::size_t>(n_coeffs), 0.0), b(static_cast<std::size_t>(n_coeffs), 0.0);
    for (int p = 1; p < n_coeffs; ++p) {
        a[static_cast<std::size_t>(p)] = (2.0 * p + 1.0) / (p + 1.0);
        b[static_cast<std::size_t>(p)] = static_cast<double>(p) / (p + 1.0);
    }
    if (isa == Isa::Avx2 && detected_isa() == Isa::Avx2) {
        detail::legendre_series_avx2(coeffs.data(), a.data(), b.data(), n_coeffs, t.data(), t.size(), out.data());
    } else {
        detail::legendre_series_scalar(coeffs.data(), a.data(), b.data(), n_coeffs, t.data(), t.size(), out.data());
    }
}

void legendre_series(std::span<const std::complex<double>> coeffs, std::span<const double> t,
                     std::span<std::complex<double>> out) {
    legendre_series(active_isa(), coeffs, t, out);
}

}  // namespace ite::simd
