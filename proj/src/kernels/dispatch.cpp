#include <atomic>
#include <cstdlib>
#include <cstring>

#include "rtgrowth/kernels.hpp"

namespace rtg::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa initial_isa() {
    const char* env = std::getenv("RTGROWTH_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return Isa::scalar;
    return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

bool isa_available(Isa isa) {
    if (isa == Isa::scalar) return true;
    static const bool ok = avx2::compiled() && cpu_has_avx2();
    return ok;
}

const Table& table_for(Isa isa) {
    if (isa == Isa::avx2 && isa_available(Isa::avx2)) return avx2::table;
    return scalar::table;
}

const Table& active() { return table_for(current().load(std::memory_order_relaxed)); }
Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    current().store(isa_available(isa) ? isa : Isa::scalar, std::memory_order_relaxed);
}

std::string isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace rtg::kernels
