#include <atomic>
#include <cstdlib>
#include <string_view>

#include "pathset/errors.hpp"
#include "pathset/kernels.hpp"

namespace pathset::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa best_available() {
    if (isa_available(Isa::Avx2)) return Isa::Avx2;
    if (isa_available(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

Isa from_environment() {
    const char* env = std::getenv("PATHSET_SIMD");
    if (env == nullptr) return best_available();
    const std::string_view v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
    if (v == "neon" && isa_available(Isa::Neon)) return Isa::Neon;
    return best_available();
}

std::atomic<const Table*>& current() {
    static std::atomic<const Table*> t{&table_for(from_environment())};
    return t;
}

}  // namespace

std::string to_string(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "scalar";
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2: return avx2_table() != nullptr && cpu_has_avx2();
        case Isa::Neon: return neon_table() != nullptr;
    }
    return false;
}

const Table& table_for(Isa isa) {
    if (!isa_available(isa)) throw InvalidArgument("SIMD variant '" + to_string(isa) + "' is not available");
    switch (isa) {
        case Isa::Avx2: return *avx2_table();
        case Isa::Neon: return *neon_table();
        default: return scalar_table();
    }
}

const Table& active() { return *current().load(std::memory_order_relaxed); }

Isa active_isa() {
    const Table* t = current().load(std::memory_order_relaxed);
    if (t == avx2_table()) return Isa::Avx2;
    if (t == neon_table()) return Isa::Neon;
    return Isa::Scalar;
}

void set_isa(Isa isa) { current().store(&table_for(isa), std::memory_order_relaxed); }

}  // namespace pathset::kernels
