#include "kernels_internal.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace cogpso::simd {

std::string_view to_string(Level level) noexcept {
    switch (level) {
        case Level::scalar: return "scalar";
        case Level::avx2: return "avx2";
    }
    return "unknown";
}

Level parse_level(std::string_view name) {
    if (name == "scalar") return Level::scalar;
    if (name == "avx2") return Level::avx2;
    throw std::invalid_argument("unknown SIMD level '" + std::string(name) + "'");
}

bool available(Level level) noexcept {
    switch (level) {
        case Level::scalar: return true;
        case Level::avx2:
#if defined(COGPSO_HAVE_AVX2)
            return __builtin_cpu_supports("avx2") != 0;
#else
            return false;
#endif
    }
    return false;
}

Level detected() noexcept { return available(Level::avx2) ? Level::avx2 : Level::scalar; }

const KernelTable& kernels(Level level) {
    if (!available(level))
        throw std::invalid_argument("SIMD level '" + std::string(to_string(level)) +
                                    "' is not available on this build/CPU");
#if defined(COGPSO_HAVE_AVX2)
    if (level == Level::avx2) return detail::avx2_table;
#endif
    return detail::scalar_table;
}

namespace {

Level initial_level() noexcept {
    if (const char* env = std::getenv("COGPSO_SIMD")) {
        try {
            const Level requested = parse_level(env);
            if (available(requested)) return requested;
        } catch (const std::invalid_argument&) {
        }
    }
    return detected();
}

std::atomic<const KernelTable*>& active_slot() noexcept {
    static std::atomic<const KernelTable*> slot{&kernels(initial_level())};
    return slot;
}

}  // namespace

const KernelTable& active() noexcept { return *active_slot().load(std::memory_order_acquire); }

Level active_level() noexcept { return active().level; }

void set_active_level(Level level) { active_slot().store(&kernels(level), std::memory_order_release); }

}  // namespace cogpso::simd
