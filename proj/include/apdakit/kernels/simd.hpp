#pragma once

// Platform / ISA detection for the kernel backends. The actual kernel
// entry points (kernels.hpp) dispatch through a function table selected
// at first use; select_backend() lets tests pin a specific backend.

#if defined(__x86_64__) || defined(_M_X64)
#define APDAKIT_X86_64 1
#else
#define APDAKIT_X86_64 0
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
#define APDAKIT_AARCH64 1
#else
#define APDAKIT_AARCH64 0
#endif

#include <string>
#include <vector>

namespace apdakit::kernels {

enum class Backend {
  kScalar,
  kAvx2,
  kNeon,
};

const char* backend_name(Backend b);

// Backends compiled into this binary and usable on the running CPU.
std::vector<Backend> available_backends();

// Currently active backend. On first call the choice is: the
// APDA_KIT_SIMD environment variable ("scalar", "avx2", "neon", "auto")
// if set, otherwise the widest available ISA.
Backend active_backend();

// Pin the dispatch table to a backend. Throws std::invalid_argument if
// the backend is not available on this machine.
void select_backend(Backend b);

}  // namespace apdakit::kernels
