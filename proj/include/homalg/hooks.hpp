#pragma once

#include <atomic>

// Test-only sign flips.  The verifier's mutation run toggles these and
// expects the suite to go red.
namespace homalg::hooks {

inline std::atomic<bool> flip_induced_projection{false};
inline std::atomic<bool> flip_cup_omega{false};

// Sets a hook for the lifetime of the guard.
class ScopedFlip {
 public:
  explicit ScopedFlip(std::atomic<bool>& h) : h_(h), old_(h.exchange(true)) {}
  ~ScopedFlip() { h_.store(old_); }
  ScopedFlip(const ScopedFlip&) = delete;
  ScopedFlip& operator=(const ScopedFlip&) = delete;

 private:
  std::atomic<bool>& h_;
  bool old_;
};

}  // namespace homalg::hooks
