#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>

#include "sylkit/dense.hpp"

namespace sylkit::krylov {

/// Counts simultaneously live length-n vectors. One instance per solve.
class MemoryTracker {
 public:
  void acquire(std::size_t vectors) {
    live_ += vectors;
    peak_ = std::max(peak_, live_);
  }
  void release(std::size_t vectors) { live_ -= std::min(live_, vectors); }
  std::size_t live() const noexcept { return live_; }
  std::size_t peak() const noexcept { return peak_; }

 private:
  std::size_t live_ = 0;
  std::size_t peak_ = 0;
};

/// An n x r block whose columns are counted by a MemoryTracker for as long as
/// the block is alive.
class TrackedBlock {
 public:
  TrackedBlock() = default;
  TrackedBlock(MemoryTracker& tracker, std::size_t n, std::size_t r)
      : tracker_(&tracker), m_(n, r) {
    tracker_->acquire(r);
  }
  ~TrackedBlock() { reset(); }

  TrackedBlock(TrackedBlock&& o) noexcept
      : tracker_(std::exchange(o.tracker_, nullptr)), m_(std::move(o.m_)) {}
  TrackedBlock& operator=(TrackedBlock&& o) noexcept {
    if (this != &o) {
      reset();
      tracker_ = std::exchange(o.tracker_, nullptr);
      m_ = std::move(o.m_);
    }
    return *this;
  }
  TrackedBlock(const TrackedBlock&) = delete;
  TrackedBlock& operator=(const TrackedBlock&) = delete;

  void reset() {
    if (tracker_) tracker_->release(m_.cols());
    tracker_ = nullptr;
    m_ = la::DenseMat();
  }

  la::DenseMat& mat() noexcept { return m_; }
  const la::DenseMat& mat() const noexcept { return m_; }

 private:
  MemoryTracker* tracker_ = nullptr;
  la::DenseMat m_;
};

}  // namespace sylkit::krylov
