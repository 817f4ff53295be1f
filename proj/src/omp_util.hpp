#pragma once

#include <exception>

namespace spanauto::detail {

// Exceptions must not cross an OpenMP region boundary; the first one is
// captured and rethrown on the calling thread.
class ExceptionSlot {
 public:
  template <typename F>
  void run(F&& f) {
    try {
      f();
    } catch (...) {
#pragma omp critical(spanauto_exception_slot)
      if (!error_) error_ = std::current_exception();
    }
  }

  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace spanauto::detail
