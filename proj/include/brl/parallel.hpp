#pragma once

// Index-parallel map used by every grid sweep. The OpenMP path and the serial
// reference produce identical results element by element; tests compare them.

#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

namespace brl {

enum class Execution { Serial, Parallel };

// Reads BRL_THREADS and, when set to a positive integer, applies it to the
// OpenMP runtime. Returns the worker count that will be used.
int configure_threads_from_env();

int worker_count();

namespace detail {
void parallel_for_indices(std::size_t n, void (*body)(std::size_t, void*),
                          void* ctx);
}

template <class F>
auto map_indices(std::size_t n, F&& f, Execution exec = Execution::Parallel)
    -> std::vector<decltype(f(std::size_t{0}))> {
  using R = decltype(f(std::size_t{0}));
  std::vector<R> out(n);
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  // Exceptions must not cross the OpenMP region; the first one (by index) is
  // rethrown after the loop.
  std::vector<std::exception_ptr> errors(n);
  struct Ctx {
    std::remove_reference_t<F>* f;
    std::vector<R>* out;
    std::vector<std::exception_ptr>* errors;
  } ctx{&f, &out, &errors};
  detail::parallel_for_indices(
      n,
      [](std::size_t i, void* raw) {
        auto* c = static_cast<Ctx*>(raw);
        try {
          (*c->out)[i] = (*c->f)(i);
        } catch (...) {
          (*c->errors)[i] = std::current_exception();
        }
      },
      &ctx);
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace brl
