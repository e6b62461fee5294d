#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "brl/errors.hpp"
#include "brl/parallel.hpp"

using namespace brl;

TEST_CASE("map_indices: parallel equals serial") {
  auto f = [](std::size_t i) { return std::sin(0.1 * double(i)) * double(i * i); };
  const auto ser = map_indices(1000, f, Execution::Serial);
  const auto par = map_indices(1000, f, Execution::Parallel);
  REQUIRE(ser.size() == 1000);
  for (std::size_t i = 0; i < ser.size(); ++i) CHECK(ser[i] == par[i]);
  CHECK(map_indices(0, f).empty());
}

TEST_CASE("map_indices: the first failing index is rethrown") {
  auto f = [](std::size_t i) -> int {
    if (i == 7) fail(ErrorKind::NumericalFailure, "seven");
    if (i == 40) throw std::runtime_error("forty");
    return int(i);
  };
  for (auto exec : {Execution::Serial, Execution::Parallel}) {
    try {
      map_indices(64, f, exec);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NumericalFailure);
      CHECK(std::string(e.what()) == "seven");
    }
  }
}

TEST_CASE("BRL_THREADS") {
  ::setenv("BRL_THREADS", "2", 1);
  const int n = configure_threads_from_env();
  CHECK(n == 2);
  CHECK(worker_count() == 2);
  ::setenv("BRL_THREADS", "bogus", 1);
  CHECK(configure_threads_from_env() >= 1);
  ::unsetenv("BRL_THREADS");
  CHECK(worker_count() >= 1);
}
