#pragma once

#include <functional>
#include <optional>

#include <doctest.h>

#include "fiflab/core.hpp"
#include "fiflab/data_io.hpp"
#include "oracles.hpp"

namespace testing_util {

// Code of the fiflab::Error thrown by f, or nullopt when nothing is thrown.
inline std::optional<fiflab::ErrorCode> error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const fiflab::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline fiflab::InterpolationData spinach() {
  return fiflab::normalize_series(fiflab::spinach_fixture());
}

struct SpinachSetup {
  fiflab::InterpolationData data = spinach();
  fiflab::ScalarFunction g = fiflab::linear_interpolant(data);
  fiflab::ScalarFunction b = fiflab::square_base(g, data.partition().domain());
};

}  // namespace testing_util

#define CHECK_CODE(expr, code) \
  CHECK(testing_util::error_code([&] { (void)(expr); }) == std::optional<fiflab::ErrorCode>(code))
