#pragma once

#include "pulsetrain/big_real.hpp"

#include "doctest.h"

#include <string>

namespace testing_support {

using pulsetrain::BigReal;
using pulsetrain::Precision;

inline BigReal big(const char* text, Precision p = Precision()) { return BigReal(std::string_view(text), p); }

inline BigReal big(long value, Precision p = Precision()) { return BigReal(value, p); }

inline BigReal tol(long exponent, Precision p = Precision()) { return pulsetrain::pow10(exponent, p); }

// CHECK that |a - b| <= bound, printing both values on failure.
#define CHECK_CLOSE(a, b, bound)                                                             \
  do {                                                                                       \
    const ::pulsetrain::BigReal check_close_diff = ::pulsetrain::abs((a) - (b));             \
    INFO("lhs = " << (a).to_string(30) << ", rhs = " << (b).to_string(30)                    \
                  << ", |diff| = " << check_close_diff.to_string(5));                        \
    CHECK(check_close_diff <= (bound));                                                      \
  } while (false)

}  // namespace testing_support
