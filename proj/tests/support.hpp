// Doctest helpers for the unit tests.
#pragma once

#include <cmath>

#include <doctest.h>

#include "generators.hpp"

#define CHECK_NEAR(a, b, tol)                                     \
  do {                                                            \
    const double check_near_a_ = (a);                             \
    const double check_near_b_ = (b);                             \
    INFO(#a " = " << check_near_a_ << ", " #b " = " << check_near_b_); \
    CHECK(std::abs(check_near_a_ - check_near_b_) <= (tol));      \
  } while (0)
