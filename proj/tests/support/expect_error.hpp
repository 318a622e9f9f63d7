#pragma once

#include <gtest/gtest.h>

#include "vscroll/error.hpp"

// Asserts that `stmt` throws vscroll::Error carrying `expected_code`.
#define EXPECT_VSCROLL_ERROR(stmt, expected_code)                                   \
  do {                                                                              \
    try {                                                                           \
      (void)(stmt);                                                                 \
      ADD_FAILURE() << #stmt " did not throw";                                      \
    } catch (const ::vscroll::Error& e) {                                           \
      EXPECT_EQ(e.code(), expected_code) << e.what();                               \
    }                                                                               \
  } while (0)
