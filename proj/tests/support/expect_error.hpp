#pragma once

#include <clopa/error.hpp>

#include <gtest/gtest.h>

#define EXPECT_CLOPA_ERROR(statement, expected_code)                                  \
  do {                                                                                \
    try {                                                                             \
      statement;                                                                      \
      ADD_FAILURE() << "expected " << clopa::to_string(expected_code) << ", no throw"; \
    } catch (const clopa::Error& e) {                                                 \
      EXPECT_EQ(clopa::to_string(e.code()), clopa::to_string(expected_code)) << e.what(); \
    }                                                                                 \
  } while (false)
