#pragma once

#include <gtest/gtest.h>

#include <functional>
#include <string>

#include "t2alg/error.hpp"

// Fails unless stmt throws t2alg::Error of the given kind.
#define EXPECT_ERROR_KIND(stmt, expected)                                               \
  do {                                                                                  \
    try {                                                                               \
      stmt;                                                                             \
      ADD_FAILURE() << "no error thrown, expected " << t2alg::to_string(expected);      \
    } catch (const t2alg::Error& e_) {                                                  \
      EXPECT_EQ(e_.kind(), expected) << e_.what();                                      \
    }                                                                                   \
  } while (0)

inline std::string error_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const t2alg::Error& e) {
    return e.what();
  }
  return {};
}
