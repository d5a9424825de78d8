#pragma once

#include "doctest.h"
#include "reeb321/types.hpp"

// Runs expr and checks that it throws reeb::Error with the given code.
#define CHECK_THROWS_CODE(expr, ecode)                                   \
  do {                                                                   \
    bool thrown_ = false;                                                \
    try {                                                                \
      (void)(expr);                                                      \
    } catch (const reeb::Error& e_) {                                    \
      thrown_ = true;                                                    \
      CHECK_MESSAGE(e_.code() == (ecode), reeb::error_name(e_.code()));  \
    }                                                                    \
    CHECK_MESSAGE(thrown_, "expected " << reeb::error_name(ecode));      \
  } while (0)
