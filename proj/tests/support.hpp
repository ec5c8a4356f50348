// Copyright 2026 The swapqkd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <doctest.h>

#include "swapqkd/errors.hpp"

namespace support {

/// Runs f and returns the ErrorCode it threw; fails the test if it returned.
template <typename F>
swapqkd::ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const swapqkd::Error& e) {
    return e.code();
  }
  FAIL("expected swapqkd::Error");
  return swapqkd::ErrorCode::InvariantViolation;
}

}  // namespace support
