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


#include <doctest.h>

#include "support.hpp"
#include "swapqkd/bits.hpp"
#include "swapqkd/types.hpp"

using namespace swapqkd;

namespace {

BitString random_bits(Rng& rng, std::size_t n) {
  BitString out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng() & 1u);
  return out;
}

}  // namespace

TEST_CASE("bit string text round trip") {
  CHECK(bits_to_string(bits_from_string("0110")) == "0110");
  CHECK(bits_from_string("").empty());
  CHECK(support::error_code_of([] { bits_from_string("01a"); }) == ErrorCode::ParseError);
}

TEST_CASE("hex encoding is MSB first and zero padded") {
  CHECK(bits_to_hex(bits_from_string("10100101")) == "a5");
  CHECK(bits_to_hex(bits_from_string("1")) == "80");
  CHECK(bits_to_hex(bits_from_string("000000001111")) == "00f0");
  CHECK(bits_to_hex(BitString{}).empty());
}

TEST_CASE("fixed-width integers") {
  BitString b;
  append_uint(b, 5, 4);
  append_uint(b, 0xDEADBEEF, 32);
  CHECK(bits_to_string(std::span(b).first(4)) == "0101");
  CHECK(read_uint(b, 0, 4) == 5);
  CHECK(read_uint(b, 4, 32) == 0xDEADBEEF);
  CHECK(support::error_code_of([&] { read_uint(b, 30, 8); }) == ErrorCode::ProtocolViolation);
}

TEST_CASE("one-time pad examples") {
  const IdString id{bits_from_string("1010")};
  CHECK(bits_to_string(otp_encrypt(id, bits_from_string("1100"))) == "0110");
  CHECK(bits_to_string(otp_encrypt(id, bits_from_string("0000"))) == "1010");
  CHECK(bits_to_string(otp_decrypt(id, bits_from_string("0110"))) == "1100");
  // A payload shorter than the ID uses a prefix of it.
  CHECK(bits_to_string(otp_encrypt(id, bits_from_string("11"))) == "01");
}

TEST_CASE("payload longer than the ID is refused") {
  const IdString id{bits_from_string("101")};
  CHECK(support::error_code_of([&] { otp_encrypt(id, bits_from_string("1111")); }) ==
        ErrorCode::InsufficientKeyMaterial);
  OneTimePad pad(id);
  CHECK(support::error_code_of([&] { pad.encrypt(bits_from_string("11"), 2); }) ==
        ErrorCode::InsufficientKeyMaterial);
  CHECK(pad.consumed() == 0);
}

TEST_CASE("decrypt after encrypt is the identity") {
  Rng rng(8);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t id_len = 1 + rng.below(600);
    const std::size_t len = rng.below(id_len + 1);
    const IdString id{random_bits(rng, id_len)};
    const BitString payload = random_bits(rng, len);
    const BitString cipher = otp_encrypt(id, payload);
    REQUIRE(cipher.size() == payload.size());
    REQUIRE(otp_decrypt(id, cipher) == payload);
  }
}

TEST_CASE("a pad never hands out the same key bit twice") {
  OneTimePad pad(IdString{bits_from_string("11110000")});
  const BitString c = pad.encrypt(bits_from_string("0000"));
  CHECK(bits_to_string(c) == "1111");
  CHECK(pad.consumed() == 4);
  CHECK(support::error_code_of([&] { pad.encrypt(bits_from_string("0")); }) ==
        ErrorCode::KeyReuseViolation);
  CHECK(support::error_code_of([&] { pad.decrypt(bits_from_string("00"), 3); }) ==
        ErrorCode::KeyReuseViolation);
  // The untouched half is still available.
  CHECK(bits_to_string(pad.decrypt(bits_from_string("1111"), 4)) == "1111");
  CHECK(pad.consumed() == 8);
  CHECK(support::error_code_of([&] { pad.encrypt(bits_from_string("1"), 7); }) ==
        ErrorCode::KeyReuseViolation);
}

TEST_CASE("a rejected request consumes nothing") {
  OneTimePad pad(IdString{bits_from_string("1111")});
  pad.encrypt(bits_from_string("1"), 1);
  CHECK(support::error_code_of([&] { pad.encrypt(bits_from_string("11"), 0); }) ==
        ErrorCode::KeyReuseViolation);
  CHECK(pad.consumed() == 1);
  pad.encrypt(bits_from_string("1"), 0);
  CHECK(pad.consumed() == 2);
}
