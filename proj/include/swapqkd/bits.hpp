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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace swapqkd {

/// One bit per element, each 0 or 1.
using BitString = std::vector<std::uint8_t>;

/// Parses a string of '0'/'1' characters. Throws ParseError otherwise.
BitString bits_from_string(std::string_view text);
std::string bits_to_string(std::span<const std::uint8_t> bits);

/// Packs MSB-first into bytes (zero padded) and hex encodes them.
std::string bits_to_hex(std::span<const std::uint8_t> bits);

void append_uint(BitString& out, std::uint64_t value, unsigned width);
/// Reads `width` bits big-endian starting at `offset`.
std::uint64_t read_uint(std::span<const std::uint8_t> bits, std::size_t offset,
                        unsigned width);

/// The secret shared by Alice and Bob, used as one-time-pad material.
struct IdString {
  BitString bits;

  std::size_t size() const noexcept { return bits.size(); }
  friend bool operator==(const IdString&, const IdString&) = default;
};

// One-time pad over an IdString. Every key bit may be consumed once; a second
// use of any bit throws KeyReuseViolation.
class OneTimePad {
 public:
  explicit OneTimePad(IdString id);

  BitString encrypt(std::span<const std::uint8_t> payload,
                    std::size_t key_offset = 0);
  BitString decrypt(std::span<const std::uint8_t> cipher,
                    std::size_t key_offset = 0);

  std::size_t key_length() const noexcept { return id_.size(); }
  std::size_t consumed() const noexcept;

 private:
  BitString apply(std::span<const std::uint8_t> bits, std::size_t key_offset);

  IdString id_;
  std::vector<bool> used_;
};

/// Stateless forms: XOR with the id prefix.
BitString otp_encrypt(const IdString& id, std::span<const std::uint8_t> payload);
BitString otp_decrypt(const IdString& id, std::span<const std::uint8_t> cipher);

}  // namespace swapqkd
