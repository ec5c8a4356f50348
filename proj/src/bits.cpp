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

#include "swapqkd/bits.hpp"

#include <algorithm>

#include "swapqkd/errors.hpp"

namespace swapqkd {

BitString bits_from_string(std::string_view text) {
  BitString out;
  out.reserve(text.size());
  for (char ch : text) {
    if (ch != '0' && ch != '1') {
      fail(ErrorCode::ParseError, "bit string may only contain '0' and '1'");
    }
    out.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return out;
}

std::string bits_to_string(std::span<const std::uint8_t> bits) {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out.push_back(b ? '1' : '0');
  return out;
}

std::string bits_to_hex(std::span<const std::uint8_t> bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (std::size_t i = 0; i < bits.size(); i += 8) {
    unsigned byte = 0;
    for (std::size_t j = 0; j < 8; ++j) {
      byte <<= 1;
      if (i + j < bits.size() && bits[i + j]) byte |= 1u;
    }
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xF]);
  }
  return out;
}

void append_uint(BitString& out, std::uint64_t value, unsigned width) {
  for (unsigned i = width; i-- > 0;) {
    out.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
  }
}

std::uint64_t read_uint(std::span<const std::uint8_t> bits, std::size_t offset,
                        unsigned width) {
  if (offset + width > bits.size()) {
    fail(ErrorCode::ProtocolViolation, "read past end of bit string");
  }
  std::uint64_t value = 0;
  for (unsigned i = 0; i < width; ++i) value = (value << 1) | (bits[offset + i] & 1u);
  return value;
}

OneTimePad::OneTimePad(IdString id) : id_(std::move(id)), used_(id_.size(), false) {}

std::size_t OneTimePad::consumed() const noexcept {
  return static_cast<std::size_t>(std::count(used_.begin(), used_.end(), true));
}

BitString OneTimePad::apply(std::span<const std::uint8_t> bits,
                            std::size_t key_offset) {
  if (key_offset > id_.size() || bits.size() > id_.size() - key_offset) {
    fail(ErrorCode::InsufficientKeyMaterial,
         "one-time pad needs " + std::to_string(bits.size()) +
             " key bits at offset " + std::to_string(key_offset) + ", ID has " +
             std::to_string(id_.size()));
  }
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (used_[key_offset + i]) {
      fail(ErrorCode::KeyReuseViolation,
           "ID bit " + std::to_string(key_offset + i) + " already used");
    }
  }
  BitString out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    used_[key_offset + i] = true;
    out[i] = static_cast<std::uint8_t>((bits[i] ^ id_.bits[key_offset + i]) & 1u);
  }
  return out;
}

BitString OneTimePad::encrypt(std::span<const std::uint8_t> payload,
                              std::size_t key_offset) {
  return apply(payload, key_offset);
}

BitString OneTimePad::decrypt(std::span<const std::uint8_t> cipher,
                              std::size_t key_offset) {
  return apply(cipher, key_offset);
}

BitString otp_encrypt(const IdString& id, std::span<const std::uint8_t> payload) {
  return OneTimePad(id).encrypt(payload);
}

BitString otp_decrypt(const IdString& id, std::span<const std::uint8_t> cipher) {
  return OneTimePad(id).decrypt(cipher);
}

}  // namespace swapqkd
