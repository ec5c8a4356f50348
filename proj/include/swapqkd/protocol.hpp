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

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swapqkd/adversary.hpp"
#include "swapqkd/bits.hpp"
#include "swapqkd/quantum_core.hpp"

namespace swapqkd {

inline constexpr std::size_t kDefaultIdBits = 512;

/// Two sequence numbers measured together.
struct SequencePair {
  std::uint32_t first = 0;
  std::uint32_t second = 0;

  friend bool operator==(const SequencePair&, const SequencePair&) = default;
};

/// Who Eve pretends to be, if anyone. Used by the impersonation trials.
enum class Impersonation { None, EveAsAlice, EveAsBob };

struct SessionConfig {
  std::uint32_t n_pairs = 1024;
  std::uint32_t s_detect = 4;
  std::uint32_t k_identify = 3;
  IdString initial_id;
  std::uint64_t seed = 1;
  AttackStrategy attack = NoAttack{};
  Impersonation impersonation = Impersonation::None;

  /// Throws ConfigError.
  void validate() const;
};

// ----- Classical message formats -------------------------------------------
// Sequence numbers are 32-bit big-endian, Bell results their 2-bit code, and
// every list is prefixed by a 32-bit element count.

struct DetectAnnouncement {
  std::vector<SequencePair> pairs;
  std::vector<BellIndex> results;
};

/// Plaintext of Bob's encrypted identification message, P1 || R1 || P2.
struct IdentificationPayload {
  std::vector<SequencePair> p1;
  std::vector<BellIndex> r1;
  std::vector<SequencePair> p2;
};

void append_pairs(BitString& out, std::span<const SequencePair> pairs);
void append_results(BitString& out, std::span<const BellIndex> results);

BitString encode_detect_announcement(const DetectAnnouncement& a);
DetectAnnouncement decode_detect_announcement(std::span<const std::uint8_t> bits);

/// Encoded length of a payload carrying k pairs in each of S1 and S2.
std::size_t payload_bits(std::uint32_t k_identify) noexcept;

BitString encode_payload(const IdentificationPayload& p);
/// Throws ProtocolViolation unless `bits` is a well-formed payload with
/// exactly k_identify entries in every list.
IdentificationPayload decode_payload(std::span<const std::uint8_t> bits,
                                     std::uint32_t k_identify);

BitString encode_results_message(std::span<const BellIndex> results);
std::vector<BellIndex> decode_results_message(std::span<const std::uint8_t> bits);
BitString encode_pairs_message(std::span<const SequencePair> pairs);
std::vector<SequencePair> decode_pairs_message(std::span<const std::uint8_t> bits);

/// Two key bits per result, using the Bell code.
BitString key_from_results(std::span<const BellIndex> results);

struct RenewedId {
  IdString new_id;
  BitString remaining_key;
};

/// The first |old_id| key bits become the new ID. Throws
/// InsufficientKeyMaterial when the key is shorter than the ID.
RenewedId renew_id(std::span<const std::uint8_t> key_bits, const IdString& old_id);

// ----- Transcript ----------------------------------------------------------

struct TranscriptEvent {
  enum class Kind { Message, Measurement };

  Kind kind = Kind::Message;
  Owner party = Owner::Alice;
  /// Message name; empty for measurements.
  std::string label;
  /// Message bits, or first(32) || second(32) || code(8) for a measurement.
  BitString payload;

  friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

class SessionTranscript {
 public:
  void message(Owner from, std::string label, BitString bits);
  void measurement(Owner party, SequencePair pair, BellIndex result);

  const std::vector<TranscriptEvent>& events() const noexcept { return events_; }

  /// One JSON object per line: index, kind, party, payload_hex.
  std::string to_jsonl() const;

  friend bool operator==(const SessionTranscript&, const SessionTranscript&) = default;

 private:
  std::vector<TranscriptEvent> events_;
};

// ----- Parties ---------------------------------------------------------------

// A party's measuring apparatus. It only reaches particles the party holds and
// refuses to measure any particle twice.
class LocalLab {
 public:
  LocalLab(QuantumRegister& reg, Owner owner, Rng& rng, SessionTranscript& log)
      : reg_(reg), owner_(owner), rng_(rng), log_(log) {}

  void receive(std::uint32_t sequence);
  bool can_measure(std::uint32_t sequence) const;
  /// Held and not yet consumed, ascending.
  std::vector<std::uint32_t> unmeasured() const;

  /// Throws ProtocolViolation for particles not held or already consumed.
  BellIndex measure(SequencePair pair);
  void discard(std::uint32_t sequence);

  Owner owner() const noexcept { return owner_; }
  /// Measured or discarded, ascending.
  std::vector<std::uint32_t> consumed() const;
  Rng& rng() noexcept { return rng_; }

 private:
  QuantumRegister& reg_;
  Owner owner_;
  Rng& rng_;
  SessionTranscript& log_;
  enum class Status : std::uint8_t { Absent, Held, Consumed };
  std::vector<std::uint32_t> with_status(Status wanted) const;

  std::vector<Status> status_;
};

class AliceRole {
 public:
  virtual ~AliceRole() = default;
  /// Measures the announced pairs; returns how many results differ.
  virtual std::size_t check_detection(const DetectAnnouncement& announced) = 0;
  /// R2' on success, nullopt when Bob is rejected. Throws ProtocolViolation
  /// on a ciphertext of the wrong length.
  virtual std::optional<std::vector<BellIndex>> answer_identification(
      std::span<const std::uint8_t> cipher) = 0;
  virtual std::vector<BellIndex> measure_key_pairs(
      std::span<const SequencePair> pairs) = 0;
};

struct KeyRound {
  std::vector<SequencePair> pairs;
  std::vector<BellIndex> results;
  std::size_t discarded = 0;
};

class BobRole {
 public:
  virtual ~BobRole() = default;
  virtual DetectAnnouncement announce_detection(std::uint32_t s_detect) = 0;
  virtual BitString identification_cipher(std::uint32_t k_identify) = 0;
  virtual bool accept_reply(std::span<const BellIndex> reply) = 0;
  virtual KeyRound measure_key_pairs() = 0;
};

class HonestAlice : public AliceRole {
 public:
  HonestAlice(LocalLab& lab, IdString id, std::uint32_t k_identify)
      : lab_(lab), pad_(std::move(id)), k_(k_identify) {}

  std::size_t check_detection(const DetectAnnouncement& announced) override;
  std::optional<std::vector<BellIndex>> answer_identification(
      std::span<const std::uint8_t> cipher) override;
  std::vector<BellIndex> measure_key_pairs(
      std::span<const SequencePair> pairs) override;

  std::size_t id_bits_used() const noexcept { return pad_.consumed(); }

 private:
  bool pairs_available(std::span<const SequencePair> pairs) const;

  LocalLab& lab_;
  OneTimePad pad_;
  std::uint32_t k_;
};

class HonestBob : public BobRole {
 public:
  HonestBob(LocalLab& lab, IdString id) : lab_(lab), pad_(std::move(id)) {}

  DetectAnnouncement announce_detection(std::uint32_t s_detect) override;
  BitString identification_cipher(std::uint32_t k_identify) override;
  bool accept_reply(std::span<const BellIndex> reply) override;
  KeyRound measure_key_pairs() override;

  std::size_t id_bits_used() const noexcept { return pad_.consumed(); }

 protected:
  /// 2*count unmeasured particles chosen uniformly, paired in shuffled order.
  std::vector<SequencePair> pick_pairs(std::size_t count);

  LocalLab& lab_;

 private:
  OneTimePad pad_;
  std::vector<BellIndex> expected_reply_;
};

/// Eve in Alice's place: she prepared the pairs herself so detection passes,
/// but without the ID she can only guess R2'.
class ForgedAlice : public AliceRole {
 public:
  ForgedAlice(LocalLab& lab, std::uint32_t k_identify) : lab_(lab), k_(k_identify) {}

  std::size_t check_detection(const DetectAnnouncement& announced) override;
  std::optional<std::vector<BellIndex>> answer_identification(
      std::span<const std::uint8_t> cipher) override;
  std::vector<BellIndex> measure_key_pairs(
      std::span<const SequencePair> pairs) override;

 private:
  LocalLab& lab_;
  std::uint32_t k_;
};

/// Eve in Bob's place: she holds the real particles but sends a uniformly
/// random ciphertext of the expected length.
class ForgedBob : public HonestBob {
 public:
  explicit ForgedBob(LocalLab& lab) : HonestBob(lab, IdString{}) {}

  BitString identification_cipher(std::uint32_t k_identify) override;
  bool accept_reply(std::span<const BellIndex>) override { return true; }
};

// ----- Session -------------------------------------------------------------

enum class Verdict { KeyEstablished, EveDetected, BobAuthFailed, AliceAuthFailed, Aborted };

std::string_view to_string(Verdict v) noexcept;

struct PartyOutcome {
  BitString raw_key;
  /// Key left after the ID was cut from it.
  BitString key_bits;
  IdString new_id;
};

struct SessionResult {
  Verdict verdict = Verdict::Aborted;
  /// Error name when verdict is Aborted.
  std::string abort_reason;
  std::size_t mismatch_count = 0;
  bool detection_passed = false;
  bool alice_accepted_bob = false;
  bool bob_accepted_alice = false;
  PartyOutcome alice;
  PartyOutcome bob;
  std::size_t discarded_particles = 0;
  std::size_t id_bits_used = 0;
  /// Intercept-resend only: Eve's reading of the raw key.
  std::optional<BitString> eve_key;
  SessionTranscript transcript;
};

struct DetectionOutcome {
  bool passed = false;
  std::size_t mismatches = 0;
};

struct IdentificationOutcome {
  bool alice_accepted_bob = false;
  bool bob_accepted_alice = false;
};

struct KeyOutcome {
  std::vector<SequencePair> pairs;
  BitString alice_raw;
  BitString bob_raw;
  std::size_t discarded = 0;
};

// One run of the protocol. The steps can be driven one at a time; run() does
// all of them and turns failures into a verdict.
class Session {
 public:
  explicit Session(SessionConfig config);
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  void prepare_and_send();
  DetectionOutcome detect_eavesdropping();
  IdentificationOutcome identify();
  KeyOutcome obtain_key();

  SessionResult run();

  const SessionConfig& config() const noexcept { return config_; }
  QuantumRegister& quantum_register() noexcept { return reg_; }
  const Eavesdropper& eve() const noexcept { return eve_; }
  const SessionTranscript& transcript() const noexcept { return transcript_; }
  Rng& rng() noexcept { return rng_; }
  /// Lab of whoever plays Alice (Eve's when she impersonates Alice).
  LocalLab& alice_lab() noexcept { return alice_lab_; }
  LocalLab& bob_lab() noexcept { return bob_lab_; }

 private:
  SessionConfig config_;
  Rng rng_;
  QuantumRegister reg_;
  SessionTranscript transcript_;
  Eavesdropper eve_;
  LocalLab alice_lab_;
  LocalLab bob_lab_;
  std::unique_ptr<AliceRole> alice_;
  std::unique_ptr<BobRole> bob_;
};

/// Runs all steps with the configured adversary.
SessionResult run_session(const SessionConfig& config);

}  // namespace swapqkd
