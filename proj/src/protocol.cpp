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

#include "swapqkd/protocol.hpp"

#include <algorithm>
#include <set>
#include <json.hpp>

#include "swapqkd/errors.hpp"

namespace swapqkd {

namespace {

constexpr unsigned kCountWidth = 32;
constexpr unsigned kSequenceWidth = 32;

BitString flag_message(bool value) {
  BitString out;
  append_uint(out, value ? 1 : 0, 8);
  return out;
}

// Cursor over a received message; any malformation is a ProtocolViolation.
class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bits) : bits_(bits) {}

  std::uint64_t take(unsigned width) {
    const auto v = read_uint(bits_, pos_, width);
    pos_ += width;
    return v;
  }

  std::size_t count(std::optional<std::size_t> expected = std::nullopt) {
    const auto n = static_cast<std::size_t>(take(kCountWidth));
    if (expected && n != *expected) {
      fail(ErrorCode::ProtocolViolation, "unexpected list length in message");
    }
    return n;
  }

  std::vector<SequencePair> pairs(std::size_t n) {
    if (n > (bits_.size() - pos_) / (2 * kSequenceWidth)) {
      fail(ErrorCode::ProtocolViolation, "pair list longer than message");
    }
    std::vector<SequencePair> out(n);
    for (auto& p : out) {
      p.first = static_cast<std::uint32_t>(take(kSequenceWidth));
      p.second = static_cast<std::uint32_t>(take(kSequenceWidth));
    }
    return out;
  }

  std::vector<BellIndex> results(std::size_t n) {
    if (n > (bits_.size() - pos_) / 2) {
      fail(ErrorCode::ProtocolViolation, "result list longer than message");
    }
    std::vector<BellIndex> out(n);
    for (auto& r : out) r = bell_from_code(static_cast<unsigned>(take(2)));
    return out;
  }

  void expect_end() const {
    if (pos_ != bits_.size()) {
      fail(ErrorCode::ProtocolViolation, "trailing bits in message");
    }
  }

 private:
  std::span<const std::uint8_t> bits_;
  std::size_t pos_ = 0;
};

std::size_t measure_and_compare(LocalLab& lab, const DetectAnnouncement& announced) {
  if (announced.pairs.size() != announced.results.size()) {
    fail(ErrorCode::ProtocolViolation, "announcement lists differ in length");
  }
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < announced.pairs.size(); ++i) {
    if (lab.measure(announced.pairs[i]) != announced.results[i]) ++mismatches;
  }
  return mismatches;
}

std::vector<BellIndex> measure_all(LocalLab& lab, std::span<const SequencePair> pairs) {
  std::vector<BellIndex> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(lab.measure(p));
  return out;
}

}  // namespace

void SessionConfig::validate() const {
  auto reject = [](const std::string& why) { fail(ErrorCode::ConfigError, why); };
  if (n_pairs < 1) reject("n_pairs must be at least 1");
  if (s_detect < 1) reject("s_detect must be at least 1");
  if (k_identify < 1) reject("k_identify must be at least 1");
  if (initial_id.size() == 0) reject("initial ID is empty");
  const std::uint64_t used = 2ull * s_detect + 2ull * (2ull * k_identify);
  if (used >= n_pairs) {
    reject("2*s_detect + 4*k_identify must be smaller than n_pairs");
  }
  // Eve's counterfeit particles are numbered from n_pairs up.
  if (n_pairs > (1u << 30)) reject("n_pairs too large");
  if (impersonation != Impersonation::None &&
      !std::holds_alternative<NoAttack>(attack)) {
    reject("impersonation trials do not combine with a channel attack");
  }
}

// ----- Message formats -------------------------------------------------------

void append_pairs(BitString& out, std::span<const SequencePair> pairs) {
  append_uint(out, pairs.size(), kCountWidth);
  for (const auto& p : pairs) {
    append_uint(out, p.first, kSequenceWidth);
    append_uint(out, p.second, kSequenceWidth);
  }
}

void append_results(BitString& out, std::span<const BellIndex> results) {
  append_uint(out, results.size(), kCountWidth);
  for (auto r : results) append_uint(out, code_of(r), 2);
}

BitString encode_detect_announcement(const DetectAnnouncement& a) {
  BitString out;
  append_pairs(out, a.pairs);
  append_results(out, a.results);
  return out;
}

DetectAnnouncement decode_detect_announcement(std::span<const std::uint8_t> bits) {
  Reader in(bits);
  DetectAnnouncement a;
  a.pairs = in.pairs(in.count());
  a.results = in.results(in.count(a.pairs.size()));
  in.expect_end();
  return a;
}

std::size_t payload_bits(std::uint32_t k_identify) noexcept {
  const std::size_t k = k_identify;
  return 3 * kCountWidth + 2 * k * (2 * kSequenceWidth) + 2 * k;
}

BitString encode_payload(const IdentificationPayload& p) {
  BitString out;
  append_pairs(out, p.p1);
  append_results(out, p.r1);
  append_pairs(out, p.p2);
  return out;
}

IdentificationPayload decode_payload(std::span<const std::uint8_t> bits,
                                     std::uint32_t k_identify) {
  if (bits.size() != payload_bits(k_identify)) {
    fail(ErrorCode::ProtocolViolation, "payload has the wrong length");
  }
  Reader in(bits);
  IdentificationPayload p;
  p.p1 = in.pairs(in.count(k_identify));
  p.r1 = in.results(in.count(k_identify));
  p.p2 = in.pairs(in.count(k_identify));
  in.expect_end();
  return p;
}

BitString encode_results_message(std::span<const BellIndex> results) {
  BitString out;
  append_results(out, results);
  return out;
}

std::vector<BellIndex> decode_results_message(std::span<const std::uint8_t> bits) {
  Reader in(bits);
  auto out = in.results(in.count());
  in.expect_end();
  return out;
}

BitString encode_pairs_message(std::span<const SequencePair> pairs) {
  BitString out;
  append_pairs(out, pairs);
  return out;
}

std::vector<SequencePair> decode_pairs_message(std::span<const std::uint8_t> bits) {
  Reader in(bits);
  auto out = in.pairs(in.count());
  in.expect_end();
  return out;
}

BitString key_from_results(std::span<const BellIndex> results) {
  BitString out;
  out.reserve(2 * results.size());
  for (auto r : results) append_uint(out, code_of(r), 2);
  return out;
}

RenewedId renew_id(std::span<const std::uint8_t> key_bits, const IdString& old_id) {
  if (key_bits.size() < old_id.size()) {
    fail(ErrorCode::InsufficientKeyMaterial,
         "key of " + std::to_string(key_bits.size()) +
             " bits cannot renew an ID of " + std::to_string(old_id.size()));
  }
  RenewedId out;
  out.new_id.bits.assign(key_bits.begin(), key_bits.begin() + old_id.size());
  out.remaining_key.assign(key_bits.begin() + old_id.size(), key_bits.end());
  return out;
}

// ----- Transcript ------------------------------------------------------------

void SessionTranscript::message(Owner from, std::string label, BitString bits) {
  events_.push_back({TranscriptEvent::Kind::Message, from, std::move(label),
                     std::move(bits)});
}

void SessionTranscript::measurement(Owner party, SequencePair pair, BellIndex result) {
  BitString bits;
  append_uint(bits, pair.first, kSequenceWidth);
  append_uint(bits, pair.second, kSequenceWidth);
  append_uint(bits, code_of(result), 8);
  events_.push_back({TranscriptEvent::Kind::Measurement, party, {}, std::move(bits)});
}

std::string SessionTranscript::to_jsonl() const {
  std::string out;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const auto& e = events_[i];
    nlohmann::ordered_json line;
    line["index"] = i;
    line["kind"] = e.kind == TranscriptEvent::Kind::Measurement
                       ? std::string("measurement")
                       : "message:" + e.label;
    line["party"] = std::string(to_string(e.party));
    line["payload_hex"] = bits_to_hex(e.payload);
    out += line.dump();
    out += '\n';
  }
  return out;
}

// ----- Labs and roles --------------------------------------------------------

void LocalLab::receive(std::uint32_t sequence) {
  if (sequence >= status_.size()) status_.resize(sequence + 1, Status::Absent);
  if (status_[sequence] == Status::Absent) status_[sequence] = Status::Held;
}

bool LocalLab::can_measure(std::uint32_t sequence) const {
  return sequence < status_.size() && status_[sequence] == Status::Held;
}

std::vector<std::uint32_t> LocalLab::unmeasured() const {
  return with_status(Status::Held);
}

std::vector<std::uint32_t> LocalLab::consumed() const {
  return with_status(Status::Consumed);
}

std::vector<std::uint32_t> LocalLab::with_status(Status wanted) const {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < status_.size(); ++i) {
    if (status_[i] == wanted) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

BellIndex LocalLab::measure(SequencePair pair) {
  if (pair.first == pair.second || !can_measure(pair.first) ||
      !can_measure(pair.second)) {
    fail(ErrorCode::ProtocolViolation,
         std::string(to_string(owner_)) + " cannot measure pair (" +
             std::to_string(pair.first) + ", " + std::to_string(pair.second) + ")");
  }
  status_[pair.first] = Status::Consumed;
  status_[pair.second] = Status::Consumed;
  const BellIndex r =
      reg_.measure({pair.first, owner_}, {pair.second, owner_}, rng_);
  log_.measurement(owner_, pair, r);
  return r;
}

void LocalLab::discard(std::uint32_t sequence) {
  if (!can_measure(sequence)) {
    fail(ErrorCode::ProtocolViolation, "cannot discard particle " + std::to_string(sequence));
  }
  status_[sequence] = Status::Consumed;
}

std::size_t HonestAlice::check_detection(const DetectAnnouncement& announced) {
  return measure_and_compare(lab_, announced);
}

bool HonestAlice::pairs_available(std::span<const SequencePair> pairs) const {
  std::set<std::uint32_t> seen;
  for (const auto& p : pairs) {
    for (auto s : {p.first, p.second}) {
      if (!lab_.can_measure(s) || !seen.insert(s).second) return false;
    }
  }
  return true;
}

std::optional<std::vector<BellIndex>> HonestAlice::answer_identification(
    std::span<const std::uint8_t> cipher) {
  if (cipher.size() != payload_bits(k_)) {
    fail(ErrorCode::ProtocolViolation, "identification ciphertext has the wrong length");
  }
  const BitString plain = pad_.decrypt(cipher);
  IdentificationPayload payload;
  try {
    payload = decode_payload(plain, k_);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ProtocolViolation) throw;
    return std::nullopt;
  }
  std::vector<SequencePair> all = payload.p1;
  all.insert(all.end(), payload.p2.begin(), payload.p2.end());
  if (!pairs_available(all)) return std::nullopt;

  if (measure_all(lab_, payload.p1) != payload.r1) return std::nullopt;
  return measure_all(lab_, payload.p2);
}

std::vector<BellIndex> HonestAlice::measure_key_pairs(std::span<const SequencePair> pairs) {
  return measure_all(lab_, pairs);
}

std::vector<SequencePair> HonestBob::pick_pairs(std::size_t count) {
  auto pool = lab_.unmeasured();
  if (pool.size() < 2 * count) {
    fail(ErrorCode::ConfigError, "not enough unmeasured particles left");
  }
  lab_.rng().shuffle(std::span(pool));
  std::vector<SequencePair> pairs(count);
  for (std::size_t i = 0; i < count; ++i) pairs[i] = {pool[2 * i], pool[2 * i + 1]};
  return pairs;
}

DetectAnnouncement HonestBob::announce_detection(std::uint32_t s_detect) {
  DetectAnnouncement a;
  a.pairs = pick_pairs(s_detect);
  a.results = measure_all(lab_, a.pairs);
  return a;
}

BitString HonestBob::identification_cipher(std::uint32_t k_identify) {
  auto selected = pick_pairs(2 * std::size_t{k_identify});
  IdentificationPayload payload;
  payload.p1.assign(selected.begin(), selected.begin() + k_identify);
  payload.p2.assign(selected.begin() + k_identify, selected.end());
  payload.r1 = measure_all(lab_, payload.p1);
  expected_reply_ = measure_all(lab_, payload.p2);
  return pad_.encrypt(encode_payload(payload));
}

bool HonestBob::accept_reply(std::span<const BellIndex> reply) {
  return std::equal(reply.begin(), reply.end(), expected_reply_.begin(),
                    expected_reply_.end());
}

KeyRound HonestBob::measure_key_pairs() {
  auto pool = lab_.unmeasured();
  lab_.rng().shuffle(std::span(pool));
  KeyRound round;
  for (std::size_t i = 0; i + 1 < pool.size(); i += 2) {
    round.pairs.push_back({pool[i], pool[i + 1]});
  }
  if (pool.size() % 2 == 1) {
    lab_.discard(pool.back());
    round.discarded = 1;
  }
  round.results = measure_all(lab_, round.pairs);
  return round;
}

std::size_t ForgedAlice::check_detection(const DetectAnnouncement& announced) {
  return measure_and_compare(lab_, announced);
}

std::optional<std::vector<BellIndex>> ForgedAlice::answer_identification(
    std::span<const std::uint8_t> cipher) {
  if (cipher.size() != payload_bits(k_)) {
    fail(ErrorCode::ProtocolViolation, "identification ciphertext has the wrong length");
  }
  std::vector<BellIndex> guess(k_);
  for (auto& g : guess) g = bell_from_code(static_cast<unsigned>(lab_.rng().below(4)));
  return guess;
}

std::vector<BellIndex> ForgedAlice::measure_key_pairs(std::span<const SequencePair> pairs) {
  return measure_all(lab_, pairs);
}

BitString ForgedBob::identification_cipher(std::uint32_t k_identify) {
  BitString y(payload_bits(k_identify));
  for (auto& b : y) b = static_cast<std::uint8_t>(lab_.rng().below(2));
  return y;
}

// ----- Session ---------------------------------------------------------------

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::KeyEstablished: return "KeyEstablished";
    case Verdict::EveDetected: return "EveDetected";
    case Verdict::BobAuthFailed: return "BobAuthFailed";
    case Verdict::AliceAuthFailed: return "AliceAuthFailed";
    case Verdict::Aborted: return "Aborted";
  }
  return "?";
}

namespace {

SessionConfig validated(SessionConfig c) {
  c.validate();
  return c;
}

}  // namespace

Session::Session(SessionConfig config)
    : config_(validated(std::move(config))),
      rng_(config_.seed),
      eve_(config_.attack, config_.n_pairs),
      alice_lab_(reg_,
                 config_.impersonation == Impersonation::EveAsAlice ? Owner::Eve
                                                                    : Owner::Alice,
                 rng_, transcript_),
      bob_lab_(reg_,
               config_.impersonation == Impersonation::EveAsBob ? Owner::Eve
                                                                : Owner::Bob,
               rng_, transcript_) {
  if (config_.impersonation == Impersonation::EveAsAlice) {
    alice_ = std::make_unique<ForgedAlice>(alice_lab_, config_.k_identify);
  } else {
    alice_ = std::make_unique<HonestAlice>(alice_lab_, config_.initial_id,
                                           config_.k_identify);
  }
  if (config_.impersonation == Impersonation::EveAsBob) {
    bob_ = std::make_unique<ForgedBob>(bob_lab_);
  } else {
    bob_ = std::make_unique<HonestBob>(bob_lab_, config_.initial_id);
  }
}

void Session::prepare_and_send() {
  QuantumChannel channel;
  channel.in_transit.reserve(config_.n_pairs);
  for (std::uint32_t i = 0; i < config_.n_pairs; ++i) {
    const ParticleId kept{i, alice_lab_.owner()};
    const ParticleId sent{i, Owner::Bob};
    reg_.add(new_epr_pair(kept, sent));
    alice_lab_.receive(i);
    channel.in_transit.push_back(sent);
  }
  eve_.on_transit(reg_, channel);
  for (const auto& p : channel.in_transit) {
    if (bob_lab_.owner() != Owner::Bob) {
      reg_.relabel(p, {p.sequence, bob_lab_.owner()});
    }
    bob_lab_.receive(p.sequence);
  }
}

DetectionOutcome Session::detect_eavesdropping() {
  DetectAnnouncement announced = bob_->announce_detection(config_.s_detect);
  BitString wire = encode_detect_announcement(announced);
  transcript_.message(bob_lab_.owner(), "detect_announce", wire);

  DetectionOutcome out;
  out.mismatches = alice_->check_detection(decode_detect_announcement(wire));
  out.passed = out.mismatches == 0;
  transcript_.message(alice_lab_.owner(), "detect_verdict", flag_message(out.passed));
  return out;
}

IdentificationOutcome Session::identify() {
  if (payload_bits(config_.k_identify) > config_.initial_id.size()) {
    fail(ErrorCode::InsufficientKeyMaterial,
         "ID of " + std::to_string(config_.initial_id.size()) +
             " bits cannot encrypt a " +
             std::to_string(payload_bits(config_.k_identify)) + "-bit payload");
  }
  BitString cipher = bob_->identification_cipher(config_.k_identify);
  transcript_.message(bob_lab_.owner(), "identify_cipher", cipher);

  IdentificationOutcome out;
  auto reply = alice_->answer_identification(cipher);
  out.alice_accepted_bob = reply.has_value();
  transcript_.message(alice_lab_.owner(), "identify_bob_check",
                      flag_message(out.alice_accepted_bob));
  if (!reply) return out;

  BitString wire = encode_results_message(*reply);
  transcript_.message(alice_lab_.owner(), "identify_reply", wire);
  out.bob_accepted_alice = bob_->accept_reply(decode_results_message(wire));
  transcript_.message(bob_lab_.owner(), "identify_alice_check",
                      flag_message(out.bob_accepted_alice));
  return out;
}

KeyOutcome Session::obtain_key() {
  KeyRound round = bob_->measure_key_pairs();
  if (round.pairs.empty()) fail(ErrorCode::EmptyKey, "no particle pairs left for the key");
  BitString wire = encode_pairs_message(round.pairs);
  transcript_.message(bob_lab_.owner(), "key_pairs", wire);

  KeyOutcome out;
  out.pairs = decode_pairs_message(wire);
  out.alice_raw = key_from_results(alice_->measure_key_pairs(out.pairs));
  out.bob_raw = key_from_results(round.results);
  out.discarded = round.discarded;
  for (auto seq : alice_lab_.unmeasured()) {
    alice_lab_.discard(seq);
    ++out.discarded;
  }
  return out;
}

SessionResult Session::run() {
  SessionResult r;
  try {
    prepare_and_send();
    const DetectionOutcome det = detect_eavesdropping();
    r.mismatch_count = det.mismatches;
    r.detection_passed = det.passed;
    if (!det.passed) {
      r.verdict = Verdict::EveDetected;
    } else {
      const IdentificationOutcome id = identify();
      r.alice_accepted_bob = id.alice_accepted_bob;
      r.bob_accepted_alice = id.bob_accepted_alice;
      if (!id.alice_accepted_bob) {
        r.verdict = Verdict::BobAuthFailed;
      } else if (!id.bob_accepted_alice) {
        r.verdict = Verdict::AliceAuthFailed;
      } else {
        KeyOutcome key = obtain_key();
        r.discarded_particles = key.discarded;
        if (std::holds_alternative<InterceptResend>(config_.attack)) {
          std::vector<BellIndex> guesses;
          for (const auto& p : key.pairs) {
            guesses.push_back(eve_.infer_bob_result(reg_, p.first, p.second, rng_));
          }
          r.eve_key = key_from_results(guesses);
        }
        r.alice.raw_key = std::move(key.alice_raw);
        r.bob.raw_key = std::move(key.bob_raw);
        RenewedId a = renew_id(r.alice.raw_key, config_.initial_id);
        RenewedId b = renew_id(r.bob.raw_key, config_.initial_id);
        r.alice.new_id = std::move(a.new_id);
        r.alice.key_bits = std::move(a.remaining_key);
        r.bob.new_id = std::move(b.new_id);
        r.bob.key_bits = std::move(b.remaining_key);
        r.verdict = Verdict::KeyEstablished;
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    r.verdict = Verdict::Aborted;
    r.abort_reason = std::string(to_string(e.code()));
  }
  std::size_t used = 0;
  if (auto* a = dynamic_cast<HonestAlice*>(alice_.get())) used = a->id_bits_used();
  if (auto* b = dynamic_cast<HonestBob*>(bob_.get())) used = std::max(used, b->id_bits_used());
  r.id_bits_used = used;
  r.transcript = transcript_;
  return r;
}

SessionResult run_session(const SessionConfig& config) {
  Session session(config);
  return session.run();
}

}  // namespace swapqkd
