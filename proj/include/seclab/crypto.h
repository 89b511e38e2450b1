/*
 * Copyright 2026 The seclab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SECLAB_CRYPTO_H_
#define SECLAB_CRYPTO_H_

#include <array>
#include <cstdint>
#include <span>

#include <gmpxx.h>

#include "absl/status/statusor.h"
#include "seclab/bytes.h"
#include "seclab/group_math.h"
#include "seclab/prng.h"

namespace seclab {

// Full-strength group for key agreement and signatures, independent of the
// (deliberately small) masking group: a fixed 256-bit safe prime.
const GroupParams& AuxiliaryGroup();

// Fixed-width big-endian encoding of an auxiliary group element or scalar.
inline constexpr size_t kAuxElementBytes = 32;
Bytes EncodeAux(const mpz_class& v);

// ---------------------------------------------------------------------------
// Diffie-Hellman key agreement.

struct KeyPair {
  mpz_class sk;
  mpz_class pk;  // G^sk in the auxiliary group
};

struct SharedKey {
  std::array<uint8_t, 32> bytes{};

  ByteSpan span() const { return bytes; }
  friend bool operator==(const SharedKey& a, const SharedKey& b) {
    return a.bytes == b.bytes;
  }
};

KeyPair KaGen(Prng& prng);

// SHA-256 of the shared DH element. InvalidPublicKey if `peer_pk` is not in
// the auxiliary subgroup.
absl::StatusOr<SharedKey> KaAgree(const mpz_class& sk, const mpz_class& peer_pk);

// ---------------------------------------------------------------------------
// Authenticated encryption: AES-256-GCM, the context bound as associated data.

struct Ciphertext {
  Bytes nonce;  // 12 bytes
  Bytes body;   // ciphertext || 16-byte tag

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

Ciphertext AeEncrypt(const SharedKey& key, ByteSpan plaintext, ByteSpan context,
                     Prng& prng);
// AuthFailure on a wrong key, a wrong context or any modification.
absl::StatusOr<Bytes> AeDecrypt(const SharedKey& key, const Ciphertext& ct,
                                ByteSpan context);

// ---------------------------------------------------------------------------
// PRF and MAC.

// HMAC-SHA-256(key, input) reduced mod q.
Scalar PrfEval(ByteSpan key, ByteSpan input, const mpz_class& q);

struct MacTag {
  Bytes bytes;  // 32

  friend bool operator==(const MacTag&, const MacTag&) = default;
};

MacTag MacCompute(ByteSpan key, ByteSpan msg);
bool MacVerify(ByteSpan key, ByteSpan msg, const MacTag& tag);

// ---------------------------------------------------------------------------
// Signatures.

enum class SignatureScheme : uint8_t {
  kSchnorr = 1,
  kMultisigPartial = 2,
  kMultisigAggregate = 3,
};

struct Signature {
  SignatureScheme scheme = SignatureScheme::kSchnorr;
  Bytes body;

  // scheme byte || body
  Bytes Serialize() const;
  static absl::StatusOr<Signature> Parse(ByteSpan data);
  size_t size() const { return 1 + body.size(); }

  friend bool operator==(const Signature&, const Signature&) = default;
};

struct SigningKeyPair {
  mpz_class sk;
  mpz_class pk;
};

// Schnorr over the auxiliary group with deterministic nonces.
SigningKeyPair SchnorrKeyGen(Prng& prng);
Signature SchnorrSign(const SigningKeyPair& key, ByteSpan msg);
bool SchnorrVerify(const mpz_class& pk, ByteSpan msg, const Signature& sig);

// Aggregatable same-message multi-signature with the BLS interface: partial
// signatures sum into one constant-size aggregate verified by a single
// pairing-equation check against the summed public keys.
//
// SIMULATION GRADE. No pairing library is linked, so the bilinear group is
// simulated by representing every element by its exponent mod Q. The public
// key therefore reveals the secret key to anyone who knows the encoding.
// Sizes, counts and the verification equation match the real scheme; the
// security does not. Do not use outside this lab.
SigningKeyPair MultisigKeyGen(Prng& prng);
Signature MultisigSign(const SigningKeyPair& key, ByteSpan msg);
bool MultisigVerifyPartial(const mpz_class& pk, ByteSpan msg,
                           const Signature& sig);
// SchemeMismatch unless every input is a partial multisig signature.
absl::StatusOr<Signature> MultisigAggregate(std::span<const Signature> sigs);

struct VerifyStats {
  uint64_t equation_checks = 0;
};

bool MultisigVerify(std::span<const mpz_class> pks, ByteSpan msg,
                    const Signature& aggregate, VerifyStats* stats = nullptr);

}  // namespace seclab

#endif  // SECLAB_CRYPTO_H_
