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

#include "seclab/crypto.h"

#include <openssl/crypto.h>
#include <openssl/evp.h>

#include <memory>

#include "absl/strings/str_cat.h"
#include "seclab/status.h"

namespace seclab {
namespace {

constexpr size_t kNonceBytes = 12;
constexpr size_t kTagBytes = 16;

// H(domain || parts...) as an integer.
mpz_class HashToInt(std::string_view domain, std::initializer_list<ByteSpan> parts) {
  Bytes input = ToBytes(domain);
  for (ByteSpan part : parts) {
    // Length-prefix each part so concatenations cannot collide.
    const uint32_t len = static_cast<uint32_t>(part.size());
    for (int shift = 24; shift >= 0; shift -= 8) {
      input.push_back(static_cast<uint8_t>(len >> shift));
    }
    input.insert(input.end(), part.begin(), part.end());
  }
  return FromBigEndian(Sha256(input));
}

bool InAuxSubgroup(const mpz_class& v) {
  const GroupParams& aux = AuxiliaryGroup();
  return v > 1 && v < aux.p && PowMod(v, aux.q, aux.p) == 1;
}

// Encoding of the simulated G2 generator.
const mpz_class& SimulatedG2() {
  static const mpz_class g2 = [] {
    const GroupParams& aux = AuxiliaryGroup();
    mpz_class v = Mod(HashToInt("seclab/msig/g2", {}), aux.q);
    return v == 0 ? mpz_class(1) : v;
  }();
  return g2;
}

mpz_class SimulatedHashToG1(ByteSpan msg) {
  return Mod(HashToInt("seclab/msig/h1", {msg}), AuxiliaryGroup().q);
}

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

}  // namespace

const GroupParams& AuxiliaryGroup() {
  static const GroupParams group = [] {
    GroupParams g;
    g.p = mpz_class(
        "0xe68a3b962e0ba721c676166e93985e5645d905eb9df512fe32c2330d42b8036b");
    g.q = mpz_class(
        "0x73451dcb1705d390e33b0b3749cc2f2b22ec82f5cefa897f19611986a15c01b5");
    g.g = 3;
    g.bits = 255;
    return g;
  }();
  return group;
}

Bytes EncodeAux(const mpz_class& v) { return ToBigEndian(v, kAuxElementBytes); }

KeyPair KaGen(Prng& prng) {
  const GroupParams& aux = AuxiliaryGroup();
  KeyPair kp;
  kp.sk = prng.Uniform(aux.q - 1) + 1;
  kp.pk = PowMod(aux.g, kp.sk, aux.p);
  return kp;
}

absl::StatusOr<SharedKey> KaAgree(const mpz_class& sk, const mpz_class& peer_pk) {
  if (!InAuxSubgroup(peer_pk)) {
    return MakeError(ErrorKind::kInvalidPublicKey,
                     "peer key is not in the auxiliary subgroup");
  }
  const GroupParams& aux = AuxiliaryGroup();
  Bytes input = ToBytes("seclab/ka/v1");
  Bytes shared = EncodeAux(PowMod(peer_pk, sk, aux.p));
  input.insert(input.end(), shared.begin(), shared.end());
  SharedKey key;
  key.bytes = Sha256(input);
  return key;
}

Ciphertext AeEncrypt(const SharedKey& key, ByteSpan plaintext, ByteSpan context,
                     Prng& prng) {
  Ciphertext ct;
  ct.nonce = prng.NextBytes(kNonceBytes);
  ct.body.resize(plaintext.size() + kTagBytes);
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  int len = 0;
  EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr);
  EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, kNonceBytes, nullptr);
  EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.bytes.data(),
                     ct.nonce.data());
  if (!context.empty()) {
    EVP_EncryptUpdate(ctx.get(), nullptr, &len, context.data(),
                      static_cast<int>(context.size()));
  }
  EVP_EncryptUpdate(ctx.get(), ct.body.data(), &len, plaintext.data(),
                    static_cast<int>(plaintext.size()));
  EVP_EncryptFinal_ex(ctx.get(), ct.body.data() + len, &len);
  EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagBytes,
                      ct.body.data() + plaintext.size());
  return ct;
}

absl::StatusOr<Bytes> AeDecrypt(const SharedKey& key, const Ciphertext& ct,
                                ByteSpan context) {
  if (ct.nonce.size() != kNonceBytes || ct.body.size() < kTagBytes) {
    return MakeError(ErrorKind::kAuthFailure, "truncated ciphertext");
  }
  const size_t n = ct.body.size() - kTagBytes;
  Bytes plaintext(n);
  Bytes tag(ct.body.begin() + n, ct.body.end());
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  int len = 0;
  EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr);
  EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, kNonceBytes, nullptr);
  EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.bytes.data(),
                     ct.nonce.data());
  if (!context.empty()) {
    EVP_DecryptUpdate(ctx.get(), nullptr, &len, context.data(),
                      static_cast<int>(context.size()));
  }
  EVP_DecryptUpdate(ctx.get(), plaintext.data(), &len, ct.body.data(),
                    static_cast<int>(n));
  EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagBytes, tag.data());
  if (EVP_DecryptFinal_ex(ctx.get(), plaintext.data() + len, &len) <= 0) {
    return MakeError(ErrorKind::kAuthFailure, "ciphertext failed authentication");
  }
  return plaintext;
}

Scalar PrfEval(ByteSpan key, ByteSpan input, const mpz_class& q) {
  return Scalar(Mod(FromBigEndian(HmacSha256(key, input)), q));
}

MacTag MacCompute(ByteSpan key, ByteSpan msg) {
  Digest d = HmacSha256(key, msg);
  return MacTag{Bytes(d.begin(), d.end())};
}

bool MacVerify(ByteSpan key, ByteSpan msg, const MacTag& tag) {
  Digest d = HmacSha256(key, msg);
  return tag.bytes.size() == d.size() &&
         CRYPTO_memcmp(d.data(), tag.bytes.data(), d.size()) == 0;
}

Bytes Signature::Serialize() const {
  Bytes out;
  out.reserve(size());
  out.push_back(static_cast<uint8_t>(scheme));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

absl::StatusOr<Signature> Signature::Parse(ByteSpan data) {
  if (data.empty() || data[0] < 1 || data[0] > 3) {
    return MakeError(ErrorKind::kMalformedMessage, "unknown signature scheme");
  }
  Signature sig;
  sig.scheme = static_cast<SignatureScheme>(data[0]);
  const size_t expected = sig.scheme == SignatureScheme::kSchnorr
                              ? 2 * kAuxElementBytes
                              : kAuxElementBytes;
  if (data.size() - 1 != expected) {
    return MakeError(ErrorKind::kMalformedMessage, "bad signature length");
  }
  sig.body.assign(data.begin() + 1, data.end());
  return sig;
}

SigningKeyPair SchnorrKeyGen(Prng& prng) {
  KeyPair kp = KaGen(prng);
  return SigningKeyPair{kp.sk, kp.pk};
}

Signature SchnorrSign(const SigningKeyPair& key, ByteSpan msg) {
  const GroupParams& aux = AuxiliaryGroup();
  const Bytes sk_bytes = EncodeAux(key.sk);
  mpz_class k = Mod(HashToInt("seclab/schnorr/nonce", {sk_bytes, msg}), aux.q - 1) + 1;
  const Bytes r = EncodeAux(PowMod(aux.g, k, aux.p));
  const Bytes pk = EncodeAux(key.pk);
  const mpz_class c = Mod(HashToInt("seclab/schnorr/challenge", {r, pk, msg}), aux.q);
  const mpz_class s = Mod(k - c * key.sk, aux.q);
  Signature sig{SignatureScheme::kSchnorr, EncodeAux(c)};
  Bytes sb = EncodeAux(s);
  sig.body.insert(sig.body.end(), sb.begin(), sb.end());
  return sig;
}

bool SchnorrVerify(const mpz_class& pk, ByteSpan msg, const Signature& sig) {
  if (sig.scheme != SignatureScheme::kSchnorr ||
      sig.body.size() != 2 * kAuxElementBytes || !InAuxSubgroup(pk)) {
    return false;
  }
  const GroupParams& aux = AuxiliaryGroup();
  const ByteSpan body(sig.body);
  const mpz_class c = FromBigEndian(body.first(kAuxElementBytes));
  const mpz_class s = FromBigEndian(body.last(kAuxElementBytes));
  if (c >= aux.q || s >= aux.q) return false;
  const mpz_class r = Mod(PowMod(aux.g, s, aux.p) * PowMod(pk, c, aux.p), aux.p);
  const Bytes rb = EncodeAux(r);
  const Bytes pkb = EncodeAux(pk);
  return Mod(HashToInt("seclab/schnorr/challenge", {rb, pkb, msg}), aux.q) == c;
}

SigningKeyPair MultisigKeyGen(Prng& prng) {
  const GroupParams& aux = AuxiliaryGroup();
  SigningKeyPair kp;
  kp.sk = prng.Uniform(aux.q - 1) + 1;
  kp.pk = Mod(kp.sk * SimulatedG2(), aux.q);
  return kp;
}

Signature MultisigSign(const SigningKeyPair& key, ByteSpan msg) {
  const GroupParams& aux = AuxiliaryGroup();
  return Signature{SignatureScheme::kMultisigPartial,
                   EncodeAux(Mod(key.sk * SimulatedHashToG1(msg), aux.q))};
}

namespace {

// e(sig, g2) == e(H(m), pk), with e(a, b) = a * b in the simulated group.
bool PairingEquationHolds(const mpz_class& pk, ByteSpan msg, const Bytes& body) {
  const GroupParams& aux = AuxiliaryGroup();
  if (body.size() != kAuxElementBytes) return false;
  const mpz_class sigma = FromBigEndian(body);
  if (sigma >= aux.q) return false;
  return Mod(sigma * SimulatedG2(), aux.q) ==
         Mod(SimulatedHashToG1(msg) * pk, aux.q);
}

}  // namespace

bool MultisigVerifyPartial(const mpz_class& pk, ByteSpan msg,
                           const Signature& sig) {
  return sig.scheme == SignatureScheme::kMultisigPartial &&
         PairingEquationHolds(pk, msg, sig.body);
}

absl::StatusOr<Signature> MultisigAggregate(std::span<const Signature> sigs) {
  if (sigs.empty()) {
    return MakeError(ErrorKind::kSchemeMismatch, "no signatures to aggregate");
  }
  const GroupParams& aux = AuxiliaryGroup();
  mpz_class acc = 0;
  for (const Signature& sig : sigs) {
    if (sig.scheme != SignatureScheme::kMultisigPartial ||
        sig.body.size() != kAuxElementBytes) {
      return MakeError(ErrorKind::kSchemeMismatch,
                       "only partial multisig signatures aggregate");
    }
    acc = Mod(acc + FromBigEndian(sig.body), aux.q);
  }
  return Signature{SignatureScheme::kMultisigAggregate, EncodeAux(acc)};
}

bool MultisigVerify(std::span<const mpz_class> pks, ByteSpan msg,
                    const Signature& aggregate, VerifyStats* stats) {
  if (aggregate.scheme != SignatureScheme::kMultisigAggregate || pks.empty()) {
    return false;
  }
  const GroupParams& aux = AuxiliaryGroup();
  mpz_class apk = 0;
  for (const mpz_class& pk : pks) apk = Mod(apk + pk, aux.q);
  if (stats != nullptr) ++stats->equation_checks;
  return PairingEquationHolds(apk, msg, aggregate.body);
}

}  // namespace seclab
