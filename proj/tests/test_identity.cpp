#include <gtest/gtest.h>

#include <random>
#include <set>

#include "zt6g/identity.hpp"

using namespace zt6g;

namespace {

Digest seed_of(std::uint8_t b) {
    Digest d{};
    d.fill(b);
    return d;
}

CertificateRequest request(std::uint8_t key_byte = 1) {
    CertificateRequest r;
    r.subject_public_key = Bytes(32, key_byte);
    r.ue_type = UeType::Handset;
    r.os_version = "android-14";
    r.proof_of_identity = {0xde, 0xad};
    return r;
}

class RegistryTest : public ::testing::TestWithParam<SignerKind> {
protected:
    IdentityRegistry registry{64512, 2, make_signer(GetParam(), seed_of(9))};
};

}  // namespace

TEST(CryptoTest, Sha256KnownVector) {
    EXPECT_EQ(crypto::to_hex(crypto::sha256("abc")),
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(CryptoTest, HexAndBase64RoundTrip) {
    const Bytes data{0, 1, 2, 0xfe, 0xff, 0x80};
    EXPECT_EQ(crypto::from_hex(crypto::to_hex(data)), data);
    EXPECT_EQ(crypto::from_base64(crypto::to_base64(data)), data);
    EXPECT_THROW(crypto::from_hex("abc"), std::invalid_argument);
}

TEST(CryptoTest, SignersRejectOtherKeys) {
    const Bytes msg{1, 2, 3};
    for (auto kind : {SignerKind::Hmac, SignerKind::Ed25519}) {
        auto a = make_signer(kind, seed_of(1));
        auto b = make_signer(kind, seed_of(2));
        const auto sig = a->sign(msg);
        EXPECT_TRUE(a->verify(msg, sig));
        EXPECT_FALSE(b->verify(msg, sig));
        EXPECT_FALSE(a->verify(Bytes{1, 2, 4}, sig));
    }
}

TEST_P(RegistryTest, FirstRegistrationContract) {
    const auto c = registry.register_certificate(request(), 0);
    EXPECT_EQ(c.cert_id, 1u);
    EXPECT_EQ(c.valid_until, 3600);
    EXPECT_EQ(c.status, CertStatus::Active);
    EXPECT_EQ(c.holder(), (UeId{64512, 2, 1}));
    EXPECT_EQ(registry.verify_certificate(c, 0), VerifyResult::Valid);
}

TEST_P(RegistryTest, RejectsIncompleteRequests) {
    auto r = request();
    r.proof_of_identity.clear();
    EXPECT_THROW(registry.register_certificate(r, 0), RequestRejected);
    r = request();
    r.subject_public_key.clear();
    EXPECT_THROW(registry.register_certificate(r, 0), RequestRejected);
    r = request();
    r.os_version.clear();
    EXPECT_THROW(registry.register_certificate(r, 0), RequestRejected);
}

TEST_P(RegistryTest, IdsIncreaseAndBothVerify) {
    const auto a = registry.register_certificate(request(1), 5);
    const auto b = registry.register_certificate(request(1), 5);
    EXPECT_EQ(a.cert_id, 1u);
    EXPECT_EQ(b.cert_id, 2u);
    EXPECT_EQ(registry.verify_certificate(a, 5), VerifyResult::Valid);
    EXPECT_EQ(registry.verify_certificate(b, 5), VerifyResult::Valid);
}

TEST_P(RegistryTest, ExpiryBoundary) {
    const auto c = registry.register_certificate(request(), 10);
    EXPECT_EQ(registry.verify_certificate(c, c.valid_until), VerifyResult::Valid);
    EXPECT_EQ(registry.verify_certificate(c, c.valid_until + 1), VerifyResult::Expired);
}

TEST_P(RegistryTest, UpdateKeepsIdAndSupersedesOldCertificate) {
    const auto old = registry.register_certificate(request(1), 0);
    const auto fresh = registry.update_certificate(old.cert_id, request(2), 100);
    EXPECT_EQ(fresh.cert_id, old.cert_id);
    EXPECT_EQ(fresh.valid_until, 100 + registry.lifetime());
    EXPECT_EQ(fresh.subject_public_key, Bytes(32, 2));
    EXPECT_EQ(registry.verify_certificate(fresh, 100), VerifyResult::Valid);
    EXPECT_EQ(registry.verify_certificate(old, 100), VerifyResult::SignatureMismatch);
}

TEST_P(RegistryTest, UpdateErrors) {
    EXPECT_THROW(registry.update_certificate(42, request(), 0), UnknownCertificate);
    const auto c = registry.register_certificate(request(), 0);
    registry.revoke_certificate(c.cert_id);
    EXPECT_THROW(registry.update_certificate(c.cert_id, request(), 0), CertificateRevoked);
}

TEST_P(RegistryTest, RevocationIsIdempotentAndFinal) {
    const auto c = registry.register_certificate(request(), 0);
    registry.revoke_certificate(c.cert_id);
    EXPECT_EQ(registry.verify_certificate(c, 1), VerifyResult::Revoked);
    const auto snapshot = registry.records();
    EXPECT_NO_THROW(registry.revoke_certificate(c.cert_id));
    EXPECT_EQ(registry.records(), snapshot);
    EXPECT_EQ(registry.verify_certificate(c, 5000), VerifyResult::Revoked);
    EXPECT_THROW(registry.revoke_certificate(99), UnknownCertificate);
}

TEST_P(RegistryTest, ForeignSignerIsMismatch) {
    IdentityRegistry other(64512, 2, make_signer(GetParam(), seed_of(10)));
    const auto forged = other.register_certificate(request(), 0);
    registry.register_certificate(request(), 0);
    EXPECT_EQ(registry.verify_certificate(forged, 0), VerifyResult::SignatureMismatch);
}

TEST_P(RegistryTest, UnknownRecordWithGenuineSignature) {
    // Signed by this registry's key but never stored: only possible via a
    // registry sharing the key, e.g. a restored snapshot that lost records.
    IdentityRegistry twin(64512, 2, make_signer(GetParam(), seed_of(9)));
    const auto c = twin.register_certificate(request(), 0);
    EXPECT_EQ(registry.verify_certificate(c, 0), VerifyResult::Unknown);
}

TEST_P(RegistryTest, EveryFieldMutationBreaksSignature) {
    const auto c = registry.register_certificate(request(), 0);
    std::vector<Certificate> mutants(8, c);
    mutants[0].cert_id ^= 1;
    mutants[1].community_id ^= 1;
    mutants[2].asn ^= 1;
    mutants[3].subject_public_key[0] ^= 1;
    mutants[4].issued_at ^= 1;
    mutants[5].valid_until ^= 1;
    mutants[6].status = CertStatus::Revoked;
    mutants[7].issuer_signature[0] ^= 1;
    for (std::size_t i = 0; i < mutants.size(); ++i) {
        EXPECT_EQ(registry.verify_certificate(mutants[i], 0), VerifyResult::SignatureMismatch) << "field " << i;
    }
}

TEST_P(RegistryTest, SnapshotRoundTrip) {
    registry.register_certificate(request(1), 0);
    const auto b = registry.register_certificate(request(2), 3);
    registry.revoke_certificate(1);
    const auto j = registry.to_json();
    auto restored = IdentityRegistry::from_json(j, make_signer(GetParam(), seed_of(9)));
    EXPECT_EQ(restored.records(), registry.records());
    EXPECT_EQ(restored.next_cert_id(), registry.next_cert_id());
    EXPECT_EQ(restored.verify_certificate(b, 3), VerifyResult::Valid);
    EXPECT_EQ(restored.to_json(), j);
}

TEST_P(RegistryTest, RandomRequestsVerifyAfterRegister) {
    std::mt19937_64 rng(11);
    std::set<CertId> ids;
    for (int i = 0; i < 200; ++i) {
        auto r = request(static_cast<std::uint8_t>(rng()));
        r.ue_type = static_cast<UeType>(rng() % 4);
        r.origin = static_cast<CertOrigin>(rng() % 2);
        const Second now = static_cast<Second>(rng() % 1000);
        const auto c = registry.register_certificate(r, now);
        EXPECT_TRUE(ids.insert(c.cert_id).second);
        EXPECT_GT(c.valid_until, c.issued_at);
        EXPECT_EQ(registry.verify_certificate(c, now), VerifyResult::Valid);
    }
}

INSTANTIATE_TEST_SUITE_P(Schemes, RegistryTest, ::testing::Values(SignerKind::Hmac, SignerKind::Ed25519),
                         [](const auto& info) { return info.param == SignerKind::Hmac ? "Hmac" : "Ed25519"; });
