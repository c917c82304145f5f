#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "json.hpp"
#include "zt6g/crypto.hpp"
#include "zt6g/domain.hpp"
#include "zt6g/error.hpp"

namespace zt6g {

enum class UeType : std::uint8_t { IoT, Handset, Server, NetworkEntity };
enum class CertOrigin : std::uint8_t { SelfGenerated, HomeGenerated };
enum class CertStatus : std::uint8_t { Active, Revoked };

enum class VerifyResult { Valid, Expired, Revoked, SignatureMismatch, Unknown };

inline const char* to_string(VerifyResult r) {
    switch (r) {
        case VerifyResult::Valid: return "Valid";
        case VerifyResult::Expired: return "Expired";
        case VerifyResult::Revoked: return "Revoked";
        case VerifyResult::SignatureMismatch: return "SignatureMismatch";
        case VerifyResult::Unknown: return "Unknown";
    }
    return "?";
}

struct CertificateRequest {
    Bytes subject_public_key;
    UeType ue_type = UeType::IoT;
    std::string os_version;
    Bytes proof_of_identity;
    CertOrigin origin = CertOrigin::SelfGenerated;
};

struct Certificate {
    CertId cert_id = 0;
    CommunityId community_id = 0;
    Asn asn = 0;
    Bytes subject_public_key;
    Second issued_at = 0;
    Second valid_until = 0;
    CertStatus status = CertStatus::Active;
    Bytes issuer_signature;

    UeId holder() const { return UeId{asn, community_id, cert_id}; }

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

/// Canonical bytes covered by the issuer signature: every field except the
/// signature itself.
inline Bytes signed_payload(const Certificate& c) {
    ByteWriter w;
    w.str("zt6g-cert-v1")
        .uint(c.cert_id)
        .uint(c.community_id)
        .uint(c.asn)
        .bytes(c.subject_public_key)
        .uint(static_cast<std::uint64_t>(c.issued_at))
        .uint(static_cast<std::uint64_t>(c.valid_until))
        .uint(static_cast<std::uint8_t>(c.status));
    return std::move(w).data();
}

/// Per-community certificate store. The community controller is the only CA
/// for its residents.
class IdentityRegistry {
public:
    static constexpr Second kDefaultLifetime = 3600;

    IdentityRegistry(Asn asn, CommunityId community_id, std::shared_ptr<const Signer> signer,
                     Second lifetime = kDefaultLifetime)
        : asn_(asn), community_id_(community_id), signer_(std::move(signer)), lifetime_(lifetime) {
        if (!signer_) {
            throw std::invalid_argument("registry needs a signer");
        }
        if (lifetime_ < 1) {
            throw std::invalid_argument("certificate lifetime must be >= 1 s");
        }
    }

    Asn asn() const { return asn_; }
    CommunityId community_id() const { return community_id_; }
    Second lifetime() const { return lifetime_; }
    const Signer& signer() const { return *signer_; }
    const std::map<CertId, Certificate>& records() const { return records_; }
    CertId next_cert_id() const { return next_cert_id_; }

    Certificate register_certificate(const CertificateRequest& req, Second now) {
        validate(req);
        Certificate cert;
        cert.cert_id = next_cert_id_++;
        cert.community_id = community_id_;
        cert.asn = asn_;
        cert.subject_public_key = req.subject_public_key;
        issue(cert, now);
        records_.emplace(cert.cert_id, cert);
        return cert;
    }

    /// Check order: signature, record lookup, binding to the current record,
    /// status, time.
    VerifyResult verify_certificate(const Certificate& cert, Second now) const {
        if (!signer_->verify(signed_payload(cert), cert.issuer_signature)) {
            return VerifyResult::SignatureMismatch;
        }
        auto it = records_.find(cert.cert_id);
        if (it == records_.end()) {
            return VerifyResult::Unknown;
        }
        const Certificate& record = it->second;
        // A superseded certificate (after update) carries a valid but stale signature.
        if (record.issuer_signature != cert.issuer_signature) {
            return VerifyResult::SignatureMismatch;
        }
        if (record.status == CertStatus::Revoked) {
            return VerifyResult::Revoked;
        }
        if (now > record.valid_until) {
            return VerifyResult::Expired;
        }
        return VerifyResult::Valid;
    }

    /// Re-issues under the original cert id with a fresh lifetime.
    Certificate update_certificate(CertId cert_id, const CertificateRequest& req, Second now) {
        auto it = records_.find(cert_id);
        if (it == records_.end()) {
            throw UnknownCertificate("no certificate " + std::to_string(cert_id));
        }
        if (it->second.status == CertStatus::Revoked) {
            throw CertificateRevoked("certificate " + std::to_string(cert_id) + " is revoked");
        }
        validate(req);
        Certificate cert = it->second;
        cert.subject_public_key = req.subject_public_key;
        issue(cert, now);
        it->second = cert;
        return cert;
    }

    void revoke_certificate(CertId cert_id) {
        auto it = records_.find(cert_id);
        if (it == records_.end()) {
            throw UnknownCertificate("no certificate " + std::to_string(cert_id));
        }
        it->second.status = CertStatus::Revoked;
    }

    nlohmann::json to_json() const;
    static IdentityRegistry from_json(const nlohmann::json& j, std::shared_ptr<const Signer> signer);

private:
    static void validate(const CertificateRequest& req) {
        if (req.subject_public_key.empty()) {
            throw RequestRejected("empty subject public key");
        }
        if (req.os_version.empty()) {
            throw RequestRejected("empty os version");
        }
        if (req.proof_of_identity.empty()) {
            throw RequestRejected("empty proof of identity");
        }
        if (static_cast<std::uint8_t>(req.ue_type) > static_cast<std::uint8_t>(UeType::NetworkEntity) ||
            static_cast<std::uint8_t>(req.origin) > static_cast<std::uint8_t>(CertOrigin::HomeGenerated)) {
            throw RequestRejected("malformed request enum");
        }
    }

    void issue(Certificate& cert, Second now) const {
        cert.issued_at = now;
        cert.valid_until = now + lifetime_;
        cert.status = CertStatus::Active;
        cert.issuer_signature = signer_->sign(signed_payload(cert));
    }

    Asn asn_;
    CommunityId community_id_;
    std::shared_ptr<const Signer> signer_;
    Second lifetime_;
    std::map<CertId, Certificate> records_;
    CertId next_cert_id_ = 1;
};

inline nlohmann::json IdentityRegistry::to_json() const {
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& [id, c] : records_) {
        recs.push_back({
            {"cert_id", c.cert_id},
            {"community_id", c.community_id},
            {"asn", c.asn},
            {"subject_public_key", crypto::to_base64(c.subject_public_key)},
            {"issued_at", c.issued_at},
            {"valid_until", c.valid_until},
            {"status", c.status == CertStatus::Active ? "active" : "revoked"},
            {"issuer_signature", crypto::to_base64(c.issuer_signature)},
        });
    }
    return {
        {"asn", asn_},
        {"community_id", community_id_},
        {"scheme", signer_->scheme()},
        {"lifetime_s", lifetime_},
        {"next_cert_id", next_cert_id_},
        {"records", std::move(recs)},
    };
}

inline IdentityRegistry IdentityRegistry::from_json(const nlohmann::json& j, std::shared_ptr<const Signer> signer) {
    if (j.at("scheme").get<std::string>() != signer->scheme()) {
        throw std::invalid_argument("snapshot scheme does not match signer");
    }
    IdentityRegistry reg(j.at("asn").get<Asn>(), j.at("community_id").get<CommunityId>(), std::move(signer),
                         j.at("lifetime_s").get<Second>());
    for (const auto& r : j.at("records")) {
        Certificate c;
        c.cert_id = r.at("cert_id").get<CertId>();
        c.community_id = r.at("community_id").get<CommunityId>();
        c.asn = r.at("asn").get<Asn>();
        c.subject_public_key = crypto::from_base64(r.at("subject_public_key").get<std::string>());
        c.issued_at = r.at("issued_at").get<Second>();
        c.valid_until = r.at("valid_until").get<Second>();
        c.status = r.at("status").get<std::string>() == "revoked" ? CertStatus::Revoked : CertStatus::Active;
        c.issuer_signature = crypto::from_base64(r.at("issuer_signature").get<std::string>());
        reg.records_.emplace(c.cert_id, std::move(c));
    }
    reg.next_cert_id_ = j.at("next_cert_id").get<CertId>();
    return reg;
}

}  // namespace zt6g
