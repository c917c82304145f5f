#pragma once

#include <sodium.h>

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zt6g {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, crypto_hash_sha256_BYTES>;

namespace crypto {

inline void ensure_init() {
    static const bool ok = [] { return sodium_init() >= 0; }();
    if (!ok) {
        throw std::runtime_error("libsodium initialisation failed");
    }
}

inline Digest sha256(std::span<const std::uint8_t> data) {
    ensure_init();
    Digest out{};
    crypto_hash_sha256(out.data(), data.data(), data.size());
    return out;
}

inline Digest sha256(std::string_view text) {
    return sha256(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

inline std::string to_hex(std::span<const std::uint8_t> data) {
    ensure_init();
    std::string out(data.size() * 2 + 1, '\0');
    sodium_bin2hex(out.data(), out.size(), data.data(), data.size());
    out.pop_back();
    return out;
}

inline Bytes from_hex(std::string_view hex) {
    ensure_init();
    Bytes out(hex.size() / 2 + 1);
    std::size_t len = 0;
    const char* end = nullptr;
    if (sodium_hex2bin(out.data(), out.size(), hex.data(), hex.size(), nullptr, &len, &end) != 0 ||
        end != hex.data() + hex.size()) {
        throw std::invalid_argument("invalid hex string");
    }
    out.resize(len);
    return out;
}

inline std::string to_base64(std::span<const std::uint8_t> data) {
    ensure_init();
    constexpr int variant = sodium_base64_VARIANT_ORIGINAL;
    std::string out(sodium_base64_ENCODED_LEN(data.size(), variant), '\0');
    sodium_bin2base64(out.data(), out.size(), data.data(), data.size(), variant);
    out.resize(out.size() - 1);
    return out;
}

inline Bytes from_base64(std::string_view text) {
    ensure_init();
    Bytes out(text.size() * 3 / 4 + 3);
    std::size_t len = 0;
    const char* end = nullptr;
    if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr, &len, &end,
                          sodium_base64_VARIANT_ORIGINAL) != 0 ||
        end != text.data() + text.size()) {
        throw std::invalid_argument("invalid base64 string");
    }
    out.resize(len);
    return out;
}

}  // namespace crypto

/// Signature scheme used by a community controller acting as CA.
class Signer {
public:
    virtual ~Signer() = default;
    virtual Bytes sign(std::span<const std::uint8_t> message) const = 0;
    virtual bool verify(std::span<const std::uint8_t> message, std::span<const std::uint8_t> signature) const = 0;
    virtual std::string scheme() const = 0;
};

/// Ed25519 keypair derived deterministically from a 32-byte seed.
class Ed25519Signer final : public Signer {
public:
    explicit Ed25519Signer(const Digest& seed) {
        crypto::ensure_init();
        crypto_sign_seed_keypair(public_key_.data(), secret_key_.data(), seed.data());
    }

    Bytes sign(std::span<const std::uint8_t> message) const override {
        Bytes sig(crypto_sign_BYTES);
        crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), secret_key_.data());
        return sig;
    }

    bool verify(std::span<const std::uint8_t> message, std::span<const std::uint8_t> signature) const override {
        if (signature.size() != crypto_sign_BYTES) {
            return false;
        }
        return crypto_sign_verify_detached(signature.data(), message.data(), message.size(), public_key_.data()) == 0;
    }

    std::string scheme() const override { return "ed25519"; }

    const std::array<std::uint8_t, crypto_sign_PUBLICKEYBYTES>& public_key() const { return public_key_; }

private:
    std::array<std::uint8_t, crypto_sign_PUBLICKEYBYTES> public_key_{};
    std::array<std::uint8_t, crypto_sign_SECRETKEYBYTES> secret_key_{};
};

/// HMAC-SHA256 stand-in for the simulator hot path. Same verify contract,
/// symmetric key.
class HmacSigner final : public Signer {
public:
    explicit HmacSigner(const Digest& key) : key_(key) { crypto::ensure_init(); }

    Bytes sign(std::span<const std::uint8_t> message) const override {
        Bytes mac(crypto_auth_hmacsha256_BYTES);
        crypto_auth_hmacsha256(mac.data(), message.data(), message.size(), key_.data());
        return mac;
    }

    bool verify(std::span<const std::uint8_t> message, std::span<const std::uint8_t> signature) const override {
        if (signature.size() != crypto_auth_hmacsha256_BYTES) {
            return false;
        }
        return crypto_auth_hmacsha256_verify(signature.data(), message.data(), message.size(), key_.data()) == 0;
    }

    std::string scheme() const override { return "hmac-sha256"; }

private:
    Digest key_;
};

enum class SignerKind { Hmac, Ed25519 };

inline std::unique_ptr<Signer> make_signer(SignerKind kind, const Digest& seed) {
    if (kind == SignerKind::Ed25519) {
        return std::make_unique<Ed25519Signer>(seed);
    }
    return std::make_unique<HmacSigner>(seed);
}

/// Big-endian canonical encoder used for everything that gets hashed or signed.
class ByteWriter {
public:
    explicit ByteWriter(std::size_t capacity = 128) { buf_.reserve(capacity); }

    template <typename T>
    ByteWriter& uint(T value) {
        for (int shift = static_cast<int>(sizeof(T) * 8) - 8; shift >= 0; shift -= 8) {
            buf_.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> shift));
        }
        return *this;
    }

    ByteWriter& bytes(std::span<const std::uint8_t> data) {
        uint(static_cast<std::uint32_t>(data.size()));
        buf_.insert(buf_.end(), data.begin(), data.end());
        return *this;
    }

    ByteWriter& str(std::string_view s) {
        return bytes(std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
    }

    ByteWriter& raw(std::span<const std::uint8_t> data) {
        buf_.insert(buf_.end(), data.begin(), data.end());
        return *this;
    }

    const Bytes& data() const& { return buf_; }
    Bytes data() && { return std::move(buf_); }

private:
    Bytes buf_;
};

}  // namespace zt6g
