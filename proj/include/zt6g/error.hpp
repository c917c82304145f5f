#pragma once

#include <stdexcept>
#include <string>

namespace zt6g {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define ZT6G_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                  \
    public:                                                      \
        explicit Name(const std::string& what) : Error(what) {}  \
    }

ZT6G_DEFINE_ERROR(MalformedIdentity);
ZT6G_DEFINE_ERROR(Unreachable);
ZT6G_DEFINE_ERROR(RequestRejected);
ZT6G_DEFINE_ERROR(UnknownCertificate);
ZT6G_DEFINE_ERROR(CertificateRevoked);
ZT6G_DEFINE_ERROR(InsufficientSusceptibles);
ZT6G_DEFINE_ERROR(TimeRegression);
ZT6G_DEFINE_ERROR(InvalidScenario);

#undef ZT6G_DEFINE_ERROR

}  // namespace zt6g
