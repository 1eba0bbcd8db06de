#pragma once

#include <stdexcept>
#include <string>

namespace isolab {

/// Base class for every failure the library reports deliberately.
/// `code()` is a stable machine-readable tag; `what()` carries the details.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define ISOLAB_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                    \
    public:                                                        \
        explicit Name(const std::string& message)                  \
            : Error(#Name, std::string(#Name) + ": " + message) {} \
    }

// algebra-core
ISOLAB_DEFINE_ERROR(NonAssociative);
ISOLAB_DEFINE_ERROR(BadUnit);
ISOLAB_DEFINE_ERROR(NormNotSubmultiplicative);
ISOLAB_DEFINE_ERROR(AlgebraMismatch);
ISOLAB_DEFINE_ERROR(MissingEmbedding);

// spectral
ISOLAB_DEFINE_ERROR(NotInvertible);
ISOLAB_DEFINE_ERROR(UnknownComponentStructure);
ISOLAB_DEFINE_ERROR(Overflow);

// isometry-engine
ISOLAB_DEFINE_ERROR(NoLimit);
ISOLAB_DEFINE_ERROR(DomainViolation);
ISOLAB_DEFINE_ERROR(SegmentLeavesDomain);
ISOLAB_DEFINE_ERROR(NotSymmetric);
ISOLAB_DEFINE_ERROR(NotIsometric);

// classify
ISOLAB_DEFINE_ERROR(SamplerExhausted);
ISOLAB_DEFINE_ERROR(HomomorphismClaimFalse);
ISOLAB_DEFINE_ERROR(FlagContradiction);
ISOLAB_DEFINE_ERROR(AmbiguousForm);
ISOLAB_DEFINE_ERROR(SingularRecoveredU);

// catalog / cli
ISOLAB_DEFINE_ERROR(IncompatibleSpec);
ISOLAB_DEFINE_ERROR(ParseError);
ISOLAB_DEFINE_ERROR(UnknownCheck);
ISOLAB_DEFINE_ERROR(FixtureSelfCheckFailed);

#undef ISOLAB_DEFINE_ERROR

} // namespace isolab
