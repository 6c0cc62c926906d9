#include "framec/error.hpp"

namespace framec {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NotAFrame: return "NotAFrame";
    case ErrorKind::BadShape: return "BadShape";
    case ErrorKind::NotZeroColumn: return "NotZeroColumn";
    case ErrorKind::ZeroWeight: return "ZeroWeight";
    case ErrorKind::NotDualPair: return "NotDualPair";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MixedField: return "MixedField";
    case ErrorKind::NotAFamily: return "NotAFamily";
    }
    return "Unknown";
}

} // namespace framec
