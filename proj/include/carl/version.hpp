#ifndef CARL_VERSION_HPP
#define CARL_VERSION_HPP

namespace carl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace carl

#endif  // CARL_VERSION_HPP
