#ifndef GARNIER_VERSION_HPP
#define GARNIER_VERSION_HPP

namespace garnier {

inline constexpr const char* version = "0.1.0";

} // namespace garnier

#endif
