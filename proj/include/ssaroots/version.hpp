#ifndef SSAROOTS_VERSION_HPP
#define SSAROOTS_VERSION_HPP

#ifndef SSAROOTS_VERSION
#define SSAROOTS_VERSION "0.1.0"
#endif

namespace ssaroots {

inline constexpr const char* version = SSAROOTS_VERSION;

}  // namespace ssaroots

#endif  // SSAROOTS_VERSION_HPP
