#pragma once

#include <stdexcept>
#include <string>

namespace qot {

/// Error type thrown by every module on contract violations and I/O failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw Error(msg);
}

} // namespace qot
