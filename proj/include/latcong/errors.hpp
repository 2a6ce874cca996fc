#pragma once

#include <stdexcept>
#include <string>

namespace latcong {

// Base for everything this library throws on purpose.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mathematically invalid input (out-of-range parameter, singular basis, ...).
struct domain_error : error {
    explicit domain_error(const std::string& msg) : error(msg) {}
};

// A row fails gcd(row, N) = 1 or a system fails the rank condition.
struct normalization_error : domain_error {
    explicit normalization_error(const std::string& msg) : domain_error(msg) {}
};

// A guard on enumeration or memory size would be exceeded.
struct size_limit_error : error {
    explicit size_limit_error(const std::string& msg) : error(msg) {}
};

// A rejection sampler hit its trial cap without producing a value.
struct sampling_error : error {
    explicit sampling_error(const std::string& msg) : error(msg) {}
};

} // namespace latcong
