#pragma once

#include "phistat/error.hpp"

#include <doctest.h>

#include <optional>

// Code of the phistat::Error thrown by f, or nullopt when f returns normally.
template <class F>
std::optional<phistat::ErrorCode> error_code(F&& f) {
    try {
        f();
    } catch (const phistat::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

#define CHECK_ERROR(expr, expected) CHECK(error_code([&] { (void)(expr); }) == std::optional(phistat::ErrorCode::expected))
