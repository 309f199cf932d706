#pragma once

#include <stdexcept>
#include <string>

namespace lppls {

/// Bad or inconsistent input data (files, dates, prices).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The optimizer found no point with a finite cost in any restart.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lppls
