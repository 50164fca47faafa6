#pragma once

#include <stdexcept>
#include <string>

namespace termrec {

// Bad input data or a protocol violation (empty dataset, cutoff with no
// test points, malformed file, out-of-range argument).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Optimization blew up (non-finite loss). Carries the epoch it happened in.
class TrainingError : public std::runtime_error {
public:
    TrainingError(const std::string& msg, int epoch)
        : std::runtime_error(msg + " (epoch " + std::to_string(epoch) + ")"),
          epoch_(epoch) {}

    int epoch() const { return epoch_; }

private:
    int epoch_;
};

} // namespace termrec
