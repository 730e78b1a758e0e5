// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <chrono>
#include <mutex>
#include <string>
#include <vector>

namespace idexpose {

using Millis = std::chrono::milliseconds;
using TimePoint = std::chrono::time_point<std::chrono::system_clock, Millis>;

class Clock {
public:
    virtual ~Clock() = default;
    virtual TimePoint now() = 0;
    virtual void sleepFor(Millis duration) = 0;
};

class SystemClock final : public Clock {
public:
    TimePoint now() override;
    void sleepFor(Millis duration) override;
};

/// Deterministic clock for tests: sleeping advances time instantly.
class VirtualClock final : public Clock {
public:
    explicit VirtualClock(TimePoint start = TimePoint(Millis(1'700'000'000'000)));

    TimePoint now() override;
    void sleepFor(Millis duration) override;
    void advance(Millis duration);

    std::vector<Millis> sleeps() const;

private:
    mutable std::mutex mMutex;
    TimePoint mNow;
    std::vector<Millis> mSleeps;
};

/// ISO 8601 UTC with millisecond precision, e.g. 2024-03-01T09:30:00.000Z.
std::string formatTimestamp(TimePoint t);

}  // namespace idexpose
