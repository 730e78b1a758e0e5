// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include "idexpose/clock.hpp"

#include <cstdio>
#include <ctime>
#include <thread>

namespace idexpose {

TimePoint SystemClock::now()
{
    return std::chrono::time_point_cast<Millis>(std::chrono::system_clock::now());
}

void SystemClock::sleepFor(Millis duration)
{
    if (duration.count() > 0)
        std::this_thread::sleep_for(duration);
}

VirtualClock::VirtualClock(TimePoint start) : mNow(start) {}

TimePoint VirtualClock::now()
{
    std::lock_guard lock(mMutex);
    return mNow;
}

void VirtualClock::sleepFor(Millis duration)
{
    std::lock_guard lock(mMutex);
    mSleeps.push_back(duration);
    if (duration.count() > 0)
        mNow += duration;
}

void VirtualClock::advance(Millis duration)
{
    std::lock_guard lock(mMutex);
    mNow += duration;
}

std::vector<Millis> VirtualClock::sleeps() const
{
    std::lock_guard lock(mMutex);
    return mSleeps;
}

std::string formatTimestamp(TimePoint t)
{
    const auto ms = t.time_since_epoch().count();
    std::time_t secs = static_cast<std::time_t>(ms / 1000);
    long frac = static_cast<long>(ms % 1000);
    if (frac < 0) {
        frac += 1000;
        --secs;
    }
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03ldZ", tm.tm_year + 1900, tm.tm_mon + 1,
                  tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, frac);
    return buf;
}

}  // namespace idexpose
