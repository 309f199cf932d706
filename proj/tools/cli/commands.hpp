#pragma once

namespace lppls::cli {

/// Exit statuses shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
/// fit: the fit was disqualified. postmortem: the selection was empty.
inline constexpr int kExitNegative = 2;

/// Parses argv and runs one of fit, scan, postmortem, synth, stats.
int run(int argc, const char* const* argv);

}  // namespace lppls::cli
