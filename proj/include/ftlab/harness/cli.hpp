#pragma once

namespace ftlab::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

// Subcommands pretrain, finetune, gu, benchmark and sweep. Returns the
// process exit code.
int cli_main(int argc, char** argv);

}  // namespace ftlab::harness
