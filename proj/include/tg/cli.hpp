#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace tg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// Runs one command: `<command> [dataset] [--config=file] [--key.path=value ...]`.
// Commands: ingest, stats, snapshot, split, sample, negatives, eval-link, eval-node.
// Bare keys resolve against the command's own config sections (e.g. `snapshot --k=1`
// sets snapshot.k). Returns 0 on success, 1 on validation errors, 2 on I/O errors.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace tg
