#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "apx/finite.hpp"
#include "apx/systems.hpp"

namespace apx {

/// Writes the header line and one line per quadruple emitted at stages
/// 0..stages-1: {"s":…,"k":…,"m":…,"l":…,"n":…}.
void write_system_jsonl(const System& s, std::uint64_t stages, std::ostream& out);

/// Replays a system file: stage s emits the quadruple recorded at s.
/// Sections scan the recorded stages. If the header names a builder (possibly
/// wrapped in m2t(...)/t2m(...)), its probe is reattached.
/// Throws ParseError naming the offending line.
System read_system_jsonl(std::istream& in);
System read_system_jsonl_file(const std::string& path);

/// {"i":…,"j":…} per line.
void write_pairs_jsonl(const std::vector<IndexPair>& r, std::ostream& out);
std::vector<IndexPair> read_pairs_jsonl(std::istream& in);

}  // namespace apx
