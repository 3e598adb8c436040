#pragma once

#include <filesystem>
#include <iosfwd>

#include "qdecay/observables.hpp"

namespace qdecay {

/// Header of every trace CSV.
inline constexpr const char* kTraceHeader = "t,P,g,j_a,norm,energy_re,energy_im";

/// One row per sample, 17 significant digits; missing g is an empty field.
void write_trace_csv(std::ostream& out, const DecayTrace& trace);
void write_trace_csv(const std::filesystem::path& path, const DecayTrace& trace);

/// Inverse of write_trace_csv. The returned trace carries a default cfg.
/// Throws FileError (unreadable) or std::runtime_error (malformed content).
DecayTrace read_trace_csv(std::istream& in);
DecayTrace read_trace_csv(const std::filesystem::path& path);

}  // namespace qdecay
