#pragma once

#include <variant>

#include "renyivec/inequalities.hpp"

// JSON and CSV surfaces. Writers are hand-rolled with a fixed key order and
// floating values printed at 17 significant digits, so identical inputs give
// byte-identical output; parsing uses nlohmann/json.

namespace renyivec {

using StateVariant = std::variant<ClassicalState, SparsePureState, DensityMatrix>;

/// Shortest %.17g form; round-trips every double exactly.
std::string format_double(double x);

std::string to_json(const ClassicalState& state);
std::string to_json(const SparsePureState& psi);
std::string to_json(const DensityMatrix& rho);
std::string to_json(const StateVariant& state);
std::string to_json(const EntropyVector& ev);
std::string to_json(const WeightedSpectrum& spec);
std::string to_json(const ConstructionDescriptor& desc);
std::string to_json(const MonotonicityReport& report, int n);
std::string to_json(const VnReport& report);
std::string to_json(const AudenaertReport& report);
std::string to_json(const ViolationWitness& witness);

StateVariant parse_state_json(const std::string& text);
EntropyVector parse_entropy_vector_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Rows "subset,entropy_bits" (or entropy_nats) in (size, mask) order.
std::string entropy_vector_csv(const EntropyVector& ev, bool nats);

/// Header M,subset,entropy_bits,target_bits,abs_error, one row per (M, subset).
std::string sweep_csv(const std::vector<SweepRow>& rows, const EntropyVector& target);

}  // namespace renyivec
