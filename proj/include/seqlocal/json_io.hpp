#pragma once

#include <array>
#include <filesystem>

#include "json.hpp"

#include "seqlocal/optimize.hpp"
#include "seqlocal/polytope.hpp"
#include "seqlocal/quantum.hpp"
#include "seqlocal/witness.hpp"

// JSON formats. Readers throw StructuralError with a path-like diagnostic on malformed input.
namespace seqlocal::io {

// Insertion-ordered objects keep output byte-stable.
using Json = nlohmann::ordered_json;

Json read_file(const std::filesystem::path& path);

Json to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

/// {"scenario": {...}, "p": [...]}, p in tensor index order.
Json to_json(const SequentialCorrelation& corr);
SequentialCorrelation correlation_from_json(const Json& j);

/// {"first": id, "per_history": {"a1,b1,x1,y1": id, ...}}
Json to_json(const ExtremePointSpec& spec);
ExtremePointSpec extreme_spec_from_json(const Json& j);

Json to_json(const MembershipVerdict& v);
Json to_json(const WitnessReport& r);
Json to_json(const ExtremalityCertificate& c);
Json to_json(const SeesawResult& r, std::uint64_t seed);
Json to_json(const QubitSampleReport& r);
Json to_json(const HiddenNonlocalityDemo& demo);

/// [[ [re, im], ... ], ...]; plain numbers are accepted as real entries.
Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// {"scenario", "dims": [dA, dB], "state": matrix,
///  "alice"/"bob": {"instruments": [{history: [[K per outcome] per setting]} per step],
///                  "final": {"a1,b1,x1,y1|x2": [E per outcome]}}}
Json to_json(const SequentialStrategy& s);
SequentialStrategy strategy_from_json(const Json& j);

struct StateFile {
  std::array<std::size_t, 2> dims{};
  DensityMatrix state;
};

/// {"dims": [dA, dB], "matrix": matrix}
Json to_json(const StateFile& f);
StateFile state_from_json(const Json& j);

}  // namespace seqlocal::io
