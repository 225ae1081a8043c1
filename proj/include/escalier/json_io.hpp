#pragma once

#include <string>

#include "json.hpp"

#include "escalier/diagram.hpp"
#include "escalier/division.hpp"
#include "escalier/jacobians.hpp"
#include "escalier/resolution.hpp"
#include "escalier/series.hpp"
#include "escalier/stanley.hpp"
#include "escalier/stdbasis.hpp"

namespace escalier {

// Insertion-ordered JSON so repeated runs of the same command produce the
// same bytes; every number that can leave 64 bits is printed as a string.
using Json = nlohmann::ordered_json;

// current output schema tag, embedded in every top-level report
inline constexpr const char* kJsonSchema = "escalier/1";

Json json_of(const Q& q);
Json json_of(const Z& z);
Json json_of(const Exponent& e);
Json json_of(const TruncatedSeries& f);
Json json_of(const std::vector<TruncatedSeries>& fs);
Json json_of(const QMatrix& m);
Json json_of(const Diagram& d);
Json json_of(const Diagram::Decomposition& dec);
Json json_of(const DivisionResult& r);
Json json_of(const DiagramCertificate& c);
Json json_of(const StandardBasisReport& r);
Json json_of(const SamuelVerdict& v);
Json json_of(const StanleyEntry& e);
Json json_of(const StanleyBasis& b);
Json json_of(const JacobianVerdict& v);
Json json_of(const ExceptionalRecord& e);
Json json_of(const BlowupChart& c);
Json json_of(const MarkedIdeal& m);
Json json_of(const TraceNode& t);
Json json_of(const ResolutionTrace& t);
Json json_of(const VerifyReport& r);

// top-level wrapper: {"schema": ..., "command": ..., "result": payload}
Json report_of(const std::string& command, Json payload);

}  // namespace escalier
