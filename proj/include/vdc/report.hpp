#pragma once

#include <ostream>
#include <span>
#include <string>

#include "json.hpp"
#include "vdc/config.hpp"
#include "vdc/errbudget.hpp"
#include "vdc/experiments.hpp"
#include "vdc/expsum.hpp"
#include "vdc/transform.hpp"

namespace vdc {

using Json = nlohmann::ordered_json;

Json to_json(cplx z);
Json to_json(const ConditionMReport& r);
Json to_json(const AssumptionPartition& p);
Json to_json(const ErrorBudget& b);
Json to_json(const TaggedTerm& t);
Json to_json(const EndpointTerm& d);
Json to_json(const TransformResult& t, bool with_terms = true);
Json to_json(const FullTransform& f);
Json to_json(const ExampleReport& r);
Json to_json(const ConstantEstimate& e);
Json to_json(const CKReport& r);
Json to_json(const KLReport& r);
Json to_json(const IKReport& r);
Json to_json(const PoissonReport& r);
Json to_json(const ExperimentConfig& c);

// {"schema_version", "library_version", "kind", "config", "result"}
Json envelope(const std::string& kind, const ExperimentConfig& cfg, Json result);

// Writes `j` with two-space indentation and a trailing newline.
void write_json_file(const std::string& path, const Json& j);

// SVG 1.1 polyline of the curve, auto-fit viewport.
void write_curve_svg(std::ostream& os, std::span<const CurveSample> samples,
                     const std::string& title);

}  // namespace vdc
