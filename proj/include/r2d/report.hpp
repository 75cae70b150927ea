#pragma once

#include "r2d/ktheory.hpp"
#include "r2d/model_io.hpp"

namespace r2d {

// JSON views of the library types. nlohmann::json keeps keys sorted, and all
// scalars serialize as exact strings, so identical inputs give byte-identical
// reports.

json to_json(const Rational& q);
json to_json(const CRat& c);
json to_json(Vec2 v);
json pattern_json(const ModelHandle& model, const Pattern& p);
json to_json(const ValidationReport& rep);
json to_json(const ModelHandle& model, const LocalInjectivityVerdict& v);
json to_json(const ModelHandle& model, const OpenSurjectiveReport& rep);
json to_json(const ModelHandle& model, const OrbitReachReport& rep);
json to_json(const ModelHandle& model, const PeriodicityReport& rep);
json to_json(const OperatorMatrix& m);
json to_json(const ModelHandle& model, const RnAlgebraDescription& d);
json to_json(const InclusionMultiplicity& inc);
json to_json(const IntMat& m);
json to_json(const CommutingExpectationsReport& rep);
json to_json(const FlipReport& rep);
json to_json(const GrowthReport& rep);
json to_json(const BratteliDiagram& d);
json to_json(const DimensionGroupReport& rep);
json to_json(const SimplicityReport& rep);
json to_json(const CoreCheckReport& rep);

} // namespace r2d
