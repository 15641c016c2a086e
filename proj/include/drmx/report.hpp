#ifndef DRMX_REPORT_HPP
#define DRMX_REPORT_HPP

#include <string>

#include "drmx/explain.hpp"
#include "drmx/feature.hpp"
#include "drmx/kb.hpp"

namespace drmx {

// Human-readable explanation report: prediction and neighborhood header, one
// block per ranked explanation with its <L,P> label, then the definitions of
// every feature mentioned, each with its relevance interval.
std::string serialize_report(const ExplainResult& res, const FeatureSet& fs,
                             const RelevanceMap& relmap);

// Machine-readable counterpart with identical content.
std::string serialize_report_json(const ExplainResult& res, const FeatureSet& fs,
                                  const RelevanceMap& relmap, unsigned long long seed,
                                  const RunConfig& cfg);

} // namespace drmx

#endif
