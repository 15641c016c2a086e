#ifndef DRMX_PARSER_HPP
#define DRMX_PARSER_HPP

#include <string>
#include <utility>
#include <vector>

#include "drmx/kb.hpp"
#include "drmx/program.hpp"

namespace drmx {

struct FeatureDef; // sampler.hpp

// Clause syntax: one clause per statement terminated by ".", ":-" rule
// operator, "," conjunction, "%" comments. Functors/constants start lowercase
// or are single-quoted; variables start uppercase or "_".
Program parse_program(const std::string& text);

// "modeh(Recall, Template)." / "modeb(Recall, Template)." with "+t", "-t",
// "#t" placemarkers; Recall is a positive integer or "*" (the recall cap).
std::vector<ModeDecl> parse_modes(const std::string& text, int recall_cap);

// "relevance_order([l1,l2,...])." then "relevance(pred/arity, label)."
RelevanceMap parse_relevance(const std::string& text);

// "example(Id, ClassLabel)." statements.
std::vector<std::pair<std::string, std::string>> parse_examples(const std::string& text);

// "feature(Idx, (f_Idx(X) :- Body))." statements.
std::vector<FeatureDef> parse_features(const std::string& text);

std::string serialize_program(const Program& p);
std::string serialize_modes(const std::vector<ModeDecl>& modes);
std::string serialize_relevance(const RelevanceMap& r);
std::string serialize_features(const std::vector<FeatureDef>& features);

} // namespace drmx

#endif
