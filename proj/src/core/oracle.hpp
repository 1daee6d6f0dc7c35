#pragma once

#include "graph.hpp"
#include "query.hpp"

#include <vector>

namespace dyncade {

// Brute-force reference evaluation. Exponential by design; intended for
// graphs of a few dozen vertices and arity <= 3. Distances come from fresh
// BFS runs, independent of any engine index.
struct OracleResult {
    std::vector<bool> sentence_truth;  // parallel to query.sentences
    std::size_t active_case = 0;
    std::vector<Tuple> answers;  // sorted, duplicate-free
};

OracleResult oracle_evaluate(const DynamicGraph& g, const NormalizedQuery& q);

std::vector<Tuple> oracle_answers(const DynamicGraph& g, const NormalizedQuery& q);
bool oracle_check_sentence(const DynamicGraph& g, const NormalizedQuery& q, const std::string& name);
long long oracle_count(const DynamicGraph& g, const NormalizedQuery& q);

}  // namespace dyncade
