#pragma once

#include "centered.hpp"
#include "count_decomp.hpp"
#include "graph.hpp"
#include "query.hpp"
#include "skiplist.hpp"
#include "type_catalog.hpp"

#include <memory>
#include <optional>

namespace dyncade {

enum class EngineMode { LowDegree, BoundedDegree };

class Engine;

// Constant-delay enumeration handle. Yields answers in lexicographic order,
// each exactly once; becomes stale as soon as the engine is updated.
class Cursor {
public:
    std::optional<Tuple> next();  // StaleCursor if the engine moved on

private:
    friend class Engine;

    struct ClauseCursor {
        std::size_t clause = 0;
        bool primed = false;
        bool exhausted = false;
        std::vector<Tuple> level;  // current tuple per group level
        std::optional<Tuple> pending;
    };

    const Engine* eng_ = nullptr;
    std::uint64_t version_ = 0;
    bool done_ = false;
    bool empty_tuple_pending_ = false;  // arity-0 queries
    std::vector<ClauseCursor> clauses_;
};

// Ties the whole machinery together: materialized solution sources per
// centered query (incrementally maintained in either engine mode), skip
// indexes for inter-group separation, counting decompositions, and sentence
// truth tracking. Single writer; reads must not overlap an update.
class Engine {
public:
    Engine(const DynamicGraph& g, NormalizedQuery q, EngineMode mode);

    const DynamicGraph& graph() const { return g_; }
    const NormalizedQuery& query() const { return q_; }
    EngineMode mode() const { return mode_; }
    std::uint64_t version() const { return version_; }

    // Atomic: a rejected update leaves every observable answer unchanged.
    void update(const UpdateOp& op);

    // Boolean answer for arity-0 queries.
    bool check() const;
    bool check_sentence(std::string_view name) const;
    // Validation hook: the pigeonhole-free search path.
    bool check_sentence_bruteforce(std::string_view name) const;

    long long count() const;
    bool test(std::span<const VertexId> tuple) const;
    Cursor open_cursor() const;

    std::size_t active_case() const { return active_case_; }
    const std::vector<bool>& sentence_truths() const { return sentence_truth_; }
    // Bounded mode only; null in low-degree mode.
    const TypeCatalog* catalog() const { return catalog_.get(); }

private:
    friend class Cursor;

    struct Source {
        CenteredQuery cq;
        bool need_list = false;
        bool need_skip = false;
        std::uint32_t skip_k = 0;
        std::unique_ptr<CenteredIndex> index;  // LowDegree
        SolutionList list;                     // BoundedDegree, when need_list
        long long count = 0;                   // BoundedDegree
        std::unique_ptr<SkipIndex> skip;
    };

    struct GroupPlan {
        std::uint32_t source = 0;
        std::uint32_t first_pos = 0;
        std::uint32_t arity = 0;
    };

    struct ClausePlan {
        std::uint32_t r = 0;
        DistanceType tau;
        std::vector<GroupPlan> groups;
        Decomposition decomp;                     // valid when groups nonempty
        std::vector<std::uint32_t> leaf_sources;  // per decomposition leaf
    };

    struct SentencePlan {
        std::uint32_t source = 0;
        std::uint32_t s = 0;
        std::uint32_t r = 0;
    };

    std::uint32_t register_source(const CenteredQuery& cq, bool need_list, bool need_skip,
                                  std::uint32_t skip_k);
    void build_plans();
    void preprocess_low(const DynamicGraph& input);
    void preprocess_bounded(const DynamicGraph& input);
    void apply_single(const UpdateOp& op);
    void apply_source_diff(std::uint32_t sid, const std::vector<Tuple>& added,
                           const std::vector<Tuple>& removed,
                           const std::vector<VertexId>& skip_dirty);
    void refresh_sentences();

    const SolutionList& source_list(std::uint32_t sid) const;
    long long source_count(std::uint32_t sid) const;
    bool far_apart(VertexId a, VertexId b, std::uint32_t r) const;  // dist > 2r
    bool tuple_far(std::span<const VertexId> a, std::span<const VertexId> b, std::uint32_t r) const;
    bool sentence_truth_slow(const SentencePlan& sp) const;
    bool completable(const ClausePlan& plan, std::size_t from_level,
                     std::span<const VertexId> prefix) const;
    std::uint64_t list_block_bound(const ClausePlan& plan, std::size_t level) const;
    void advance_clause(Cursor::ClauseCursor& cc) const;
    bool group_member(const ClausePlan& plan, std::size_t gi, const Tuple& sub) const;
    std::uint32_t d_cur() const;

    DynamicGraph g_;
    NormalizedQuery q_;
    EngineMode mode_;
    std::uint64_t version_ = 0;

    std::vector<Source> sources_;
    std::unordered_map<std::string, std::uint32_t> source_by_key_;
    std::vector<SentencePlan> sentences_;
    std::vector<std::vector<ClausePlan>> cases_;
    std::unique_ptr<TypeCatalog> catalog_;

    std::vector<bool> sentence_truth_;
    std::size_t active_case_ = 0;
    std::uint32_t max_impact_radius_ = 0;
};

}  // namespace dyncade
