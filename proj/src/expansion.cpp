#include "colloc/expansion.hpp"

#include "text_util.hpp"

namespace colloc {

const char* to_string(QueryOperator op) { return op == QueryOperator::And ? "AND" : "OR"; }

QueryOperator parse_operator(const std::string& text) {
    auto t = detail::lower(text);
    if (t == "and") return QueryOperator::And;
    if (t == "or") return QueryOperator::Or;
    throw InvalidQuery("invalid_query", "operator must be AND or OR, got '" + text + "'");
}

ComplementedConceptList expand(ConceptId seed, const VocabularyStore& store) {
    ComplementedConceptList ccl{seed, {seed}};
    // Worklist: each member is processed once; its equivalents and direct
    // children are enqueued. Following direct children transitively covers
    // full descent, so the result is the least fixpoint.
    std::vector<ConceptId> work{seed};
    while (!work.empty()) {
        auto c = work.back();
        work.pop_back();
        for (auto e : store.equivalents(c))
            if (ccl.members.insert(e).second) work.push_back(e);
        for (auto child : store.children(c))
            if (ccl.members.insert(child).second) work.push_back(child);
    }
    return ccl;
}

QueryPlan compile(const std::vector<ConceptId>& seeds, QueryOperator op, bool expansion,
                  const VocabularyStore& store) {
    if (seeds.empty()) throw InvalidQuery("empty_query", "query needs at least one concept");
    for (auto s : seeds)
        if (!store.find(s)) throw InvalidQuery("unknown_concept", "unknown concept id " + std::to_string(to_int(s)));

    QueryPlan plan;
    plan.op = op;
    for (auto s : seeds) plan.ccls.push_back(expansion ? expand(s, store) : ComplementedConceptList{s, {s}});
    if (op == QueryOperator::Or && plan.ccls.size() > 1) {
        ComplementedConceptList merged{seeds.front(), {}};
        for (auto& ccl : plan.ccls) merged.members.merge(ccl.members);
        plan.ccls.assign(1, std::move(merged));
    }
    return plan;
}

} // namespace colloc
