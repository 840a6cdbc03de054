#include "evoforge/mutation/mutate.hpp"

#include "evoforge/mutation/parsing.hpp"

namespace evoforge::mutation {

MutationResult mutate(std::span<const Program> parents, std::span<const MutationContext> contexts, MutationMode mode,
                      ModelRouter& router, Rng& rng, std::string_view task_description, const PromptOptions& options)
{
    MutationResult result;
    if (parents.empty() || parents.size() != contexts.size()) {
        result.failure = MutationFailure{"prompt", "each parent needs exactly one context"};
        return result;
    }
    try {
        result.prompt = build_prompt(task_description, contexts, mode, options);
    } catch (const PromptTooLong& e) {
        result.failure = MutationFailure{"prompt_too_long", e.what()};
        return result;
    } catch (const Error& e) {
        result.failure = MutationFailure{"prompt", e.what()};
        return result;
    }
    try {
        result.response = router.route_and_call(StageKind::Mutation, result.prompt, rng);
    } catch (const LlmUnavailable& e) {
        result.failure = MutationFailure{"llm_unavailable", e.what()};
        return result;
    }
    try {
        if (mode == MutationMode::Rewrite) {
            result.source = parse_rewrite(result.response);
        } else {
            auto blocks = parse_diff_blocks(result.response);
            if (blocks.empty()) {
                result.failure = MutationFailure{"diff_empty", "response contains no SEARCH/REPLACE block"};
                return result;
            }
            result.source = apply_blocks(parents.front().source, blocks);
        }
    } catch (const ParseFailure& e) {
        result.failure = MutationFailure{e.reason(), e.what()};
    }
    return result;
}

} // namespace evoforge::mutation
