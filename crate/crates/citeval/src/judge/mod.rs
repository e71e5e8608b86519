//! Judge-based evaluation: rubric prompts, output grammar, backends, and the
//! three dimension evaluators.

mod backend;
mod eval;
mod prompt;
mod verdict;

pub use backend::{
    prompt_hash, HeuristicJudge, JudgeBackend, JudgeError, RemoteJudge, ScriptedJudge,
};
pub use eval::{
    eval_fact_check, eval_link_works, eval_relevant_content, JudgedOutcome, MAX_PARSE_RETRIES,
};
pub use prompt::{
    build_factcheck_prompt, build_relevance_prompt, extract_sections, FACTCHECK_TEMPLATE_VERSION,
    GRAMMAR_REMINDER, RELEVANCE_TEMPLATE_VERSION,
};
pub use verdict::{parse_judge_output, render_verdict, JudgeVerdict, VerdictError};
