//! The three evaluation dimensions. Link Works is a pure function of the
//! fetch outcome; Relevant Content and Fact Check prompt a judge backend and
//! parse its verdict, retrying on grammar violations and transport failures.

use std::collections::BTreeSet;

use crate::fetch::{truncate, FetchCategory, FetchPolicy, TimeSource};
use crate::types::{Attribution, Citation, Dimension, EvalFlag, EvalResult, Score};

use super::backend::JudgeBackend;
use super::prompt::{build_factcheck_prompt, build_relevance_prompt, GRAMMAR_REMINDER};
use super::verdict::parse_judge_output;

/// Grammar-violation retries per evaluation, reminder appended each time.
pub const MAX_PARSE_RETRIES: u32 = 3;

/// Accessibility verdict: pass iff the fetch succeeded and extracted content
/// is non-empty. Never `NotEvaluated`.
pub fn eval_link_works(attribution_id: u64, citation: &Citation) -> EvalResult {
    let mut flags = BTreeSet::new();
    let score = match &citation.fetch_outcome {
        Some(outcome) => {
            if outcome.category == FetchCategory::RateLimited {
                flags.insert(EvalFlag::RateLimitedSource);
            }
            if outcome.category.is_ok() && outcome.has_content() {
                Score::Pass
            } else {
                Score::Fail
            }
        }
        None => {
            flags.insert(EvalFlag::FetchFailed);
            Score::Fail
        }
    };
    EvalResult {
        attribution_id,
        citation_id: citation.id,
        dimension: Dimension::LinkWorks,
        score,
        explanation: String::new(),
        judge_attempts: 0,
        flags,
    }
}

/// A judged evaluation plus whether every backend call died in transport,
/// which the runner aggregates into its backend-down signal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JudgedOutcome {
    pub result: EvalResult,
    pub transport_exhausted: bool,
}

pub async fn eval_relevant_content(
    attribution: &Attribution,
    citation: &Citation,
    backend: &dyn JudgeBackend,
    policy: &FetchPolicy,
    time: &dyn TimeSource,
) -> JudgedOutcome {
    eval_judged(
        Dimension::RelevantContent,
        build_relevance_prompt,
        attribution,
        citation,
        backend,
        policy,
        time,
    )
    .await
}

pub async fn eval_fact_check(
    attribution: &Attribution,
    citation: &Citation,
    backend: &dyn JudgeBackend,
    policy: &FetchPolicy,
    time: &dyn TimeSource,
) -> JudgedOutcome {
    eval_judged(
        Dimension::FactCheck,
        build_factcheck_prompt,
        attribution,
        citation,
        backend,
        policy,
        time,
    )
    .await
}

async fn eval_judged(
    dimension: Dimension,
    build_prompt: fn(&str, &str) -> String,
    attribution: &Attribution,
    citation: &Citation,
    backend: &dyn JudgeBackend,
    policy: &FetchPolicy,
    time: &dyn TimeSource,
) -> JudgedOutcome {
    let mut flags = BTreeSet::new();

    let category = citation.fetch_outcome.as_ref().map(|o| o.category);
    if category != Some(FetchCategory::Ok) {
        flags.insert(EvalFlag::FetchFailed);
        if category == Some(FetchCategory::RateLimited) {
            flags.insert(EvalFlag::RateLimitedSource);
        }
        return JudgedOutcome {
            result: skipped(dimension, attribution.id, citation.id, flags, 0),
            transport_exhausted: false,
        };
    }

    let full_content = citation
        .url_content
        .as_deref()
        .or_else(|| {
            citation
                .fetch_outcome
                .as_ref()
                .and_then(|o| o.content.as_deref())
        })
        .unwrap_or("");
    let content = truncate(full_content, policy.truncation_limit);
    let base_prompt = build_prompt(&attribution.text_nocite, content);

    let mut prompt = base_prompt.clone();
    let mut judge_attempts: u32 = 0;
    let mut parse_retries: u32 = 0;
    let mut transport_retries: u32 = 0;
    let mut transport_failures: u32 = 0;

    loop {
        judge_attempts += 1;
        match backend.complete(&prompt).await {
            Ok(raw) => match parse_judge_output(&raw) {
                Ok(verdict) => {
                    if parse_retries > 0 {
                        flags.insert(EvalFlag::JudgeParseRetry);
                    }
                    return JudgedOutcome {
                        result: EvalResult {
                            attribution_id: attribution.id,
                            citation_id: citation.id,
                            dimension,
                            score: if verdict.score { Score::Pass } else { Score::Fail },
                            explanation: verdict.explanation,
                            judge_attempts,
                            flags,
                        },
                        transport_exhausted: false,
                    };
                }
                Err(_) => {
                    parse_retries += 1;
                    if parse_retries > MAX_PARSE_RETRIES {
                        flags.insert(EvalFlag::JudgeParseRetry);
                        return JudgedOutcome {
                            result: skipped(
                                dimension,
                                attribution.id,
                                citation.id,
                                flags,
                                judge_attempts,
                            ),
                            transport_exhausted: false,
                        };
                    }
                    prompt = format!("{base_prompt}{GRAMMAR_REMINDER}");
                }
            },
            Err(e) if e.is_retryable() && transport_retries < policy.max_retries => {
                transport_retries += 1;
                transport_failures += 1;
                time.sleep_ms(policy.retry_delay_ms).await;
            }
            Err(_) => {
                transport_failures += 1;
                return JudgedOutcome {
                    result: skipped(dimension, attribution.id, citation.id, flags, judge_attempts),
                    transport_exhausted: judge_attempts == transport_failures,
                };
            }
        }
    }
}

fn skipped(
    dimension: Dimension,
    attribution_id: u64,
    citation_id: u64,
    flags: BTreeSet<EvalFlag>,
    judge_attempts: u32,
) -> EvalResult {
    EvalResult {
        attribution_id,
        citation_id,
        dimension,
        score: Score::NotEvaluated,
        explanation: String::new(),
        judge_attempts,
        flags,
    }
}
