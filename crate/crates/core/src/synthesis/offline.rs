//! Deterministic question→program rules: the offline stand-in for the chat
//! model. Covers the question shapes in the bundled example conversation
//! (what-is/read/say/how-many/set-to/empty) plus the follow-up verbs
//! (also/add/only/just/instead/remove/here); anything else is refused.

use crate::ast::{Adjective, FindChain, Item, Location, Program, Target};
use crate::parse::parse_program;
use crate::registry::Registry;

use super::nl::{NLOutcome, FOLLOWUP_PREFIX};

/// The clarification reply used when no rule matches the question.
pub const REFUSAL_TEXT: &str = "I'm sorry, I don't know what you mean, can you clarify?";

const DETERMINERS: [&str; 10] = [
    "the", "this", "that", "these", "those", "my", "a", "an", "our", "your",
];
const PREPOSITIONS: [&str; 3] = ["of", "on", "in"];

/// Phrase meanings the registry alone cannot provide: what "route" or
/// "product names" should look for. Values are (descriptor, registry name)
/// item sequences, innermost first.
const LEXICON: &[(&[&str], &[(Option<&str>, &str)])] = &[
    (
        &["license", "plate", "number"],
        &[(None, "any text"), (None, "license plate")],
    ),
    (&["route", "name"], &[(None, "any text")]),
    (&["route"], &[(None, "number")]),
    (&["expiration", "date"], &[(None, "date")]),
    (&["product", "name"], &[(Some("largest"), "any text")]),
    (&["name"], &[(Some("largest"), "any text")]),
    (&["people"], &[(None, "person")]),
    (&["bottle"], &[(None, "grocery product")]),
    (&["product"], &[(None, "grocery product")]),
];

/// Lowercase the question and split it into plain words. Apostrophes are
/// dropped ("what's" → "whats"), every other non-alphanumeric is a word
/// break.
fn normalize(question: &str) -> Vec<String> {
    let mut cleaned = String::with_capacity(question.len());
    for c in question.chars() {
        let c = c.to_ascii_lowercase();
        match c {
            'a'..='z' | '0'..='9' => cleaned.push(c),
            '\'' | '\u{2019}' => {}
            _ => cleaned.push(' '),
        }
    }
    cleaned.split_whitespace().map(str::to_owned).collect()
}

fn strip_determiners(mut tokens: &[String]) -> &[String] {
    while let Some(first) = tokens.first() {
        if DETERMINERS.contains(&first.as_str()) {
            tokens = &tokens[1..];
        } else {
            break;
        }
    }
    tokens
}

fn eat<'a>(tokens: &'a [String], word: &str) -> Option<&'a [String]> {
    match tokens.first() {
        Some(first) if first == word => Some(&tokens[1..]),
        _ => None,
    }
}

fn eat_any<'a>(tokens: &'a [String], words: &[&str]) -> Option<&'a [String]> {
    words.iter().find_map(|w| eat(tokens, w))
}

/// Singular spellings to try for a plural word, best guess first.
fn singular_candidates(word: &str) -> Vec<String> {
    let mut out = vec![word.to_owned()];
    if let Some(stem) = word.strip_suffix('s').filter(|s| s.len() > 1) {
        out.push(stem.to_owned());
    }
    if let Some(stem) = word.strip_suffix("es").filter(|s| s.len() > 1) {
        out.push(stem.to_owned());
    }
    if let Some(stem) = word.strip_suffix("ies").filter(|s| s.len() > 1) {
        out.push(format!("{stem}y"));
    }
    // nonstandard doubled plural ("busses" → "bus")
    if let Some(stem) = word.strip_suffix("ses").filter(|s| s.len() > 1) {
        out.push(stem.to_owned());
    }
    out
}

/// The phrase itself, then variants with the last word singularized.
fn phrase_candidates(tokens: &[String]) -> Vec<Vec<String>> {
    let (last, body) = tokens.split_last().expect("phrase is nonempty");
    singular_candidates(last)
        .into_iter()
        .map(|w| {
            let mut v = body.to_vec();
            v.push(w);
            v
        })
        .collect()
}

fn lexicon_items(specs: &[(Option<&str>, &str)], registry: &Registry) -> Option<Vec<Item>> {
    specs
        .iter()
        .map(|(descriptor, name)| {
            let adjective = match descriptor {
                Some(d) => Some(Adjective::resolve(d)?),
                None => None,
            };
            Some(Item::new(adjective, registry.resolve_target(name)?))
        })
        .collect()
}

/// Turn a noun phrase into an item sequence: lexicon first, then registry
/// names (with plural fallback), then a leading adjective plus the rest.
fn resolve_phrase(tokens: &[String], registry: &Registry) -> Option<Vec<Item>> {
    let tokens = strip_determiners(tokens);
    if tokens.is_empty() {
        return None;
    }
    let candidates = phrase_candidates(tokens);
    for cand in &candidates {
        for (phrase, items) in LEXICON {
            if cand.len() == phrase.len() && cand.iter().zip(*phrase).all(|(a, b)| a == b) {
                return lexicon_items(items, registry);
            }
        }
    }
    for cand in &candidates {
        if let Some(target) = registry.resolve_target(&cand.join(" ")) {
            return Some(vec![Item::plain(target)]);
        }
    }
    for take in (1..=2.min(tokens.len() - 1)).rev() {
        let Some(adjective) = Adjective::resolve(&tokens[..take].join(" ")) else {
            continue;
        };
        if let Some(mut items) = resolve_phrase(&tokens[take..], registry) {
            if items[0].adjective.is_none() {
                items[0].adjective = Some(adjective);
                return Some(items);
            }
        }
    }
    None
}

/// Split on standalone of/on/in words. `None` when a segment comes out
/// empty (leading/doubled/trailing preposition).
fn split_segments(tokens: &[String]) -> Option<Vec<&[String]>> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, t) in tokens.iter().enumerate() {
        if PREPOSITIONS.contains(&t.as_str()) {
            if i == start {
                return None;
            }
            out.push(&tokens[start..i]);
            start = i + 1;
        }
    }
    if start >= tokens.len() {
        return None;
    }
    out.push(&tokens[start..]);
    Some(out)
}

/// Resolve prepositional segments into one chain, innermost first. A segment
/// that is purely a location ("middle", "top left") becomes an adjective on
/// the following segment (or an any-object item when nothing follows).
fn chain_from_segments(segments: &[&[String]], registry: &Registry) -> Option<Vec<Item>> {
    let mut items = Vec::new();
    let mut pending: Option<Location> = None;
    for (i, segment) in segments.iter().enumerate() {
        let segment = strip_determiners(segment);
        if segment.is_empty() {
            return None;
        }
        if let Some(loc) = Location::from_name(&segment.join(" ")) {
            if i + 1 < segments.len() {
                pending = Some(loc);
                continue;
            }
            items.push(Item::new(
                Some(Adjective::Location(loc)),
                Target::AnyObject,
            ));
            continue;
        }
        let mut seq = resolve_phrase(segment, registry)?;
        if let Some(loc) = pending.take() {
            if seq[0].adjective.is_none() {
                seq[0].adjective = Some(Adjective::Location(loc));
            }
        }
        items.append(&mut seq);
    }
    if items.is_empty() {
        None
    } else {
        Some(items)
    }
}

fn single_chain(items: Vec<Item>) -> Program {
    Program::new(vec![FindChain::new(items)])
}

fn plain_item(name: &str, registry: &Registry) -> Option<Item> {
    Some(Item::plain(registry.resolve_target(name)?))
}

// ---- fresh-question rules ----

/// Spoken program text ("find the number on the bus" is not dictation, but
/// "find NUMBER on BUS" read aloud is).
fn rule_dictation(tokens: &[String], raw: &str, registry: &Registry) -> Option<Program> {
    if tokens.first().map(String::as_str) != Some("find") {
        return None;
    }
    parse_program(raw.trim().trim_end_matches(['.', '?', '!']), registry).ok()
}

/// "What (word) is my Y set to?" → the number on Y.
fn rule_set_to(tokens: &[String], registry: &Registry) -> Option<Program> {
    let rest = eat(tokens, "what")?;
    let (to, rest) = rest.split_last()?;
    let (set, rest) = rest.split_last()?;
    if to != "to" || set != "set" {
        return None;
    }
    let is_pos = rest.iter().position(|t| t == "is")?;
    if is_pos > 1 {
        return None; // at most one word between "what" and "is"
    }
    let y = resolve_phrase(&rest[is_pos + 1..], registry)?;
    let mut items = vec![plain_item("number", registry)?];
    items.extend(y);
    Some(single_chain(items))
}

/// "How many X (… verb …) on/in Y?" → count of X on Y.
fn rule_how_many(tokens: &[String], registry: &Registry) -> Option<Program> {
    let rest = eat(eat(tokens, "how")?, "many")?;
    const STOPS: [&str; 9] = [
        "are", "is", "was", "were", "do", "does", "did", "can", "will",
    ];
    let x_end = rest
        .iter()
        .position(|t| {
            STOPS.contains(&t.as_str()) || PREPOSITIONS.contains(&t.as_str()) || t == "at"
        })
        .unwrap_or(rest.len());
    let x = resolve_phrase(&rest[..x_end], registry)?;
    let container = (x_end..rest.len())
        .filter(|&i| PREPOSITIONS.contains(&rest[i].as_str()) || rest[i] == "at")
        .next_back();
    let mut items = vec![plain_item("count", registry)?];
    items.extend(x);
    if let Some(ci) = container {
        items.extend(resolve_phrase(&rest[ci + 1..], registry)?);
    }
    Some(single_chain(items))
}

/// "What does this Y say?" → any text on Y.
fn rule_say(tokens: &[String], registry: &Registry) -> Option<Program> {
    let rest = eat(eat(tokens, "what")?, "does")?;
    let (say, body) = rest.split_last()?;
    if say != "say" {
        return None;
    }
    let y = resolve_phrase(body, registry)?;
    let mut items = vec![plain_item("any text", registry)?];
    items.extend(y);
    Some(single_chain(items))
}

/// "Is this Y empty?" → any object on Y.
fn rule_empty(tokens: &[String], registry: &Registry) -> Option<Program> {
    eat_any(tokens, &["is", "are"])?;
    let (empty, body) = tokens[1..].split_last()?;
    if empty != "empty" {
        return None;
    }
    let y = resolve_phrase(body, registry)?;
    let mut items = vec![plain_item("any object", registry)?];
    items.extend(y);
    Some(single_chain(items))
}

/// "Is/are my X on/in the Y?" → X on Y.
fn rule_is_on(tokens: &[String], registry: &Registry) -> Option<Program> {
    eat_any(tokens, &["is", "are"])?;
    let prep = tokens
        .iter()
        .position(|t| PREPOSITIONS.contains(&t.as_str()))?;
    let x = resolve_phrase(&tokens[1..prep], registry)?;
    let y = resolve_phrase(&tokens[prep + 1..], registry)?;
    let mut items = x;
    items.extend(y);
    Some(single_chain(items))
}

/// "What is the X of/on/in the Y …?" — the general reading question.
fn rule_what_is(tokens: &[String], registry: &Registry) -> Option<Program> {
    let rest = eat(tokens, "what")
        .and_then(|r| eat_any(r, &["is", "are"]))
        .or_else(|| eat(tokens, "whats"))?;
    let segments = split_segments(rest)?;
    let items = chain_from_segments(&segments, registry)?;
    Some(single_chain(items))
}

/// "Read (out) the X on/of Y." — like what-is, spoken imperatively.
fn rule_read(tokens: &[String], registry: &Registry) -> Option<Program> {
    let rest = eat(tokens, "read")?;
    let rest = eat(rest, "out").unwrap_or(rest);
    let segments = split_segments(rest)?;
    let items = chain_from_segments(&segments, registry)?;
    Some(single_chain(items))
}

fn fresh_rules(tokens: &[String], raw: &str, registry: &Registry) -> Option<Program> {
    rule_dictation(tokens, raw, registry)
        .or_else(|| rule_set_to(tokens, registry))
        .or_else(|| rule_how_many(tokens, registry))
        .or_else(|| rule_say(tokens, registry))
        .or_else(|| rule_empty(tokens, registry))
        .or_else(|| rule_is_on(tokens, registry))
        .or_else(|| rule_what_is(tokens, registry))
        .or_else(|| rule_read(tokens, registry))
}

// ---- follow-up rules (a prior program is being modified) ----

/// "Also read (out) the X (of the Y)" → append a chain; without an explicit
/// container the prior chain's outermost item is reused.
fn rule_also_read(tokens: &[String], prior: &Program, registry: &Registry) -> Option<Program> {
    let rest = eat(eat(tokens, "also")?, "read")?;
    let rest = eat(rest, "out").unwrap_or(rest);
    let segments = split_segments(rest)?;
    let mut items = chain_from_segments(&segments, registry)?;
    if segments.len() == 1 {
        items.push(prior.chains.first()?.outermost().clone());
    }
    let mut program = prior.clone();
    program.chains.push(FindChain::new(items));
    Some(program)
}

/// "Add the X" → append a chain, reusing the prior outermost container.
fn rule_add(tokens: &[String], prior: &Program, registry: &Registry) -> Option<Program> {
    let rest = eat(tokens, "add")?;
    let segments = split_segments(rest)?;
    let mut items = chain_from_segments(&segments, registry)?;
    if segments.len() == 1 {
        items.push(prior.chains.first()?.outermost().clone());
    }
    let mut program = prior.clone();
    program.chains.push(FindChain::new(items));
    Some(program)
}

/// "Only for ADJ Y" → put the adjective on the matching item.
fn rule_only(tokens: &[String], prior: &Program, registry: &Registry) -> Option<Program> {
    let rest = eat(tokens, "only")?;
    let rest = eat_any(rest, &["for", "the"]).unwrap_or(rest);
    for take in (1..=2.min(rest.len().saturating_sub(1))).rev() {
        let Some(adjective) = Adjective::resolve(&rest[..take].join(" ")) else {
            continue;
        };
        let Some(y) = resolve_phrase(&rest[take..], registry) else {
            continue;
        };
        let target = &y.first()?.target;
        let mut program = prior.clone();
        let mut hit = false;
        for chain in &mut program.chains {
            if let Some(item) = chain.items.iter_mut().find(|i| &i.target == target) {
                item.adjective = Some(adjective);
                hit = true;
            }
        }
        if hit {
            return Some(program);
        }
    }
    None
}

fn replace_innermost(prior: &Program, replacement: Vec<Item>) -> Option<Program> {
    let chain = prior.chains.first()?;
    let mut items = replacement;
    items.extend(chain.items[1..].iter().cloned());
    Some(single_chain(items))
}

/// "Just say the X" → replace what is read, keep where it is read from.
fn rule_just_say(tokens: &[String], prior: &Program, registry: &Registry) -> Option<Program> {
    let rest = eat(tokens, "just")?;
    let rest = eat_any(rest, &["say", "read", "show"])?;
    let rest = eat(rest, "out").unwrap_or(rest);
    let x = resolve_phrase(rest, registry)?;
    replace_innermost(prior, x)
}

/// "Read the X instead" → same replacement, different phrasing.
fn rule_instead(tokens: &[String], prior: &Program, registry: &Registry) -> Option<Program> {
    let (instead, body) = tokens.split_last()?;
    if instead != "instead" {
        return None;
    }
    let rest = eat_any(body, &["read", "say", "show"])?;
    let rest = eat(rest, "out").unwrap_or(rest);
    let x = resolve_phrase(rest, registry)?;
    replace_innermost(prior, x)
}

/// "What's in the top left?" → same kind of content, new location.
fn rule_whats_in(tokens: &[String], prior: &Program) -> Option<Program> {
    let rest = eat(tokens, "whats")
        .or_else(|| eat(tokens, "what").and_then(|r| eat(r, "is")))?;
    let rest = eat(rest, "in")?;
    let loc = Location::from_name(&strip_determiners(rest).join(" "))?;
    let innermost = prior.chains.first()?.items.first()?.clone();
    Some(single_chain(vec![
        innermost,
        Item::new(Some(Adjective::Location(loc)), Target::AnyObject),
    ]))
}

/// "Are my X here?" → look for X in the prior program's containers.
fn rule_here(tokens: &[String], prior: &Program, registry: &Registry) -> Option<Program> {
    eat_any(tokens, &["are", "is"])?;
    let (here, body) = tokens[1..].split_last()?;
    if here != "here" {
        return None;
    }
    let x = resolve_phrase(body, registry)?;
    replace_innermost(prior, x)
}

/// "Remove the X" → drop the chain reading X, or the X item of a chain.
fn rule_remove(tokens: &[String], prior: &Program, registry: &Registry) -> Option<Program> {
    let rest = eat(tokens, "remove")?;
    let x = resolve_phrase(rest, registry)?;
    let target = &x.first()?.target;
    let mut program = prior.clone();
    if program.chains.len() > 1 {
        if let Some(pos) = program
            .chains
            .iter()
            .position(|c| &c.innermost().target == target)
        {
            program.chains.remove(pos);
            return Some(program);
        }
    }
    for chain in &mut program.chains {
        if chain.items.len() < 2 {
            continue;
        }
        if let Some(pos) = chain.items.iter().position(|i| &i.target == target) {
            chain.items.remove(pos);
            return Some(program);
        }
    }
    None
}

fn followup_rules(tokens: &[String], prior: &Program, registry: &Registry) -> Option<Program> {
    rule_also_read(tokens, prior, registry)
        .or_else(|| rule_add(tokens, prior, registry))
        .or_else(|| rule_only(tokens, prior, registry))
        .or_else(|| rule_just_say(tokens, prior, registry))
        .or_else(|| rule_instead(tokens, prior, registry))
        .or_else(|| rule_whats_in(tokens, prior))
        .or_else(|| rule_here(tokens, prior, registry))
        .or_else(|| rule_remove(tokens, prior, registry))
}

/// Answer a question with a program, deterministically. With `prior`, the
/// follow-up verbs are tried first; a fresh question shape replaces the
/// program wholesale; anything unrecognized is refused.
pub fn offline_synthesize(
    question: &str,
    prior: Option<&Program>,
    registry: &Registry,
) -> NLOutcome {
    let raw = question.strip_prefix(FOLLOWUP_PREFIX).unwrap_or(question);
    let tokens = normalize(raw);
    if tokens.is_empty() {
        return NLOutcome::Refusal(REFUSAL_TEXT.to_owned());
    }
    if let Some(prior) = prior {
        if let Some(program) = followup_rules(&tokens, prior, registry) {
            return NLOutcome::Program(program);
        }
    }
    match fresh_rules(&tokens, raw, registry) {
        Some(program) => NLOutcome::Program(program),
        None => NLOutcome::Refusal(REFUSAL_TEXT.to_owned()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::print::print_program;

    fn registry() -> &'static Registry {
        Registry::builtin()
    }

    fn program_text(question: &str, prior: Option<&Program>) -> String {
        match offline_synthesize(question, prior, registry()) {
            NLOutcome::Program(p) => print_program(&p),
            NLOutcome::Refusal(text) => panic!("refused `{question}`: {text}"),
        }
    }

    #[test]
    fn reading_questions_become_find_chains() {
        assert_eq!(
            program_text("What is the license plate number of this car?", None),
            "find ANY TEXT on LICENSE PLATE on CAR"
        );
        assert_eq!(
            program_text("How many people are sitting on this bench?", None),
            "find COUNT on PERSON on BENCH"
        );
        assert_eq!(
            program_text("Read the expiration date on these products.", None),
            "find DATE on GROCERY PRODUCT"
        );
    }

    #[test]
    fn dictated_program_text_is_parsed_directly() {
        assert_eq!(program_text("find COLOR on CAR.", None), "find COLOR on CAR");
        assert_eq!(
            program_text("find number on red bus", None),
            "find NUMBER on red BUS"
        );
    }

    #[test]
    fn route_name_instead_swaps_the_innermost_item() {
        let prior = crate::parse::parse_program("find NUMBER on BUS", registry()).unwrap();
        assert_eq!(
            program_text("Read the route name instead", Some(&prior)),
            "find ANY TEXT on BUS"
        );
    }

    #[test]
    fn fresh_question_replaces_a_prior_program_wholesale() {
        let prior = crate::parse::parse_program("find NUMBER on BUS", registry()).unwrap();
        assert_eq!(
            program_text("What is the time on my microwave?", Some(&prior)),
            "find TIME on MICROWAVE"
        );
    }

    #[test]
    fn remove_drops_a_chain_or_an_item() {
        let prior =
            crate::parse::parse_program("find DATE on CAN, find NUMBER on CAN", registry())
                .unwrap();
        assert_eq!(
            program_text("Remove the number", Some(&prior)),
            "find DATE on CAN"
        );
        let prior = crate::parse::parse_program("find NUMBER on LICENSE PLATE on CAR", registry())
            .unwrap();
        assert_eq!(
            program_text("Remove the license plate", Some(&prior)),
            "find NUMBER on CAR"
        );
    }

    #[test]
    fn vague_questions_are_refused() {
        for q in ["What is this?", "", "Help me please", "What?"] {
            match offline_synthesize(q, None, registry()) {
                NLOutcome::Refusal(text) => assert_eq!(text, REFUSAL_TEXT),
                NLOutcome::Program(p) => panic!("`{q}` became {}", print_program(&p)),
            }
        }
    }
}
