//! Canonical program text and spoken summaries.

use crate::ast::{Item, Program};

/// Canonical program text: lowercase keywords and adjectives, uppercase
/// target names, chains joined by ", ". Parsing this text reproduces the
/// program.
pub fn print_program(program: &Program) -> String {
    program
        .chains
        .iter()
        .map(|chain| {
            let items = chain
                .items
                .iter()
                .map(item_text)
                .collect::<Vec<_>>()
                .join(" on ");
            format!("find {items}")
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn item_text(item: &Item) -> String {
    let target = item.target.canonical_name().to_uppercase();
    match &item.adjective {
        Some(adj) => format!("{} {target}", adj.name()),
        None => target,
    }
}

/// Spoken description: "Find any number on any bus." with later chains
/// introduced by "Then, find ...". Unadorned items read as "any {noun}";
/// adjectives replace the "any".
pub fn summarize(program: &Program) -> String {
    let mut out = String::new();
    for (i, chain) in program.chains.iter().enumerate() {
        if i == 0 {
            out.push_str("Find ");
        } else {
            out.push_str(". Then, find ");
        }
        let phrases = chain
            .items
            .iter()
            .map(item_phrase)
            .collect::<Vec<_>>()
            .join(" on ");
        out.push_str(&phrases);
    }
    out.push('.');
    out
}

fn item_phrase(item: &Item) -> String {
    let noun = item.target.noun();
    match &item.adjective {
        Some(adj) => format!("{} {noun}", adj.name()),
        None => format!("any {noun}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_program;
    use crate::registry::Registry;

    fn parse(text: &str) -> Program {
        parse_program(text, Registry::builtin()).unwrap()
    }

    #[test]
    fn canonical_text() {
        let p = parse("Find Number On Bus");
        assert_eq!(print_program(&p), "find NUMBER on BUS");
        let p = parse("find text on license plate on car, find color on car");
        assert_eq!(
            print_program(&p),
            "find ANY TEXT on LICENSE PLATE on CAR, find COLOR on CAR"
        );
        let p = parse("find red bus");
        assert_eq!(print_program(&p), "find red BUS");
    }

    #[test]
    fn summary_uses_any_for_unadorned_items() {
        assert_eq!(
            summarize(&parse("find NUMBER on BUS")),
            "Find any number on any bus."
        );
        assert_eq!(
            summarize(&parse("find NUMBER on red BUS")),
            "Find any number on red bus."
        );
    }

    #[test]
    fn multi_chain_summary_matches_spoken_form() {
        let p = parse("find TEXT on LICENSE PLATE on CAR, find COLOR on CAR");
        assert_eq!(
            summarize(&p),
            "Find any text on any license plate on any car. Then, find any color on any car."
        );
    }

    #[test]
    fn default_explore_program_reads_naturally() {
        assert_eq!(
            summarize(&parse("find ANY OBJECT on ANY OBJECT")),
            "Find any object on any object."
        );
    }
}
